#include "qtm/feedback/pipeline.hpp"

#include <cmath>

#include <fmt/core.h>

#include "qtm/common.hpp"

namespace qtm::feedback {

void validate(const FeedbackParams& params) {
    if (params.documents == 0) throw ConfigError("fb-docs must be at least 1");
    if (params.terms == 0) throw ConfigError("fb-terms must be at least 1");
    if (!(params.pi >= 0.0 && params.pi <= 1.0)) throw ConfigError(fmt::format("pi must lie in [0, 1], got {}", params.pi));
    if (!(params.smm_lambda >= 0.0 && params.smm_lambda < 1.0)) {
        throw ConfigError(fmt::format("smm-lambda must lie in [0, 1), got {}", params.smm_lambda));
    }
    if (params.omega && !(*params.omega >= 0.0 && *params.omega <= 1.0)) {
        throw ConfigError(fmt::format("fb-omega must lie in [0, 1], got {}", *params.omega));
    }
    if (params.mu && !(*params.mu >= 0.0 && std::isfinite(*params.mu))) {
        throw ConfigError(fmt::format("fb-mu must be >= 0, got {}", *params.mu));
    }
}

ExpansionModel expand(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                      const lm::LanguageModel& retrieval, const FeedbackParams& params) {
    const auto& background = *context.background;
    switch (params.method) {
        case Method::qtm_spud: {
            const double omega = params.omega.value_or(retrieval.kind() == lm::ModelKind::spud ? retrieval.omega() : 0.8);
            return build_qtm(feedback, context, spud_topical(background, omega), params.terms, Method::qtm_spud,
                             params.topical_threshold);
        }
        case Method::qtm_dir: {
            const double mu = params.mu.value_or(retrieval.kind() == lm::ModelKind::dirichlet ? retrieval.mu() : 1000.0);
            return build_qtm(feedback, context, dirichlet_topical(background, mu), params.terms, Method::qtm_dir,
                             params.topical_threshold);
        }
        case Method::rm3: {
            const auto shared = retrieval.background_ptr();
            if (retrieval.kind() == lm::ModelKind::spud && params.omega && *params.omega > 0.0) {
                const auto repr = lm::LanguageModel::spud(shared, {*params.omega});
                return build_rm1(feedback, context, &repr, params.terms);
            }
            if (retrieval.kind() == lm::ModelKind::dirichlet && params.mu && *params.mu > 0.0) {
                const auto repr = lm::LanguageModel::dirichlet(shared, {*params.mu});
                return build_rm1(feedback, context, &repr, params.terms);
            }
            return build_rm1(feedback, context, nullptr, params.terms);
        }
        case Method::smm:
            return build_smm(feedback, context, params.smm_lambda, params.terms);
        case Method::pdcm:
            return build_pdcm(feedback, context, params.terms);
        case Method::none:
            break;
    }
    throw ConfigError("method 'none' does not select expansion terms");
}

retrieval::Ranking search_expanded(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                                   const ExpandedQuery& query, std::size_t depth) {
    const auto weighted = lm::resolve_query(index.lexicon(), query.topic_id, query.weights);
    return retrieval::search(index, model, weighted, depth);
}

FeedbackRun run_feedback(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                         const corpus::TopicQuery& topic, const FeedbackParams& params, std::size_t depth,
                         const corpus::Stoplist* stoplist) {
    validate(params);
    FeedbackRun run;
    const auto original = query_model(topic);
    run.first_pass = retrieval::search(index, model, lm::resolve_query(index.lexicon(), topic), depth);
    if (params.method == Method::none || run.first_pass.entries.empty()) {
        run.query = {topic.topic_id, 0.0, original};
        run.ranking = run.first_pass;
        return run;
    }
    const auto feedback = retrieval::make_feedback_set(index, run.first_pass, params.documents);
    const FeedbackContext context{&index.lexicon(), &model.background(), stoplist};
    run.expansion = expand(feedback, context, model, params);
    run.query = interpolate(original, run.expansion->distribution(), params.pi, topic.topic_id);
    run.ranking = search_expanded(index, model, run.query, depth);
    return run;
}

}  // namespace qtm::feedback
