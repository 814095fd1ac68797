#include "qtm/feedback/methods.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <fmt/core.h>

#include "qtm/common.hpp"
#include "qtm/feedback/topical.hpp"
#include "qtm/numeric/dcm.hpp"
#include "qtm/numeric/mixture.hpp"

namespace qtm::feedback {

namespace {

void check_context(const FeedbackContext& context) {
    if (context.lexicon == nullptr || context.background == nullptr) {
        throw InputError("feedback context needs a lexicon and a background model");
    }
}

// Position of each pool term, for dense per-candidate accumulators.
class PoolIndex {
  public:
    explicit PoolIndex(const std::vector<TermId>& pool) : pool_(pool) {}

    std::optional<std::size_t> find(TermId t) const {
        const auto it = std::lower_bound(pool_.begin(), pool_.end(), t);
        if (it == pool_.end() || *it != t) return std::nullopt;
        return static_cast<std::size_t>(it - pool_.begin());
    }

  private:
    const std::vector<TermId>& pool_;
};

ExpansionModel finish(Method tag, const std::vector<TermId>& pool, const FeedbackContext& context,
                      const std::vector<double>& raw, std::size_t terms, std::optional<double> threshold) {
    ExpansionModel model;
    model.method = tag;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw InputError(fmt::format("{}: non-finite score for '{}'", to_string(tag),
                                         context.lexicon->term(pool[i])));
        }
        model.scored.emplace(context.lexicon->term(pool[i]), raw[i]);
    }
    model.selected = truncate_and_normalize(model.scored, terms, threshold);
    return model;
}

}  // namespace

std::vector<TermId> candidate_pool(const retrieval::FeedbackSet& feedback, const FeedbackContext& context) {
    check_context(context);
    std::vector<TermId> pool;
    for (const auto& doc : feedback.documents) {
        for (const auto& tc : doc.terms) {
            if (tc.count == 0) continue;
            if (context.stoplist && context.stoplist->contains(context.lexicon->term(tc.term))) continue;
            pool.push_back(tc.term);
        }
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) throw InputError("feedback documents contain no candidate terms");
    return pool;
}

TopicalFn spud_topical(const lm::BackgroundModel& background, double omega) {
    if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError(fmt::format("omega must lie in [0, 1], got {}", omega));
    if (omega > 0.0 && !(background.mass > 0.0)) {
        throw ConfigError("SPUD topical probabilities need a positive background mass");
    }
    return [&background, omega](const retrieval::FeedbackDocument& d, TermId t, std::uint32_t c) {
        return topical_prob_spud<double>(c, d.length, d.distinct, omega, background.mass, background.proportion(t));
    };
}

TopicalFn dirichlet_topical(const lm::BackgroundModel& background, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError(fmt::format("mu must be >= 0, got {}", mu));
    return [&background, mu](const retrieval::FeedbackDocument&, TermId t, std::uint32_t c) {
        return topical_prob_dir<double>(c, mu, background.ml(t));
    };
}

ExpansionModel build_qtm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                         const TopicalFn& topical, std::size_t terms, Method tag, std::optional<double> threshold) {
    const auto pool = candidate_pool(feedback, context);
    const PoolIndex index(pool);
    std::vector<double> raw(pool.size(), 0.0);
    for (const auto& doc : feedback.documents) {
        for (const auto& tc : doc.terms) {
            if (const auto i = index.find(tc.term)) raw[*i] += topical(doc, tc.term, tc.count) * doc.weight;
        }
    }
    return finish(tag, pool, context, raw, terms, threshold);
}

ExpansionModel build_rm1(const retrieval::FeedbackSet& feedback, const FeedbackContext& context,
                         const lm::LanguageModel* smoothing, std::size_t terms) {
    const auto pool = candidate_pool(feedback, context);
    std::vector<double> raw(pool.size(), 0.0);
    for (const auto& doc : feedback.documents) {
        if (doc.length == 0) continue;
        if (smoothing == nullptr) {
            const PoolIndex index(pool);
            for (const auto& tc : doc.terms) {
                if (const auto i = index.find(tc.term)) {
                    raw[*i] += doc.weight * (static_cast<double>(tc.count) / doc.length);
                }
            }
        } else {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                const double p = smoothing->expected_term_prob(doc.count(pool[i]), doc.length, doc.distinct, pool[i]);
                raw[i] += doc.weight * p;
            }
        }
    }
    return finish(Method::rm3, pool, context, raw, terms, std::nullopt);
}

ExpansionModel build_smm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context, double lambda,
                         std::size_t terms, FitTrace* trace) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw ConfigError(fmt::format("smm lambda must lie in [0, 1), got {}", lambda));
    }
    const auto pool = candidate_pool(feedback, context);
    const PoolIndex index(pool);
    const auto n = static_cast<Eigen::Index>(pool.size());
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd collection(n);
    for (Eigen::Index i = 0; i < n; ++i) collection(i) = context.background->ml(pool[static_cast<std::size_t>(i)]);
    for (const auto& doc : feedback.documents) {
        for (const auto& tc : doc.terms) {
            if (const auto i = index.find(tc.term)) counts(static_cast<Eigen::Index>(*i)) += tc.count;
        }
    }
    const auto fit = numeric::fit_topic_mixture(counts, collection, lambda, kSmmMaxIterations, kSmmTolerance,
                                                trace != nullptr);
    if (trace) *trace = {fit.iterations, fit.converged, fit.log_likelihood};
    if (!fit.converged) warn(fmt::format("smm: EM stopped after {} iterations without converging", fit.iterations));
    return finish(Method::smm, pool, context, {fit.topic.data(), fit.topic.data() + n}, terms, std::nullopt);
}

ExpansionModel build_pdcm(const retrieval::FeedbackSet& feedback, const FeedbackContext& context, std::size_t terms,
                          FitTrace* trace) {
    const auto pool = candidate_pool(feedback, context);
    const PoolIndex index(pool);
    const auto n = static_cast<Eigen::Index>(pool.size());

    numeric::DcmData data;
    data.term_counts.resize(pool.size());
    Eigen::ArrayXd pooled = Eigen::ArrayXd::Zero(n);
    for (const auto& doc : feedback.documents) {
        std::uint32_t length = 0;
        for (const auto& tc : doc.terms) {
            const auto i = index.find(tc.term);
            if (!i || tc.count == 0) continue;
            data.term_counts[*i].push_back(tc.count);
            pooled(static_cast<Eigen::Index>(*i)) += tc.count;
            length += tc.count;
        }
        if (length > 0) data.lengths.push_back(length);
    }
    const double total = pooled.sum();
    const double mean_length = total / static_cast<double>(data.lengths.size());
    const Eigen::ArrayXd initial = pooled / total * mean_length;

    const auto fit = numeric::fit_dcm(data, initial, kDcmMaxIterations, kDcmTolerance, trace != nullptr);
    if (trace) *trace = {fit.iterations, fit.converged, fit.log_likelihood};
    if (!fit.converged) {
        warn(fmt::format("pdcm: fixed point stopped after {} iterations without converging{}", fit.iterations,
                         data.lengths.size() < 2 ? " (a single document cannot identify the scale)" : ""));
    }
    return finish(Method::pdcm, pool, context, {fit.alpha.data(), fit.alpha.data() + n}, terms, std::nullopt);
}

}  // namespace qtm::feedback
