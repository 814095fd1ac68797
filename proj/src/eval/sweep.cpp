#include "qtm/eval/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "qtm/common.hpp"
#include "qtm/retrieval/run_io.hpp"

namespace qtm::eval {

SweepGrid SweepGrid::defaults() {
    SweepGrid g;
    for (int i = 1; i <= 9; ++i) g.pi.push_back(i / 10.0);
    g.documents = {5, 10, 20, 30, 50};
    g.terms = {10, 20, 30, 50, 75, 100};
    return g;
}

std::size_t SweepGrid::size() const { return pi.size() * documents.size() * terms.size() * smoothing.size(); }

GridPoint SweepGrid::at(std::size_t index) const {
    GridPoint p;
    p.pi = pi[index % pi.size()];
    index /= pi.size();
    p.terms = terms[index % terms.size()];
    index /= terms.size();
    p.documents = documents[index % documents.size()];
    index /= documents.size();
    p.smoothing = smoothing[index];
    return p;
}

void SweepGrid::validate() const {
    if (pi.empty()) throw ConfigError("sweep grid: pi axis is empty");
    if (documents.empty()) throw ConfigError("sweep grid: fb-docs axis is empty");
    if (terms.empty()) throw ConfigError("sweep grid: fb-terms axis is empty");
    if (smoothing.empty()) throw ConfigError("sweep grid: smoothing axis is empty");
}

feedback::FeedbackParams apply(const feedback::FeedbackParams& base, const GridPoint& point, lm::ModelKind kind) {
    auto p = base;
    p.pi = point.pi;
    p.documents = point.documents;
    p.terms = point.terms;
    if (point.smoothing) {
        const bool uses_mu = p.method == feedback::Method::qtm_dir ||
                             (p.method == feedback::Method::rm3 && kind == lm::ModelKind::dirichlet);
        (uses_mu ? p.mu : p.omega) = point.smoothing;
    }
    return p;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

void score_into(const corpus::InvertedIndex& index, const retrieval::Ranking& ranking,
                const corpus::Judgments& judgments, int topic, double& ap, double& ndcg) {
    const auto ranked = retrieval::ranked_doc_ids(index, ranking);
    ap = *average_precision(ranked, judgments, topic);
    ndcg = *ndcg_at_k(ranked, judgments, topic);
}

}  // namespace

SweepResult run_sweep(const corpus::InvertedIndex& index, const lm::LanguageModel& model,
                      const std::vector<corpus::TopicQuery>& topics, const corpus::Judgments& judgments,
                      const feedback::FeedbackParams& base, const SweepGrid& grid, std::size_t depth,
                      const corpus::Stoplist* stoplist, unsigned threads) {
    SweepResult result;
    result.grid = grid;
    if (base.method == feedback::Method::none) {
        result.grid = SweepGrid{{base.pi}, {base.documents}, {base.terms}, {std::nullopt}};
    }
    result.grid.validate();
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        feedback::validate(apply(base, result.grid.at(g), model.kind()));
    }

    std::vector<const corpus::TopicQuery*> judged;
    for (const auto& t : topics) {
        if (judgments.relevant_count(t.topic_id) == 0) {
            warn(fmt::format("topic {}: no relevant documents judged; excluded from the sweep", t.topic_id));
            continue;
        }
        judged.push_back(&t);
        result.topics.push_back(t.topic_id);
    }
    if (judged.empty()) throw InputError("no judged topics to sweep over");

    const auto points = static_cast<Eigen::Index>(result.grid.size());
    result.ap = Eigen::MatrixXd::Zero(points, static_cast<Eigen::Index>(judged.size()));
    result.ndcg = Eigen::MatrixXd::Zero(points, static_cast<Eigen::Index>(judged.size()));

    const auto& g = result.grid;
    parallel_for(judged.size(), threads, [&](std::size_t column) {
        const auto& topic = *judged[column];
        const auto col = static_cast<Eigen::Index>(column);
        retrieval::Ranking first;
        try {
            first = retrieval::search(index, model, lm::resolve_query(index.lexicon(), topic), depth);
        } catch (const InputError& e) {
            warn(fmt::format("topic {}: {}; scored as 0", topic.topic_id, e.what()));
            return;
        }
        if (base.method == feedback::Method::none || first.entries.empty()) {
            double ap = 0.0, ndcg = 0.0;
            score_into(index, first, judgments, topic.topic_id, ap, ndcg);
            result.ap.col(col).setConstant(ap);
            result.ndcg.col(col).setConstant(ndcg);
            return;
        }
        const auto original = feedback::query_model(topic);
        const feedback::FeedbackContext context{&index.lexicon(), &model.background(), stoplist};
        const auto per_docs = g.pi.size() * g.terms.size();
        for (std::size_t s = 0; s < g.smoothing.size(); ++s) {
            for (std::size_t f = 0; f < g.documents.size(); ++f) {
                const auto first_point = (s * g.documents.size() + f) * per_docs;
                const auto params = apply(base, g.at(first_point), model.kind());
                const auto fs = retrieval::make_feedback_set(index, first, params.documents);
                // Raw scores do not depend on |T| or pi: build once, truncate per |T|.
                const auto model_all = feedback::expand(fs, context, model, params);
                for (std::size_t t = 0; t < g.terms.size(); ++t) {
                    const auto selected = feedback::truncate_and_normalize(model_all.scored, g.terms[t],
                                                                           params.topical_threshold);
                    feedback::TermDistribution expansion;
                    for (const auto& st : selected) expansion.emplace(st.term, st.probability);
                    for (std::size_t p = 0; p < g.pi.size(); ++p) {
                        const auto row = static_cast<Eigen::Index>(first_point + t * g.pi.size() + p);
                        const auto query = feedback::interpolate(original, expansion, g.pi[p], topic.topic_id);
                        const auto ranking = feedback::search_expanded(index, model, query, depth);
                        score_into(index, ranking, judgments, topic.topic_id, result.ap(row, col),
                                   result.ndcg(row, col));
                    }
                }
            }
        }
    });

    result.cv = cross_validate(result.topics, result.ap, result.ndcg);
    return result;
}

void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
    std::vector<std::string> methods, collections;
    std::map<std::pair<std::string, std::string>, const SummaryRow*> cells;
    for (const auto& r : rows) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        if (std::find(collections.begin(), collections.end(), r.collection) == collections.end()) {
            collections.push_back(r.collection);
        }
        cells[{r.method, r.collection}] = &r;
    }
    fmt::print(out, "{:<12}", "method");
    for (const auto& c : collections) fmt::print(out, "\t{}", c);
    fmt::print(out, "\n");
    for (const auto& m : methods) {
        fmt::print(out, "{:<12}", m);
        for (const auto& c : collections) {
            const auto it = cells.find({m, c});
            if (it == cells.end()) {
                fmt::print(out, "\t-");
            } else {
                fmt::print(out, "\t{:.3f} ({:.3f})", it->second->map, it->second->ndcg10);
            }
        }
        fmt::print(out, "\n");
    }
}

}  // namespace qtm::eval
