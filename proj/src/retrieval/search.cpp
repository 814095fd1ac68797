#include "qtm/retrieval/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "qtm/numeric/softmax.hpp"

namespace qtm::retrieval {

Ranking search(const corpus::InvertedIndex& index, const lm::LanguageModel& model, const lm::WeightedQuery& query,
               std::size_t k) {
    if (k == 0) throw InputError("search depth k must be at least 1");
    if (query.terms.empty()) throw InputError("topic " + std::to_string(query.topic_id) + ": query unscorable");

    // score(d) = sum_t w_t log(w_d c/|d| + (1-w_d) b_t). For a term missing from d the summand
    // is w_t [log(1-w_d) + log b_t], so accumulate only the matched corrections over postings.
    const auto n = index.document_count();
    std::vector<double> matched_log(n, 0.0);   // sum over matched terms of w_t log p(t|d)
    std::vector<double> matched_bg(n, 0.0);    // sum over matched terms of w_t log b_t
    std::vector<double> matched_weight(n, 0.0);

    double total_weight = 0.0;
    double total_bg = 0.0;
    for (const auto& [t, w] : query.terms) {
        total_weight += w;
        const double bg = model.background_prob(t);
        const double log_bg = bg > 0.0 ? std::log(bg) : -std::numeric_limits<double>::infinity();
        total_bg += w * log_bg;
        for (const auto& p : index.postings(t)) {
            const auto& doc = index.document(p.doc);
            matched_log[p.doc] += w * std::log(model.expected_term_prob(p.count, doc.token_count, doc.distinct_count, t));
            matched_bg[p.doc] += w * log_bg;
            matched_weight[p.doc] += w;
        }
    }

    Ranking ranking;
    ranking.topic_id = query.topic_id;
    std::vector<ScoredDocument> scored;
    scored.reserve(n);
    for (DocId d = 0; d < n; ++d) {
        const auto& doc = index.document(d);
        if (doc.empty()) continue;
        double score = matched_log[d];
        const double unmatched = total_weight - matched_weight[d];
        if (unmatched > 1e-12 * total_weight) {
            const double rest = 1.0 - model.topic_weight(doc.token_count, doc.distinct_count);
            if (!(rest > 0.0)) continue;
            score += unmatched * std::log(rest) + (total_bg - matched_bg[d]);
        }
        if (!std::isfinite(score)) continue;
        scored.push_back({d, score});
    }

    auto before = [&](const ScoredDocument& a, const ScoredDocument& b) {
        if (a.score != b.score) return a.score > b.score;
        return index.document(a.doc).doc_id < index.document(b.doc).doc_id;
    };
    const auto depth = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(depth), scored.end(), before);
    scored.resize(depth);
    ranking.entries = std::move(scored);
    return ranking;
}

std::uint32_t FeedbackDocument::count(TermId t) const {
    const auto it = std::lower_bound(terms.begin(), terms.end(), t,
                                     [](const TermCount& tc, TermId id) { return tc.term < id; });
    return (it != terms.end() && it->term == t) ? it->count : 0;
}

std::vector<double> posterior_weights(std::span<const double> log_scores) {
    if (log_scores.empty()) throw InputError("feedback set must contain at least one document");
    for (auto s : log_scores) {
        if (!std::isfinite(s)) throw InputError("feedback document has a non-finite score");
    }
    const Eigen::Map<const Eigen::ArrayXd> scores(log_scores.data(), static_cast<Eigen::Index>(log_scores.size()));
    const Eigen::ArrayXd w = numeric::softmax(scores);
    return {w.data(), w.data() + w.size()};
}

FeedbackSet make_feedback_set(std::vector<FeedbackDocument> documents) {
    std::vector<double> scores;
    scores.reserve(documents.size());
    for (const auto& d : documents) scores.push_back(d.log_score);
    const auto weights = posterior_weights(scores);
    for (std::size_t i = 0; i < documents.size(); ++i) documents[i].weight = weights[i];
    return FeedbackSet{std::move(documents)};
}

FeedbackSet make_feedback_set(const corpus::InvertedIndex& index, const Ranking& ranking, std::size_t size) {
    std::vector<FeedbackDocument> docs;
    const auto n = std::min(size, ranking.entries.size());
    docs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = ranking.entries[i];
        const auto& record = index.document(entry.doc);
        docs.push_back({record.doc_id, record.terms, record.token_count, record.distinct_count, entry.score, 0.0});
    }
    return make_feedback_set(std::move(docs));
}

}  // namespace qtm::retrieval
