#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/lm/document_model.hpp"

namespace qtm::retrieval {

struct ScoredDocument {
    DocId doc;
    double score;  // log query likelihood (or cross entropy for weighted queries)
};

/// Ordered by (score desc, external doc id asc); no duplicates.
struct Ranking {
    int topic_id = 0;
    std::vector<ScoredDocument> entries;
};

/// Top-k documents by sum_t w_t log p(t|d) under `model`, over every non-empty document with
/// a finite score. Equal scores are ordered by ascending external doc id.
/// Throws InputError for k == 0 or an empty query.
Ranking search(const corpus::InvertedIndex& index, const lm::LanguageModel& model, const lm::WeightedQuery& query,
               std::size_t k);

/// One pseudo-relevant document, detached from the index so feedback methods can also run on
/// synthetic documents.
struct FeedbackDocument {
    std::string doc_id;
    std::vector<TermCount> terms;  // sorted by term id
    std::uint32_t length = 0;      // |d|
    std::uint32_t distinct = 0;    // m_d
    double log_score = 0.0;
    double weight = 0.0;

    std::uint32_t count(TermId t) const;
};

/// Top-|F| documents with their posterior weights w_d (sum to 1, ordered like the scores).
struct FeedbackSet {
    std::vector<FeedbackDocument> documents;

    std::size_t size() const { return documents.size(); }
};

/// w_d = exp(s_d - max s) / sum_d' exp(s_d' - max s). Throws InputError for an empty input
/// or a non-finite score.
std::vector<double> posterior_weights(std::span<const double> log_scores);

/// Fills in `weight` from `log_score` for every document.
FeedbackSet make_feedback_set(std::vector<FeedbackDocument> documents);
/// The first min(size, ranking length) entries of a ranking.
FeedbackSet make_feedback_set(const corpus::InvertedIndex& index, const Ranking& ranking, std::size_t size);

}  // namespace qtm::retrieval
