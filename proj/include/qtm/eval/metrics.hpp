#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qtm/corpus/trec.hpp"
#include "qtm/retrieval/run_io.hpp"

namespace qtm::eval {

inline constexpr std::size_t kEvaluationDepth = 1000;

/// Mean over the topic's relevant documents of precision at their rank; relevant documents
/// not retrieved within `depth` contribute 0 and unjudged documents count as non-relevant.
/// nullopt when the topic has no relevant document.
std::optional<double> average_precision(std::span<const std::string> ranked, const corpus::Judgments& judgments,
                                        int topic, std::size_t depth = kEvaluationDepth);

/// DCG@k with gain = grade and discount 1/log2(rank + 1), over the ideal DCG@k.
/// nullopt when the topic has no relevant document.
std::optional<double> ndcg_at_k(std::span<const std::string> ranked, const corpus::Judgments& judgments, int topic,
                                std::size_t k = 10);

struct EvalRecord {
    int topic_id = 0;
    double ap = 0.0;
    double ndcg10 = 0.0;
};

/// One record per run topic with at least one relevant document, in topic order. Topics
/// without relevant documents are skipped with a warning.
std::vector<EvalRecord> evaluate_run(const retrieval::Run& run, const corpus::Judgments& judgments);

struct Summary {
    std::size_t topics = 0;
    double map = 0.0;
    double ndcg10 = 0.0;
};

Summary summarize(std::span<const EvalRecord> records);

/// `topic<TAB>ap<TAB>ndcg@10` lines with a header and a final `all` row.
void write_per_topic(std::ostream& out, std::span<const EvalRecord> records);

}  // namespace qtm::eval
