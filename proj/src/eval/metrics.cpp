#include "qtm/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "qtm/common.hpp"

namespace qtm::eval {

std::optional<double> average_precision(std::span<const std::string> ranked, const corpus::Judgments& judgments,
                                        int topic, std::size_t depth) {
    const auto relevant = judgments.relevant_count(topic);
    if (relevant == 0) return std::nullopt;
    std::unordered_set<std::string_view> seen;
    double sum = 0.0;
    std::size_t found = 0;
    std::size_t rank = 0;
    for (const auto& doc : ranked) {
        if (rank == depth) break;
        if (!seen.insert(doc).second) continue;
        ++rank;
        if (judgments.is_relevant(topic, doc)) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(relevant);
}

std::optional<double> ndcg_at_k(std::span<const std::string> ranked, const corpus::Judgments& judgments, int topic,
                                std::size_t k) {
    auto grades = judgments.relevant_grades(topic);
    if (grades.empty()) return std::nullopt;
    std::sort(grades.begin(), grades.end(), std::greater<>());
    double ideal = 0.0;
    for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) ideal += grades[i] / std::log2(double(i) + 2.0);

    std::unordered_set<std::string_view> seen;
    double dcg = 0.0;
    std::size_t rank = 0;
    for (const auto& doc : ranked) {
        if (rank == k) break;
        if (!seen.insert(doc).second) continue;
        ++rank;
        const auto g = judgments.grade(topic, doc);
        if (g && *g > 0) dcg += *g / std::log2(double(rank) + 1.0);
    }
    return dcg / ideal;
}

std::vector<EvalRecord> evaluate_run(const retrieval::Run& run, const corpus::Judgments& judgments) {
    std::vector<EvalRecord> out;
    for (const auto& [topic, entries] : run) {
        std::vector<std::string> ranked;
        ranked.reserve(entries.size());
        for (const auto& e : entries) ranked.push_back(e.doc_id);
        const auto ap = average_precision(ranked, judgments, topic);
        if (!ap) {
            warn(fmt::format("topic {}: no relevant documents judged; excluded from MAP", topic));
            continue;
        }
        out.push_back({topic, *ap, *ndcg_at_k(ranked, judgments, topic)});
    }
    return out;
}

Summary summarize(std::span<const EvalRecord> records) {
    Summary s;
    s.topics = records.size();
    if (records.empty()) return s;
    for (const auto& r : records) {
        s.map += r.ap;
        s.ndcg10 += r.ndcg10;
    }
    s.map /= static_cast<double>(records.size());
    s.ndcg10 /= static_cast<double>(records.size());
    return s;
}

void write_per_topic(std::ostream& out, std::span<const EvalRecord> records) {
    fmt::print(out, "topic\tap\tndcg@10\n");
    for (const auto& r : records) fmt::print(out, "{}\t{:.4f}\t{:.4f}\n", r.topic_id, r.ap, r.ndcg10);
    const auto s = summarize(records);
    fmt::print(out, "all\t{:.4f}\t{:.4f}\n", s.map, s.ndcg10);
}

}  // namespace qtm::eval
