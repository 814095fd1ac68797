#include "qtm/retrieval/run_io.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qtm::retrieval {

void write_run(std::ostream& out, const corpus::InvertedIndex& index, const Ranking& ranking, std::string_view tag) {
    int rank = 1;
    for (const auto& e : ranking.entries) {
        fmt::print(out, "{} Q0 {} {} {:.6f} {}\n", ranking.topic_id, index.document(e.doc).doc_id, rank++, e.score, tag);
    }
}

Run read_run(std::istream& in) {
    Run run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string topic;
        if (!(fields >> topic) || topic.front() == '#') continue;
        std::string q0, doc, tag;
        RunEntry entry;
        int topic_id = 0;
        try {
            topic_id = std::stoi(topic);
        } catch (const std::exception&) {
            throw ParseError("run line " + std::to_string(line_no) + ": topic is not an integer");
        }
        if (!(fields >> q0 >> entry.doc_id >> entry.rank >> entry.score >> tag)) {
            throw ParseError("run line " + std::to_string(line_no) + ": expected 6 columns");
        }
        run[topic_id].push_back(std::move(entry));
    }
    for (auto& [topic, entries] : run) {
        std::stable_sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    }
    return run;
}

std::vector<std::string> ranked_doc_ids(const corpus::InvertedIndex& index, const Ranking& ranking) {
    std::vector<std::string> out;
    out.reserve(ranking.entries.size());
    for (const auto& e : ranking.entries) out.push_back(index.document(e.doc).doc_id);
    return out;
}

}  // namespace qtm::retrieval
