#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/retrieval/search.hpp"

namespace qtm::retrieval {

/// Writes `topic Q0 docno rank score tag` lines, ranks from 1, scores with 6 decimals.
void write_run(std::ostream& out, const corpus::InvertedIndex& index, const Ranking& ranking, std::string_view tag);

struct RunEntry {
    std::string doc_id;
    int rank = 0;
    double score = 0.0;
};

/// Per-topic entries in rank order. Throws ParseError naming the line on malformed input.
using Run = std::map<int, std::vector<RunEntry>>;
Run read_run(std::istream& in);

/// External doc ids of a ranking, in order.
std::vector<std::string> ranked_doc_ids(const corpus::InvertedIndex& index, const Ranking& ranking);

}  // namespace qtm::retrieval
