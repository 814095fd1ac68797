#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtm/corpus/trec.hpp"

namespace qtm::feedback {

enum class Method { none, rm3, smm, pdcm, qtm_dir, qtm_spud };

std::string_view to_string(Method method);
/// Accepts the names printed by to_string. Throws ConfigError otherwise.
Method parse_method(std::string_view name);

using TermDistribution = std::map<std::string, double>;

struct SelectedTerm {
    std::string term;
    double score = 0.0;        // raw selection score
    double probability = 0.0;  // share of the selected mass
};

/// Output of a term-selection method. `scored` holds the raw score of every candidate;
/// `selected` the top |T| in rank order with their normalised probabilities.
struct ExpansionModel {
    Method method = Method::none;
    TermDistribution scored;
    std::vector<SelectedTerm> selected;

    TermDistribution distribution() const;
};

/// Top `count` terms by (score desc, term asc), each divided by the kept sum.
/// Candidates with score <= `threshold` are dropped first when a threshold is given.
/// Throws InputError for an empty input, count == 0, or when nothing informative is left.
std::vector<SelectedTerm> truncate_and_normalize(const TermDistribution& scored, std::size_t count,
                                                 std::optional<double> threshold = std::nullopt);

/// Title term counts divided by the title length.
TermDistribution query_model(const corpus::TopicQuery& query);

struct ExpandedQuery {
    int topic_id = 0;
    double pi = 0.0;
    TermDistribution weights;
};

/// (1 - pi) query + pi expansion over the union of both supports; terms whose combined
/// weight is zero are left out, so pi = 0 and pi = 1 return the inputs unchanged.
/// Throws ConfigError unless 0 <= pi <= 1.
ExpandedQuery interpolate(const TermDistribution& query, const TermDistribution& expansion, double pi,
                          int topic_id = 0);

}  // namespace qtm::feedback
