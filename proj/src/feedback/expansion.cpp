#include "qtm/feedback/expansion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <fmt/core.h>

#include "qtm/common.hpp"

namespace qtm::feedback {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethodNames{{
    {Method::none, "none"},
    {Method::rm3, "rm3"},
    {Method::smm, "smm"},
    {Method::pdcm, "pdcm"},
    {Method::qtm_dir, "qtm_dir"},
    {Method::qtm_spud, "qtm_spud"},
}};

}  // namespace

std::string_view to_string(Method method) {
    for (const auto& [m, name] : kMethodNames) {
        if (m == method) return name;
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto& [m, known] : kMethodNames) {
        if (known == name) return m;
    }
    throw ConfigError(fmt::format("unknown method '{}' (expected none, rm3, smm, pdcm, qtm_dir or qtm_spud)", name));
}

TermDistribution ExpansionModel::distribution() const {
    TermDistribution out;
    for (const auto& s : selected) out.emplace(s.term, s.probability);
    return out;
}

std::vector<SelectedTerm> truncate_and_normalize(const TermDistribution& scored, std::size_t count,
                                                 std::optional<double> threshold) {
    if (scored.empty()) throw InputError("no candidate terms to select from");
    if (count == 0) throw InputError("number of expansion terms must be at least 1");

    std::vector<SelectedTerm> ranked;
    ranked.reserve(scored.size());
    for (const auto& [term, score] : scored) {
        if (!std::isfinite(score)) throw InputError(fmt::format("non-finite score for term '{}'", term));
        if (threshold && score <= *threshold) continue;
        ranked.push_back({term, score, 0.0});
    }
    const auto keep = std::min(count, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                      [](const SelectedTerm& a, const SelectedTerm& b) {
                          if (a.score != b.score) return a.score > b.score;
                          return a.term < b.term;
                      });
    ranked.resize(keep);

    double total = 0.0;
    for (const auto& s : ranked) total += s.score;
    if (!(total > 0.0)) throw InputError("no informative terms");
    for (auto& s : ranked) s.probability = s.score / total;
    return ranked;
}

TermDistribution query_model(const corpus::TopicQuery& query) {
    const double length = query.length();
    if (!(length > 0)) throw InputError(fmt::format("topic {}: empty query", query.topic_id));
    TermDistribution out;
    for (const auto& [term, count] : query.terms) out.emplace(term, count / length);
    return out;
}

ExpandedQuery interpolate(const TermDistribution& query, const TermDistribution& expansion, double pi,
                          int topic_id) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw ConfigError(fmt::format("pi must lie in [0, 1], got {}", pi));
    ExpandedQuery out{topic_id, pi, {}};
    auto add = [&](const std::string& term) {
        const auto q = query.find(term);
        const auto e = expansion.find(term);
        const double weight = (1.0 - pi) * (q == query.end() ? 0.0 : q->second) +
                              pi * (e == expansion.end() ? 0.0 : e->second);
        if (weight > 0.0) out.weights.emplace(term, weight);
    };
    for (const auto& kv : query) add(kv.first);
    for (const auto& kv : expansion) {
        if (!query.contains(kv.first)) add(kv.first);
    }
    return out;
}

}  // namespace qtm::feedback
