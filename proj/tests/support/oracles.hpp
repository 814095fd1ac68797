#pragma once

// Brute-force references used by the tests. They evaluate likelihoods straight from their
// definitions with std::lgamma/std::log and search exhaustively, so they share no code with
// the estimators they check.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/trec.hpp"

namespace qtm::testing {

inline double mixture_loglik(const std::vector<double>& counts, const std::vector<double>& topic,
                             const std::vector<double>& background, double lambda) {
    double ll = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) ll += counts[i] * std::log((1 - lambda) * topic[i] + lambda * background[i]);
    }
    return ll;
}

/// argmax of the mixture likelihood over a grid on the simplex (2 or 3 terms).
inline std::vector<double> mixture_grid_argmax(const std::vector<double>& counts, const std::vector<double>& background,
                                               double lambda, double step) {
    const int n = static_cast<int>(std::lround(1.0 / step));
    std::vector<double> best;
    double best_ll = -std::numeric_limits<double>::infinity();
    auto consider = [&](std::vector<double> topic) {
        const double ll = mixture_loglik(counts, topic, background, lambda);
        if (ll > best_ll) {
            best_ll = ll;
            best = std::move(topic);
        }
    };
    if (counts.size() == 2) {
        for (int i = 0; i <= n; ++i) consider({i * step, 1 - i * step});
    } else {
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; i + j <= n; ++j) consider({i * step, j * step, std::max(0.0, 1 - (i + j) * step)});
        }
    }
    return best;
}

/// DCM log-likelihood of count vectors, up to the multinomial coefficients.
inline double dcm_loglik(const std::vector<std::vector<double>>& docs, const std::vector<double>& alpha) {
    double total = 0.0;
    for (auto a : alpha) total += a;
    double ll = 0.0;
    for (const auto& d : docs) {
        double length = 0.0;
        for (auto c : d) length += c;
        ll += std::lgamma(total) - std::lgamma(total + length);
        for (std::size_t t = 0; t < d.size(); ++t) ll += std::lgamma(d[t] + alpha[t]) - std::lgamma(alpha[t]);
    }
    return ll;
}

/// argmax over the square [lo, hi]^2 with the given step (two-term vocabulary).
inline std::pair<double, double> dcm_grid_argmax(const std::vector<std::vector<double>>& docs, double lo, double hi,
                                                 double step) {
    std::pair<double, double> best{lo, lo};
    double best_ll = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double a = lo + i * step, b = lo + j * step;
            const double ll = dcm_loglik(docs, {a, b});
            if (ll > best_ll) {
                best_ll = ll;
                best = {a, b};
            }
        }
    }
    return best;
}

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
inline double golden_section_argmax(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

/// Corpus log-likelihood of a Polya with mean `p` and scale `m`, from the definition.
inline double polya_corpus_loglik(const corpus::InvertedIndex& index, const std::vector<double>& p, double m) {
    double ll = 0.0;
    for (const auto& d : index.documents()) {
        if (d.empty()) continue;
        ll += std::lgamma(m) - std::lgamma(m + d.token_count);
        for (const auto& tc : d.terms) ll += std::lgamma(tc.count + m * p[tc.term]) - std::lgamma(m * p[tc.term]);
    }
    return ll;
}

/// Document from explicit counts (no tokenizer involved).
inline corpus::Document make_document(std::string id, const std::map<std::string, std::uint32_t>& counts) {
    corpus::Document d;
    d.doc_id = std::move(id);
    for (const auto& [t, c] : counts) d.add(t, c);
    return d;
}

/// Index over whitespace-separated pre-stemmed text: {"d1", "a a b"}.
inline corpus::InvertedIndex toy_index(const std::vector<std::pair<std::string, std::string>>& docs) {
    std::vector<corpus::Document> out;
    for (const auto& [id, text] : docs) {
        std::map<std::string, std::uint32_t> counts;
        std::size_t pos = 0;
        while (pos < text.size()) {
            const auto end = text.find(' ', pos);
            const auto word = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            if (!word.empty()) ++counts[word];
            if (end == std::string::npos) break;
            pos = end + 1;
        }
        out.push_back(make_document(id, counts));
    }
    return corpus::build_index(std::move(out));
}

}  // namespace qtm::testing
