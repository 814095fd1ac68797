#include "qtm/lm/background.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qtm/numeric/digamma.hpp"

namespace qtm::lm {

BackgroundModel estimate_background(const corpus::InvertedIndex& index) {
    const auto& stats = index.stats();
    if (index.lexicon().size() == 0 || stats.df_total == 0) {
        throw InputError("cannot estimate a background model from an empty vocabulary");
    }
    BackgroundModel bg;
    const auto vocab = index.lexicon().size();
    bg.proportions.resize(vocab);
    bg.collection_ml.resize(vocab);
    const auto df_total = static_cast<double>(stats.df_total);
    const auto tokens = static_cast<double>(stats.token_total);
    for (std::size_t t = 0; t < vocab; ++t) {
        bg.proportions[t] = static_cast<double>(stats.df[t]) / df_total;
        bg.collection_ml[t] = static_cast<double>(stats.ctf[t]) / tokens;
    }
    return bg;
}

BackgroundModel make_background(std::span<const double> df, double df_total, std::span<const double> ctf,
                                double token_total, double mass) {
    if (df.size() != ctf.size()) throw InputError("df and ctf vectors differ in length");
    if (!(df_total > 0.0) || !(token_total > 0.0)) throw InputError("background totals must be positive");
    BackgroundModel bg;
    bg.proportions.reserve(df.size());
    bg.collection_ml.reserve(ctf.size());
    for (auto v : df) bg.proportions.push_back(v / df_total);
    for (auto v : ctf) bg.collection_ml.push_back(v / token_total);
    bg.mass = mass;
    return bg;
}

namespace {

// Sufficient statistics of the pinned-mean Polya likelihood: a histogram of document
// lengths and, per term, a histogram of within-document counts.
struct MassStatistics {
    std::map<std::uint32_t, std::uint64_t> lengths;
    struct TermHistogram {
        double proportion;
        std::map<std::uint32_t, std::uint64_t> counts;
    };
    std::vector<TermHistogram> terms;
    std::uint64_t documents = 0;
    double mean_distinct = 0.0;
};

MassStatistics collect(const corpus::InvertedIndex& index, const BackgroundModel& bg) {
    MassStatistics s;
    double distinct = 0.0;
    for (const auto& doc : index.documents()) {
        if (doc.empty()) continue;
        ++s.lengths[doc.token_count];
        ++s.documents;
        distinct += doc.distinct_count;
    }
    s.mean_distinct = s.documents ? distinct / static_cast<double>(s.documents) : 0.0;
    for (TermId t = 0; t < index.lexicon().size(); ++t) {
        const auto list = index.postings(t);
        if (list.empty()) continue;
        MassStatistics::TermHistogram h{bg.proportion(t), {}};
        for (const auto& p : list) ++h.counts[p.count];
        s.terms.push_back(std::move(h));
    }
    return s;
}

double log_likelihood(const MassStatistics& s, double m) {
    double ll = 0.0;
    for (const auto& [length, n] : s.lengths) ll -= static_cast<double>(n) * numeric::lgamma_increment(m, length);
    for (const auto& term : s.terms) {
        const double a = m * term.proportion;
        for (const auto& [count, n] : term.counts) ll += static_cast<double>(n) * numeric::lgamma_increment(a, count);
    }
    return ll;
}

}  // namespace

double background_log_likelihood(const corpus::InvertedIndex& index, const BackgroundModel& background, double m) {
    return log_likelihood(collect(index, background), m);
}

MassEstimate estimate_background_mass(const corpus::InvertedIndex& index, const BackgroundModel& background,
                                      const MassEstimationOptions& options) {
    const auto stats = collect(index, background);
    if (stats.documents < 2) {
        throw InputError("background mass estimation needs at least two non-empty documents");
    }

    MassEstimate est;
    est.value = options.initial > 0.0 ? options.initial : std::max(1.0, stats.mean_distinct);

    if (stats.terms.size() < 2) {
        // A single-term vocabulary gives a likelihood that is flat in m.
        warn("background mass is unidentifiable for a single-term vocabulary; keeping the initial value");
        est.iterations = 0;
        return est;
    }

    constexpr double kRunaway = 1e15;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double m = est.value;
        double numerator = 0.0;
        for (const auto& term : stats.terms) {
            const double a = m * term.proportion;
            double inner = 0.0;
            for (const auto& [count, n] : term.counts) inner += static_cast<double>(n) * numeric::digamma_increment(a, count);
            numerator += term.proportion * inner;
        }
        double denominator = 0.0;
        for (const auto& [length, n] : stats.lengths) {
            denominator += static_cast<double>(n) * numeric::digamma_increment(m, length);
        }
        const double next = m * numerator / denominator;
        est.iterations = it;
        if (!std::isfinite(next) || next <= 0.0 || next > kRunaway) {
            break;
        }
        est.value = next;
        if (std::abs(next - m) / m < options.tolerance) {
            est.converged = true;
            return est;
        }
    }
    std::ostringstream msg;
    msg << "background mass did not converge after " << est.iterations << " iterations (last m_c = " << est.value
        << ")";
    warn(msg.str());
    return est;
}

}  // namespace qtm::lm
