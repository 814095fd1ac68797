#pragma once

#include <span>
#include <vector>

#include "qtm/common.hpp"
#include "qtm/corpus/inverted_index.hpp"

namespace qtm::lm {

/// Collection-level term statistics shared by every document model.
///
/// `proportions` is the mean of the background Polya (df_t / sum df), `collection_ml` the
/// multinomial collection model (ctf_t / tokens) used for Dirichlet smoothing, and `mass`
/// the Polya scale m_c. Indexed by TermId.
struct BackgroundModel {
    std::vector<double> proportions;
    std::vector<double> collection_ml;
    double mass = 0.0;

    double proportion(TermId t) const { return t < proportions.size() ? proportions[t] : 0.0; }
    double ml(TermId t) const { return t < collection_ml.size() ? collection_ml[t] : 0.0; }
    std::size_t vocabulary_size() const { return proportions.size(); }
};

/// Proportions and collection ML from an index; `mass` is left at 0.
/// Throws InputError when the index has no vocabulary.
BackgroundModel estimate_background(const corpus::InvertedIndex& index);

/// Background over an explicit vocabulary. The totals may exceed the sums of `df`/`ctf`
/// when the listed terms are only part of a larger collection.
BackgroundModel make_background(std::span<const double> df, double df_total, std::span<const double> ctf,
                                double token_total, double mass);

struct MassEstimationOptions {
    double tolerance = 1e-6;  // on |dm| / m
    int max_iterations = 200;
    double initial = 0.0;     // <= 0: start from the mean number of distinct terms per document
};

struct MassEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Maximum-likelihood scale m_c of a multivariate Polya whose mean is pinned to the
/// df-proportions, fitted to every non-empty document of the index by the fixed-point
/// iteration m <- m * sum_{d,t} p_t [psi(c + m p_t) - psi(m p_t)] / sum_d [psi(m + |d|) - psi(m)].
///
/// If the cap is reached or the iterate runs away (no burstiness signal), the last iterate
/// is returned with `converged = false` and a warning is emitted.
/// Throws InputError for fewer than two non-empty documents.
MassEstimate estimate_background_mass(const corpus::InvertedIndex& index, const BackgroundModel& background,
                                      const MassEstimationOptions& options = {});

/// Corpus log-likelihood (up to the multinomial coefficients) of the pinned-mean Polya at scale m.
double background_log_likelihood(const corpus::InvertedIndex& index, const BackgroundModel& background, double m);

}  // namespace qtm::lm
