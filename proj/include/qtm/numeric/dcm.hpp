#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "qtm/numeric/digamma.hpp"

namespace qtm::numeric {

/// Observations for a Dirichlet-compound-multinomial fit: per term, its nonzero counts
/// across documents (zero counts contribute nothing), plus every document length.
struct DcmData {
    std::vector<std::vector<std::uint32_t>> term_counts;
    std::vector<std::uint32_t> lengths;
};

template <typename Scalar>
struct DcmFit {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> alpha;
    int iterations = 0;
    bool converged = false;
    std::vector<Scalar> log_likelihood;  // per iteration, when traced
};

/// DCM log-likelihood up to the multinomial coefficients.
template <typename Derived>
typename Derived::Scalar dcm_log_likelihood(const DcmData& data, const Eigen::ArrayBase<Derived>& alpha) {
    using Scalar = typename Derived::Scalar;
    const Scalar total = alpha.sum();
    Scalar ll(0);
    for (auto length : data.lengths) ll -= lgamma_increment(total, length);
    for (Eigen::Index t = 0; t < alpha.size(); ++t) {
        for (auto c : data.term_counts[static_cast<std::size_t>(t)]) ll += lgamma_increment(alpha(t), c);
    }
    return ll;
}

/// Minka's fixed point
///   alpha_t <- alpha_t * sum_d [psi(c_td + alpha_t) - psi(alpha_t)] / sum_d [psi(|d| + A) - psi(A)]
/// from `initial`; stops when max_t |d alpha_t| / alpha_t < tolerance or at the cap.
template <typename Derived>
DcmFit<typename Derived::Scalar> fit_dcm(const DcmData& data, const Eigen::ArrayBase<Derived>& initial,
                                         int max_iterations, typename Derived::Scalar tolerance, bool trace = false) {
    using Scalar = typename Derived::Scalar;
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    DcmFit<Scalar> fit;
    fit.alpha = initial;
    if (trace) fit.log_likelihood.push_back(dcm_log_likelihood(data, fit.alpha));
    Array next(fit.alpha.size());
    for (int it = 1; it <= max_iterations; ++it) {
        const Scalar total = fit.alpha.sum();
        Scalar denominator(0);
        for (auto length : data.lengths) denominator += digamma_increment(total, length);
        for (Eigen::Index t = 0; t < fit.alpha.size(); ++t) {
            Scalar numerator(0);
            for (auto c : data.term_counts[static_cast<std::size_t>(t)]) numerator += digamma_increment(fit.alpha(t), c);
            next(t) = fit.alpha(t) * numerator / denominator;
        }
        if (!next.isFinite().all() || !(next > Scalar(0)).all()) break;  // runaway: keep the last good iterate
        const Scalar change = ((next - fit.alpha).abs() / fit.alpha).maxCoeff();
        fit.alpha = next;
        fit.iterations = it;
        if (trace) fit.log_likelihood.push_back(dcm_log_likelihood(data, fit.alpha));
        if (change < tolerance) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

}  // namespace qtm::numeric
