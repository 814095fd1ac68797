#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace qtm::numeric {

template <typename Scalar>
struct MixtureFit {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> topic;  // theta_T
    int iterations = 0;
    bool converged = false;
    std::vector<Scalar> log_likelihood;  // per iteration, when traced
};

/// log-likelihood of pooled counts under (1 - lambda) topic + lambda background.
template <typename D1, typename D2, typename D3>
typename D1::Scalar mixture_log_likelihood(const Eigen::ArrayBase<D1>& counts, const Eigen::ArrayBase<D2>& topic,
                                           const Eigen::ArrayBase<D3>& background, typename D1::Scalar lambda) {
    using Scalar = typename D1::Scalar;
    const auto mix = ((Scalar(1) - lambda) * topic + lambda * background).eval();
    Scalar ll(0);
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
        if (counts(i) > Scalar(0)) ll += counts(i) * std::log(mix(i));
    }
    return ll;
}

/// EM for the topic component of a two-component mixture with fixed background weight:
///   E: r_t = (1-l) theta_t / ((1-l) theta_t + l bg_t)
///   M: theta_t proportional to counts_t * r_t
/// Starts uniform; stops when max |d theta| < tolerance or after max_iterations.
template <typename D1, typename D2>
MixtureFit<typename D1::Scalar> fit_topic_mixture(const Eigen::ArrayBase<D1>& counts,
                                                  const Eigen::ArrayBase<D2>& background, typename D1::Scalar lambda,
                                                  int max_iterations, typename D1::Scalar tolerance,
                                                  bool trace = false) {
    using Scalar = typename D1::Scalar;
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    MixtureFit<Scalar> fit;
    const auto n = counts.size();
    fit.topic = Array::Constant(n, Scalar(1) / Scalar(n));
    if (trace) fit.log_likelihood.push_back(mixture_log_likelihood(counts, fit.topic, background, lambda));
    for (int it = 1; it <= max_iterations; ++it) {
        const Array topic_part = (Scalar(1) - lambda) * fit.topic;
        const Array denom = topic_part + lambda * background;
        Array next = (denom > Scalar(0)).select(counts * topic_part / denom, Scalar(0));
        next /= next.sum();
        const Scalar change = (next - fit.topic).abs().maxCoeff();
        fit.topic = std::move(next);
        fit.iterations = it;
        if (trace) fit.log_likelihood.push_back(mixture_log_likelihood(counts, fit.topic, background, lambda));
        if (change < tolerance) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

}  // namespace qtm::numeric
