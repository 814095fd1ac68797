#pragma once

#include <Eigen/Core>

namespace qtm::numeric {

/// exp(x - max x) / sum exp(x - max x). Invariant to adding a constant to every entry;
/// the normalized weights are exactly the ratio p_i / sum p_j whenever exp(x) is representable.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(const Eigen::ArrayBase<Derived>& log_values) {
    using Scalar = typename Derived::Scalar;
    if (log_values.size() == 0) return {};
    const Scalar top = log_values.maxCoeff();
    Eigen::Array<Scalar, Eigen::Dynamic, 1> w = (log_values - top).exp();
    return w / w.sum();
}

}  // namespace qtm::numeric
