#pragma once

#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/digamma.hpp>

namespace qtm::numeric {

/// psi(x + n) - psi(x) for x > 0 and integer n >= 0. Uses the finite sum
/// sum_{k<n} 1/(x+k) for small n, where it is both faster and more accurate.
template <typename Scalar>
Scalar digamma_increment(Scalar x, std::uint64_t n) {
    if (n == 0) return Scalar(0);
    if (n <= 64) {
        Scalar sum(0);
        for (std::uint64_t k = 0; k < n; ++k) sum += Scalar(1) / (x + Scalar(k));
        return sum;
    }
    return boost::math::digamma(x + Scalar(n)) - boost::math::digamma(x);
}

/// log Gamma(x + n) - log Gamma(x) for x > 0 and integer n >= 0.
template <typename Scalar>
Scalar lgamma_increment(Scalar x, std::uint64_t n) {
    if (n == 0) return Scalar(0);
    if (n <= 64) {
        Scalar sum(0);
        for (std::uint64_t k = 0; k < n; ++k) sum += std::log(x + Scalar(k));
        return sum;
    }
    return std::lgamma(x + Scalar(n)) - std::lgamma(x);
}

}  // namespace qtm::numeric
