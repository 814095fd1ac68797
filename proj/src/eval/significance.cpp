#include "qtm/eval/significance.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "qtm/common.hpp"

namespace qtm::eval {

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("paired t-test needs samples of equal length");
    const auto n = a.size();
    if (n < 2) throw InputError("paired t-test needs at least two pairs");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= double(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    TTestResult r;
    r.df = n - 1;
    const double sd = std::sqrt(ss / double(r.df));
    if (sd == 0.0) {
        if (mean == 0.0) return r;
        r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
        r.p = std::numeric_limits<double>::min();
        r.degenerate = true;
        return r;
    }
    r.t = mean / (sd / std::sqrt(double(n)));
    const boost::math::students_t dist(double(r.df));
    r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    return r;
}

}  // namespace qtm::eval
