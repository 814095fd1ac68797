#pragma once

#include <cstddef>
#include <span>

namespace qtm::eval {

struct TTestResult {
    double t = 0.0;
    double p = 1.0;  // two-sided
    std::size_t df = 0;
    bool degenerate = false;  // zero variance with a nonzero mean difference
};

/// Paired t-test on a - b. All-zero differences give p = 1; zero variance with a nonzero
/// mean gives an infinite t, the smallest normal double as p and `degenerate` set.
/// Throws InputError for unequal lengths or fewer than two pairs.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace qtm::eval
