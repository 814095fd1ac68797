#include "qtm/eval/cross_validation.hpp"

#include <fmt/core.h>

#include "qtm/common.hpp"

namespace qtm::eval {

namespace {

double fold_mean(const Eigen::MatrixXd& m, Eigen::Index row, const std::vector<Eigen::Index>& columns) {
    double sum = 0.0;
    for (auto c : columns) sum += m(row, c);
    return sum / double(columns.size());
}

// Grid point with the best mean over `train`; strict comparison keeps the earliest on ties.
FoldChoice choose(const Eigen::MatrixXd& ap, const Eigen::MatrixXd& ndcg, const std::vector<Eigen::Index>& train,
                  const std::vector<Eigen::Index>& test) {
    FoldChoice best;
    best.training_map = fold_mean(ap, 0, train);
    for (Eigen::Index g = 1; g < ap.rows(); ++g) {
        const double score = fold_mean(ap, g, train);
        if (score > best.training_map) {
            best.training_map = score;
            best.grid_index = static_cast<std::size_t>(g);
        }
    }
    const auto row = static_cast<Eigen::Index>(best.grid_index);
    best.map = fold_mean(ap, row, test);
    best.ndcg10 = fold_mean(ndcg, row, test);
    return best;
}

}  // namespace

CrossValidation cross_validate(std::span<const int> topics, const Eigen::MatrixXd& ap, const Eigen::MatrixXd& ndcg) {
    const auto n = static_cast<Eigen::Index>(topics.size());
    if (ap.cols() != n || ndcg.cols() != n || ap.rows() != ndcg.rows() || ap.rows() == 0) {
        throw InputError(fmt::format("cross-validation matrices must be grid x {} topics", n));
    }
    std::vector<Eigen::Index> even, odd;
    for (Eigen::Index i = 0; i < n; ++i) (topics[static_cast<std::size_t>(i)] % 2 == 0 ? even : odd).push_back(i);
    if (even.empty() || odd.empty()) {
        throw InputError("cross-validation needs topics with both even and odd ids");
    }

    CrossValidation cv;
    cv.even = choose(ap, ndcg, odd, even);
    cv.odd = choose(ap, ndcg, even, odd);
    cv.map = (cv.even.map + cv.odd.map) / 2.0;
    cv.ndcg10 = (cv.even.ndcg10 + cv.odd.ndcg10) / 2.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int topic = topics[static_cast<std::size_t>(i)];
        const auto row = static_cast<Eigen::Index>(topic % 2 == 0 ? cv.even.grid_index : cv.odd.grid_index);
        cv.held_out.push_back({topic, ap(row, i), ndcg(row, i)});
    }
    return cv;
}

}  // namespace qtm::eval
