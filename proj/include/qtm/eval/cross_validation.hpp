#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qtm/eval/metrics.hpp"

namespace qtm::eval {

struct FoldChoice {
    std::size_t grid_index = 0;  // selected on the other fold
    double training_map = 0.0;   // MAP of that point on the other fold
    double map = 0.0;            // held-out MAP on this fold
    double ndcg10 = 0.0;         // held-out NDCG@10 on this fold
};

struct CrossValidation {
    FoldChoice even;  // topics with even ids, parameters chosen on the odd ones
    FoldChoice odd;
    double map = 0.0;     // mean of the two held-out fold scores
    double ndcg10 = 0.0;
    std::vector<EvalRecord> held_out;  // per topic, under its fold's chosen point
};

/// Two-fold even/odd cross-validation over a grid. `ap` and `ndcg` are grid points x topics.
/// The objective is MAP; ties go to the earlier grid point.
/// Throws InputError when a parity class is empty or the shapes disagree.
CrossValidation cross_validate(std::span<const int> topics, const Eigen::MatrixXd& ap, const Eigen::MatrixXd& ndcg);

}  // namespace qtm::eval
