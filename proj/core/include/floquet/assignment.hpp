#pragma once

#include <vector>

#include <Eigen/Dense>

namespace floquet {

/// Optimal assignment maximizing Σᵢ score(i, π(i)) over permutations π
/// (Hungarian algorithm, O(n³)). Returns π as a row → column map.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& score);

/// Greedy assignment: repeatedly takes the largest remaining entry.
std::vector<int> greedy_assignment(const Eigen::MatrixXd& score);

}  // namespace floquet
