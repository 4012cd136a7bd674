#include "onel1/solvers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace onel1 {

// Exhaustive search over supports: some optimal vertex of the l1 problem has
// at most n nonzeros, so enumerating all supports of size <= n and solving
// each restricted least-squares system finds a global minimizer.
Eigen::VectorXd bp_bruteforce_oracle(const Eigen::MatrixXd& A_dense,
                                     const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A_dense.rows());
  const int N = static_cast<int>(A_dense.cols());
  if (b.size() != n) {
    throw std::invalid_argument("bp_bruteforce_oracle: b does not match A");
  }
  if (N > 14 || n > 7) {
    throw std::invalid_argument(
        "bp_bruteforce_oracle: enumeration is limited to N <= 14, n <= 7");
  }

  const double feas_tol = 1e-9 * std::max(1.0, b.norm());
  bool found = false;
  double best_l1 = 0.0;
  Eigen::VectorXd best = Eigen::VectorXd::Zero(N);

  std::vector<int> support;
  support.reserve(n);
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    const int size = std::popcount(mask);
    if (size > n) continue;

    support.clear();
    for (int i = 0; i < N; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }

    Eigen::VectorXd candidate = Eigen::VectorXd::Zero(N);
    double residual;
    if (size == 0) {
      residual = b.norm();
    } else {
      Eigen::MatrixXd sub(n, size);
      for (int j = 0; j < size; ++j) sub.col(j) = A_dense.col(support[j]);
      Eigen::VectorXd coeffs = sub.colPivHouseholderQr().solve(b);
      residual = (sub * coeffs - b).norm();
      for (int j = 0; j < size; ++j) candidate[support[j]] = coeffs[j];
    }
    if (residual > feas_tol) continue;

    const double l1 = candidate.lpNorm<1>();
    if (!found || l1 < best_l1) {
      found = true;
      best_l1 = l1;
      best = std::move(candidate);
    }
  }

  if (!found) {
    throw std::invalid_argument(
        "bp_bruteforce_oracle: no feasible support found (Ax = b unsolvable)");
  }
  return best;
}

}  // namespace onel1
