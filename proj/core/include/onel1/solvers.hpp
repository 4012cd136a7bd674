#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "onel1/operators.hpp"

namespace onel1 {

// Geometric penalty schedule mu_t = r^t * mu0; kappa_t = 1/r is constant.
// Non-positive mu0/r mean "derive the recommended default at solve time":
// mu0 = 1 / (alpha-quantile of |A'b|), r = 1 + n/N for the exact solver and
// min(1 + 0.04*n/N, 1.02) for the relaxed one.
struct ContinuationSchedule {
  double mu0 = 0.0;
  double r = 0.0;
  double alpha = 0.99;
};

struct SolverOptions {
  ContinuationSchedule schedule;
  double tau = 1e-5;    // outer relative-residual tolerance (relaxed solver)
  double tau1 = 1e-5;   // outer tolerance (exact solver)
  double tau2 = 1e-6;   // inner relative-change tolerance (exact solver)
  double epsilon = 0.0; // > 0: stop at the first iterate with ||Ax-b|| <= eps
  int max_outer = 10000;
  int max_inner = 1000;
  double amp_theta = 2.5;  // dynamic threshold factor lambda_t = theta*||z||/sqrt(n)
};

enum class SolverStatus { Converged, MaxIterations };

struct SolverResult {
  Eigen::VectorXd x_hat;
  int outer_iters = 0;
  std::uint64_t operator_calls = 0;           // apply + adjoint, incl. setup
  std::vector<double> residual_history;       // ||A x_t - b|| / ||b|| per iter
  SolverStatus status = SolverStatus::MaxIterations;
};

// Snapshot of one outer iteration, recorded when a trace is requested.
// The phi-free solvers fill x/z and the observed-block multiplier y_A; the
// expanded reference implementation also fills the hidden block of p. In the
// expanded run the multiplier invariant holds: the hidden block of y stays 0.
struct IterateState {
  Eigen::VectorXd x_t;
  Eigen::VectorXd x_prev;
  Eigen::VectorXd z_t;
  Eigen::VectorXd z_prev;
  Eigen::VectorXd y_A;     // length n; for the exact solver: value at entry
  Eigen::VectorXd p_tail;  // length N-n, expanded implementation only
  double mu_t = 0.0;
};

struct SolverTrace {
  std::vector<IterateState> outer;
  // Exact solver only: inner iterates per outer iteration, starting with the
  // warm-start point x^0 = x_t.
  std::vector<std::vector<Eigen::VectorXd>> inner_x;
};

// Elementwise sgn(w_i) * max(|w_i| - lambda, 0); the proximal operator of
// lambda*||.||_1. lambda < 0 is an error.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& w, double lambda);

// mu0 = 1 / Q_alpha(|A'b|) where Q_alpha is the ceil(alpha*N)-th smallest
// entry (order statistic, no interpolation). Errors: b = 0, alpha outside
// (0,1), or a zero quantile (threshold would be infinite).
double mu0_from_quantile(const SamplingOperator& A, const Eigen::VectorXd& b,
                         double alpha);

// L(x, p, y, mu) = ||x||_1 + <p - Phi x, y> + (mu/2)||p - Phi x||^2 over the
// expanded orthonormal system. Small-scale diagnostics only.
double augmented_lagrangian_value(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& y, double mu,
                                  const OrthonormalCompletion& Phi);

// Exact solver: augmented-Lagrangian outer loop with an inner fixed-point
// loop, in the phi-free form. Inner: x^{j+1} = S_{1/mu}(x^j + A'(b~ - A x^j))
// with b~ = b + y_A/mu, until the relative change drops below tau2 (absolute
// change when ||x^j|| = 0). Outer: y_A += mu*(b - A x), mu *= r; stops when
// ||A x - b||/||b|| < tau1, or at the first iterate with ||A x - b|| <= epsilon
// when epsilon > 0.
SolverResult solve_eone_l1(const SamplingOperator& A, const Eigen::VectorXd& b,
                           const SolverOptions& opts,
                           SolverTrace* trace = nullptr);

// Relaxed solver: one thresholding step per outer iteration,
//   x_{t+1} = S_{1/mu_t}(x_t + A' z_t),
//   z_t = b - A[(1+kappa) x_t - kappa x_{t-1}] + kappa z_{t-1},  kappa = 1/r,
// starting from x_0 = 0, z_0 = b. Stops when ||A x_t - b||/||b|| < tau, or at
// the first feasible iterate (<= epsilon/||b||) when epsilon > 0.
SolverResult solve_rone_l1(const SamplingOperator& A, const Eigen::VectorXd& b,
                           const SolverOptions& opts,
                           SolverTrace* trace = nullptr);

// Reference implementation of the relaxed solver over the explicit expanded
// system Phi = [A; B]: keeps full p and y vectors and updates them literally.
// Exists to certify the phi-free implementation; restricted to N <= 64.
// operator_calls counts Phi and Phi' products.
SolverResult solve_rone_l1_expanded(const Eigen::MatrixXd& A_dense,
                                    const Eigen::VectorXd& b,
                                    const SolverOptions& opts,
                                    SolverTrace* trace = nullptr);

// Iterative soft thresholding: x_{t+1} = S_{lambda_t}(x_t + A' z_t) with the
// plain residual z_t = b - A x_t.
struct IstMode {
  enum class Kind { FixedLambda, Continuation };
  Kind kind = Kind::Continuation;
  double lambda = 0.0;  // FixedLambda only

  static IstMode fixed_lambda(double lambda) {
    return IstMode{Kind::FixedLambda, lambda};
  }
  static IstMode continuation() { return IstMode{Kind::Continuation, 0.0}; }
};

// Continuation mode uses lambda_t = 1/mu_t with the same schedule and
// termination as the relaxed solver. Fixed mode keeps lambda constant; it
// reports Converged only if the residual criterion is met, and stops with
// MaxIterations when the iterate change stalls below tau2 first (a fixed
// threshold generally converges to a regularized, not feasible, point).
SolverResult solve_ist(const SamplingOperator& A, const Eigen::VectorXd& b,
                       const IstMode& mode, const SolverOptions& opts);

// Approximate message passing baseline, run on the rescaled system
// (s*A) x = s*b with s = sqrt(N/n) so the matrix has ~unit-norm columns as
// the recursion assumes:
//   z_t = s*(b - A x_t) + (||x_t||_0 / n) z_{t-1},
//   x_{t+1} = S_{lambda_t}(x_t + s*A' z_t),  lambda_t = theta*||z_t||/sqrt(n).
// Intended for strictly sparse noise-free data. b = 0 returns x = 0 after one
// iteration (the recursion is exact there: the threshold and residual vanish).
SolverResult solve_amp(const SamplingOperator& A, const Eigen::VectorXd& b,
                       const SolverOptions& opts);

// Exhaustive basis-pursuit oracle: enumerates all supports of size <= n,
// solves each restricted least-squares system, keeps candidates feasible to
// 1e-9 * max(1, ||b||), and returns the one of minimum l1 norm. N <= 14 and
// n <= 7 only; errors when no candidate is feasible.
Eigen::VectorXd bp_bruteforce_oracle(const Eigen::MatrixXd& A_dense,
                                     const Eigen::VectorXd& b);

// ||x_hat - x_true|| / ||x_true||; x_true = 0 is an error.
double relative_rmse(const Eigen::VectorXd& x_hat,
                     const Eigen::VectorXd& x_true);

}  // namespace onel1
