#include "onel1/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace onel1 {

namespace {

// Fixed seed for the one-shot AA' = I spot check at solver entry.
constexpr std::uint64_t kSpotCheckSeed = 0x6f6e652d6c31ull;

// Penalty cap keeping mu * residual products finite even if the schedule
// runs for the full iteration budget without converging.
constexpr double kMuCap = 1e300;

void check_options(const SolverOptions& opts) {
  if (opts.tau <= 0 || opts.tau1 <= 0 || opts.tau2 <= 0) {
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
  }
  if (opts.epsilon < 0) {
    throw std::invalid_argument("SolverOptions: epsilon must be nonnegative");
  }
  if (opts.max_outer < 1 || opts.max_inner < 1) {
    throw std::invalid_argument("SolverOptions: iteration caps must be >= 1");
  }
  if (opts.amp_theta <= 0) {
    throw std::invalid_argument("SolverOptions: amp_theta must be positive");
  }
  const ContinuationSchedule& s = opts.schedule;
  if (s.alpha <= 0 || s.alpha >= 1) {
    throw std::invalid_argument("ContinuationSchedule: alpha must be in (0,1)");
  }
  if (s.r > 0 && s.r <= 1) {
    throw std::invalid_argument("ContinuationSchedule: r must exceed 1");
  }
}

void check_problem(const SamplingOperator& A, const Eigen::VectorXd& b) {
  if (b.size() != A.rows()) {
    throw std::invalid_argument("solver: b has length " +
                                std::to_string(b.size()) + ", expected " +
                                std::to_string(A.rows()));
  }
  if (b.norm() == 0.0) {
    throw std::invalid_argument("solver: b = 0 (no signal to recover)");
  }
  if (!has_orthonormal_rows(A, kSpotCheckSeed)) {
    throw std::invalid_argument(
        "solver: operator rows are not orthonormal (AA' = I spot check failed)");
  }
}

// ceil(alpha*N)-th smallest entry of |coeffs|.
double quantile_of_abs(const Eigen::VectorXd& coeffs, double alpha) {
  const int N = static_cast<int>(coeffs.size());
  std::vector<double> mags(N);
  for (int i = 0; i < N; ++i) mags[i] = std::abs(coeffs[i]);
  int rank = static_cast<int>(std::ceil(alpha * N));
  rank = std::clamp(rank, 1, N);
  std::nth_element(mags.begin(), mags.begin() + (rank - 1), mags.end());
  return mags[rank - 1];
}

double mu0_from_correlations(const Eigen::VectorXd& correlations,
                             double alpha) {
  const double q = quantile_of_abs(correlations, alpha);
  if (q <= 0.0) {
    throw std::invalid_argument(
        "mu0_from_quantile: quantile of |A'b| is zero; supply mu0 explicitly");
  }
  return 1.0 / q;
}

// Stopping rule: noiseless mode needs the relative residual strictly below
// tau; noisy mode accepts the first iterate within the feasibility radius.
bool stop_now(double residual, double bnorm, double tau,
              const SolverOptions& opts) {
  if (opts.epsilon > 0) return residual <= opts.epsilon / bnorm;
  return residual < tau;
}

}  // namespace

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& w, double lambda) {
  if (lambda < 0) {
    throw std::invalid_argument("soft_threshold: threshold must be >= 0");
  }
  return w.unaryExpr([lambda](double v) {
    const double mag = std::abs(v) - lambda;
    if (mag <= 0) return 0.0;
    return v > 0 ? mag : -mag;
  });
}

double mu0_from_quantile(const SamplingOperator& A, const Eigen::VectorXd& b,
                         double alpha) {
  if (alpha <= 0 || alpha >= 1) {
    throw std::invalid_argument("mu0_from_quantile: alpha must be in (0,1)");
  }
  if (b.size() != A.rows()) {
    throw std::invalid_argument("mu0_from_quantile: b does not match operator");
  }
  if (b.norm() == 0.0) {
    throw std::invalid_argument("mu0_from_quantile: b = 0 has no quantile scale");
  }
  return mu0_from_correlations(A.adjoint(b), alpha);
}

double augmented_lagrangian_value(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& y, double mu,
                                  const OrthonormalCompletion& Phi) {
  const Eigen::Index N = Phi.A.cols();
  if (x.size() != N || p.size() != N || y.size() != N) {
    throw std::invalid_argument(
        "augmented_lagrangian_value: x, p, y must all have length N");
  }
  if (mu <= 0) {
    throw std::invalid_argument("augmented_lagrangian_value: mu must be > 0");
  }
  const Eigen::VectorXd gap = p - Phi.phi() * x;
  return x.lpNorm<1>() + gap.dot(y) + 0.5 * mu * gap.squaredNorm();
}

SolverResult solve_eone_l1(const SamplingOperator& A, const Eigen::VectorXd& b,
                           const SolverOptions& opts, SolverTrace* trace) {
  check_options(opts);
  const std::uint64_t calls_at_entry = A.operator_calls();
  check_problem(A, b);

  const int n = A.rows();
  const int N = A.cols();
  const double bnorm = b.norm();
  double mu = opts.schedule.mu0 > 0
                  ? opts.schedule.mu0
                  : mu0_from_quantile(A, b, opts.schedule.alpha);
  const double r = opts.schedule.r > 0
                       ? opts.schedule.r
                       : 1.0 + static_cast<double>(n) / N;

  SolverResult result;
  result.x_hat = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd y_A = Eigen::VectorXd::Zero(n);

  for (int t = 0; t < opts.max_outer; ++t) {
    const Eigen::VectorXd b_shift = b + y_A / mu;
    const Eigen::VectorXd y_entry = y_A;

    if (trace) trace->inner_x.push_back({result.x_hat});
    Eigen::VectorXd x = result.x_hat;
    for (int j = 0; j < opts.max_inner; ++j) {
      const Eigen::VectorXd Ax = A.apply(x);
      Eigen::VectorXd x_next =
          soft_threshold(x + A.adjoint(b_shift - Ax), 1.0 / mu);
      const double change = (x_next - x).norm();
      const double base = x.norm();
      const bool inner_done =
          base > 0 ? change / base < opts.tau2 : change < opts.tau2;
      x = std::move(x_next);
      if (trace) trace->inner_x.back().push_back(x);
      if (inner_done) break;
    }

    const Eigen::VectorXd Ax = A.apply(x);
    const double residual = (Ax - b).norm() / bnorm;
    y_A += mu * (b - Ax);

    if (trace) {
      IterateState state;
      state.x_prev = result.x_hat;
      state.x_t = x;
      state.y_A = y_entry;
      state.mu_t = mu;
      trace->outer.push_back(std::move(state));
    }

    result.x_hat = std::move(x);
    result.residual_history.push_back(residual);
    result.outer_iters = t + 1;
    if (stop_now(residual, bnorm, opts.tau1, opts)) {
      result.status = SolverStatus::Converged;
      break;
    }
    mu = std::min(mu * r, kMuCap);
  }

  result.operator_calls = A.operator_calls() - calls_at_entry;
  return result;
}

SolverResult solve_rone_l1(const SamplingOperator& A, const Eigen::VectorXd& b,
                           const SolverOptions& opts, SolverTrace* trace) {
  check_options(opts);
  const std::uint64_t calls_at_entry = A.operator_calls();
  check_problem(A, b);

  const int n = A.rows();
  const int N = A.cols();
  const double bnorm = b.norm();
  double mu = opts.schedule.mu0 > 0
                  ? opts.schedule.mu0
                  : mu0_from_quantile(A, b, opts.schedule.alpha);
  const double r =
      opts.schedule.r > 0
          ? opts.schedule.r
          : std::min(1.0 + 0.04 * static_cast<double>(n) / N, 1.02);
  const double kappa = 1.0 / r;

  SolverResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);       // x_t
  Eigen::VectorXd x_prev = Eigen::VectorXd::Zero(N);  // x_{t-1}
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);       // A x_t
  Eigen::VectorXd w_prev = Eigen::VectorXd::Zero(n);  // A x_{t-1}
  Eigen::VectorXd z_prev = Eigen::VectorXd::Zero(n);  // z_{t-1}

  for (int t = 0; t < opts.max_outer; ++t) {
    // z_t = b - A[(1+k)x_t - k x_{t-1}] + k z_{t-1}, computed from the
    // tracked products w = A x: the bracket expands to (1+k)w - k w_prev.
    // At t = 0 all terms vanish and z_0 = b exactly.
    Eigen::VectorXd z =
        t == 0 ? b
               : Eigen::VectorXd(b - (1.0 + kappa) * w + kappa * w_prev +
                                 kappa * z_prev);
    Eigen::VectorXd x_next = soft_threshold(x + A.adjoint(z), 1.0 / mu);
    Eigen::VectorXd w_next = A.apply(x_next);
    const double residual = (w_next - b).norm() / bnorm;

    if (trace) {
      IterateState state;
      state.x_t = x_next;
      state.x_prev = x;
      state.z_t = z;
      state.z_prev = z_prev;
      state.mu_t = mu;
      trace->outer.push_back(std::move(state));
    }

    x_prev = std::move(x);
    x = std::move(x_next);
    w_prev = std::move(w);
    w = std::move(w_next);
    z_prev = std::move(z);

    result.residual_history.push_back(residual);
    result.outer_iters = t + 1;
    if (stop_now(residual, bnorm, opts.tau, opts)) {
      result.status = SolverStatus::Converged;
      break;
    }
    mu = std::min(mu * r, kMuCap);
  }

  result.x_hat = std::move(x);
  result.operator_calls = A.operator_calls() - calls_at_entry;
  return result;
}

SolverResult solve_rone_l1_expanded(const Eigen::MatrixXd& A_dense,
                                    const Eigen::VectorXd& b,
                                    const SolverOptions& opts,
                                    SolverTrace* trace) {
  check_options(opts);
  const int n = static_cast<int>(A_dense.rows());
  const int N = static_cast<int>(A_dense.cols());
  if (b.size() != n) {
    throw std::invalid_argument("solve_rone_l1_expanded: b does not match A");
  }
  if (b.norm() == 0.0) {
    throw std::invalid_argument("solver: b = 0 (no signal to recover)");
  }
  const Eigen::MatrixXd Phi = orthonormal_completion(A_dense).phi();

  const double bnorm = b.norm();
  std::uint64_t phi_products = 0;
  double mu = opts.schedule.mu0 > 0
                  ? opts.schedule.mu0
                  : mu0_from_correlations(A_dense.transpose() * b,
                                          opts.schedule.alpha);
  const double r =
      opts.schedule.r > 0
          ? opts.schedule.r
          : std::min(1.0 + 0.04 * static_cast<double>(n) / N, 1.02);

  SolverResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(N);
  p.head(n) = b;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(N);

  for (int t = 0; t < opts.max_outer; ++t) {
    Eigen::VectorXd x_next =
        soft_threshold(Phi.transpose() * (p + y / mu), 1.0 / mu);
    const Eigen::VectorXd phi_x = Phi * x_next;
    phi_products += 2;
    Eigen::VectorXd p_next(N);
    p_next.head(n) = b;
    p_next.tail(N - n) = phi_x.tail(N - n) - y.tail(N - n) / mu;
    y += mu * (p_next - phi_x);
    const double residual = (phi_x.head(n) - b).norm() / bnorm;

    if (trace) {
      IterateState state;
      state.x_t = x_next;
      state.x_prev = x;
      state.y_A = y.head(n);
      state.p_tail = p_next.tail(N - n);
      state.mu_t = mu;
      trace->outer.push_back(std::move(state));
    }

    x = std::move(x_next);
    p = std::move(p_next);

    result.residual_history.push_back(residual);
    result.outer_iters = t + 1;
    if (stop_now(residual, bnorm, opts.tau, opts)) {
      result.status = SolverStatus::Converged;
      break;
    }
    mu = std::min(mu * r, kMuCap);
  }

  result.x_hat = std::move(x);
  result.operator_calls = phi_products;
  return result;
}

SolverResult solve_ist(const SamplingOperator& A, const Eigen::VectorXd& b,
                       const IstMode& mode, const SolverOptions& opts) {
  check_options(opts);
  if (mode.kind == IstMode::Kind::FixedLambda && mode.lambda < 0) {
    throw std::invalid_argument("solve_ist: fixed lambda must be >= 0");
  }
  const std::uint64_t calls_at_entry = A.operator_calls();
  check_problem(A, b);

  const int n = A.rows();
  const int N = A.cols();
  const double bnorm = b.norm();
  const bool continuation = mode.kind == IstMode::Kind::Continuation;
  double mu = 0.0;
  double r = 0.0;
  if (continuation) {
    mu = opts.schedule.mu0 > 0
             ? opts.schedule.mu0
             : mu0_from_quantile(A, b, opts.schedule.alpha);
    r = opts.schedule.r > 0
            ? opts.schedule.r
            : std::min(1.0 + 0.04 * static_cast<double>(n) / N, 1.02);
  }

  SolverResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd z = b;  // z_0 = b - A*0

  for (int t = 0; t < opts.max_outer; ++t) {
    const double lambda = continuation ? 1.0 / mu : mode.lambda;
    Eigen::VectorXd x_next = soft_threshold(x + A.adjoint(z), lambda);
    const Eigen::VectorXd Ax = A.apply(x_next);
    const double residual = (Ax - b).norm() / bnorm;
    z = b - Ax;

    const double change = (x_next - x).norm();
    const double base = x.norm();
    x = std::move(x_next);

    result.residual_history.push_back(residual);
    result.outer_iters = t + 1;
    if (stop_now(residual, bnorm, opts.tau, opts)) {
      result.status = SolverStatus::Converged;
      break;
    }
    if (!continuation) {
      // A stalled fixed-threshold run has reached its regularized fixed
      // point without meeting the feasibility criterion; stop, but do not
      // report Converged.
      const bool stalled =
          base > 0 ? change / base < opts.tau2 : change < opts.tau2;
      if (stalled) break;
    }
    if (continuation) mu = std::min(mu * r, kMuCap);
  }

  result.x_hat = std::move(x);
  result.operator_calls = A.operator_calls() - calls_at_entry;
  return result;
}

SolverResult solve_amp(const SamplingOperator& A, const Eigen::VectorXd& b,
                       const SolverOptions& opts) {
  check_options(opts);
  if (b.size() != A.rows()) {
    throw std::invalid_argument("solver: b has length " +
                                std::to_string(b.size()) + ", expected " +
                                std::to_string(A.rows()));
  }
  if (b.norm() == 0.0) {
    // The recursion collapses immediately: z_0 = b = 0 makes the threshold 0
    // and x_1 = 0, already feasible.
    SolverResult result;
    result.x_hat = Eigen::VectorXd::Zero(A.cols());
    result.outer_iters = 1;
    result.residual_history = {0.0};
    result.status = SolverStatus::Converged;
    return result;
  }
  const std::uint64_t calls_at_entry = A.operator_calls();
  if (!has_orthonormal_rows(A, kSpotCheckSeed)) {
    throw std::invalid_argument(
        "solver: operator rows are not orthonormal (AA' = I spot check failed)");
  }

  const int n = A.rows();
  const double bnorm = b.norm();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  // The message-passing recursion is derived for matrices with unit-norm
  // columns; row-orthonormal A has column norms ~ sqrt(n/N). Running on the
  // rescaled system (s*A) x = s*b with s = sqrt(N/n) restores that
  // normalization. Termination still measures the unscaled residual.
  const double s =
      std::sqrt(static_cast<double>(A.cols()) / static_cast<double>(n));

  SolverResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
  Eigen::VectorXd z = s * b;  // z_0 = s*b - (s*A)*0 + 0

  for (int t = 0; t < opts.max_outer; ++t) {
    const double lambda = opts.amp_theta * z.norm() / sqrt_n;
    Eigen::VectorXd x_next = soft_threshold(x + s * A.adjoint(z), lambda);
    const Eigen::VectorXd res_vec = b - A.apply(x_next);
    const double residual = res_vec.norm() / bnorm;
    const double nnz = static_cast<double>(
        (x_next.array() != 0.0).count());
    const bool x_unchanged = (x_next.array() == x.array()).all();
    Eigen::VectorXd z_next =
        s * res_vec + (nnz / n) * z;  // Onsager correction
    const bool fixed_point = x_unchanged && (z_next.array() == z.array()).all();
    z = std::move(z_next);
    x = std::move(x_next);

    result.residual_history.push_back(residual);
    result.outer_iters = t + 1;
    if (stop_now(residual, bnorm, opts.tau, opts)) {
      result.status = SolverStatus::Converged;
      break;
    }
    // An exact fixed point of the deterministic recursion cannot move again
    // (e.g. the threshold dominates every correlation and x stays at 0);
    // further iterations would only repeat it.
    if (fixed_point) break;
  }

  result.x_hat = std::move(x);
  result.operator_calls = A.operator_calls() - calls_at_entry;
  return result;
}

double relative_rmse(const Eigen::VectorXd& x_hat,
                     const Eigen::VectorXd& x_true) {
  if (x_hat.size() != x_true.size()) {
    throw std::invalid_argument("relative_rmse: length mismatch");
  }
  const double ref = x_true.norm();
  if (ref == 0.0) {
    throw std::invalid_argument("relative_rmse: reference signal is zero");
  }
  return (x_hat - x_true).norm() / ref;
}

}  // namespace onel1
