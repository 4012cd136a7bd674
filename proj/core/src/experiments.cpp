#include "onel1/experiments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "onel1/rng.hpp"
#include "onel1/wavelet.hpp"

namespace onel1 {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ceil(ratio * total) with a tiny backoff so ratios that are exact in decimal
// (0.1 * 1000) cannot round up through floating-point drift.
int ceil_count(double ratio, int total) {
  const int raw = static_cast<int>(std::ceil(ratio * total - 1e-9));
  return std::clamp(raw, 1, total);
}

// Dynamic work-stealing loop over [0, count); task(i) must capture its own
// state. Exceptions propagate after all workers finish.
void parallel_run(int count, int threads,
                  const std::function<void(int)>& task) {
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t a,
                         std::uint64_t b, std::uint64_t c) {
  return derive_seed(master, {a, b, c});
}

}  // namespace

std::string to_string(Ensemble ensemble) {
  switch (ensemble) {
    case Ensemble::PartialDct:
      return "partial-dct";
    case Ensemble::GaussianOrthonormal:
      return "gaussian";
  }
  throw std::invalid_argument("unknown ensemble");
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::EoneL1:
      return "eone-l1";
    case SolverKind::RoneL1:
      return "rone-l1";
    case SolverKind::Ist:
      return "ist";
    case SolverKind::Amp:
      return "amp";
  }
  throw std::invalid_argument("unknown solver kind");
}

Ensemble ensemble_from_string(const std::string& name) {
  if (name == "partial-dct") return Ensemble::PartialDct;
  if (name == "gaussian") return Ensemble::GaussianOrthonormal;
  throw std::invalid_argument("unknown ensemble '" + name +
                              "' (expected partial-dct or gaussian)");
}

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "eone-l1") return SolverKind::EoneL1;
  if (name == "rone-l1") return SolverKind::RoneL1;
  if (name == "ist") return SolverKind::Ist;
  if (name == "amp") return SolverKind::Amp;
  throw std::invalid_argument(
      "unknown solver '" + name +
      "' (expected eone-l1, rone-l1, ist, or amp)");
}

Eigen::VectorXd generate_sparse_signal(int N, int k, std::uint64_t seed) {
  if (N < 1) {
    throw std::invalid_argument("generate_sparse_signal: N must be positive");
  }
  if (k < 0 || k > N) {
    throw std::invalid_argument("generate_sparse_signal: need 0 <= k <= N");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Rng rng(seed);
  const std::vector<int> support = rng.sample_without_replacement(N, k);
  for (int idx : support) x[idx] = rng.normal();
  return x;
}

std::unique_ptr<SamplingOperator> make_ensemble_operator(Ensemble ensemble,
                                                         int n, int N,
                                                         std::uint64_t seed) {
  switch (ensemble) {
    case Ensemble::PartialDct: {
      Rng rng(seed);
      return make_partial_dct(
          N, SamplingMask::sample_uniform_1d(N, n, rng));
    }
    case Ensemble::GaussianOrthonormal:
      return make_row_orthonormal_gaussian(n, N, seed);
  }
  throw std::invalid_argument("unknown ensemble");
}

SolverResult run_solver(SolverKind kind, const SamplingOperator& A,
                        const Eigen::VectorXd& b, const SolverOptions& opts) {
  switch (kind) {
    case SolverKind::EoneL1:
      return solve_eone_l1(A, b, opts);
    case SolverKind::RoneL1:
      return solve_rone_l1(A, b, opts);
    case SolverKind::Ist:
      return solve_ist(A, b, IstMode::continuation(), opts);
    case SolverKind::Amp:
      return solve_amp(A, b, opts);
  }
  throw std::invalid_argument("unknown solver kind");
}

TrialRecord run_recovery_trial(SolverKind solver, Ensemble ensemble, int N,
                               double delta, double rho, std::uint64_t seed,
                               const SolverOptions& opts,
                               double success_threshold) {
  TrialRecord rec;
  rec.solver = to_string(solver);
  rec.ensemble = to_string(ensemble);
  rec.delta = delta;
  rec.rho = rho;
  rec.N = N;
  rec.seed = seed;
  try {
    if (N < 1) {
      throw std::invalid_argument("run_recovery_trial: N must be positive");
    }
    if (delta <= 0 || delta > 1 || rho <= 0 || rho > 1) {
      throw std::invalid_argument(
          "run_recovery_trial: need delta, rho in (0, 1]");
    }
    const int n = ceil_count(delta, N);
    const int k = ceil_count(rho, n);
    rec.n = n;
    rec.k = k;

    const auto op =
        make_ensemble_operator(ensemble, n, N, derive_seed(seed, {0}));
    const Eigen::VectorXd x_true =
        generate_sparse_signal(N, k, derive_seed(seed, {1}));
    const Eigen::VectorXd b = op->apply(x_true);

    const auto start = Clock::now();
    const SolverResult res = run_solver(solver, *op, b, opts);
    rec.wall_time_s = seconds_since(start);

    rec.relative_rmse = relative_rmse(res.x_hat, x_true);
    rec.success = rec.relative_rmse < success_threshold;
    rec.operator_calls = res.operator_calls;
    rec.outer_iters = res.outer_iters;
    rec.status = res.status == SolverStatus::Converged ? "converged"
                                                       : "max-iterations";
  } catch (const std::exception& err) {
    rec.status = "error";
    rec.error = err.what();
    rec.success = false;
    rec.relative_rmse = -1.0;
  }
  return rec;
}

std::vector<double> make_rho_grid(double rho_center, int count,
                                  double halfwidth) {
  if (count < 2) {
    throw std::invalid_argument("make_rho_grid: need at least two points");
  }
  if (halfwidth <= 0) {
    throw std::invalid_argument("make_rho_grid: halfwidth must be positive");
  }
  const double lo = std::max(rho_center - halfwidth, 0.001);
  const double hi = std::min(rho_center + halfwidth, 0.999);
  if (lo >= hi) {
    throw std::invalid_argument("make_rho_grid: empty grid after clipping");
  }
  std::vector<double> rhos(count);
  for (int i = 0; i < count; ++i) {
    rhos[i] = lo + (hi - lo) * i / (count - 1);
  }
  return rhos;
}

LogisticFit fit_logistic_midpoint(const std::vector<double>& rhos,
                                  const std::vector<int>& success_counts,
                                  int trials) {
  if (rhos.size() != success_counts.size() || rhos.empty()) {
    throw std::invalid_argument(
        "fit_logistic_midpoint: rhos and counts must match and be nonempty");
  }
  if (trials < 1) {
    throw std::invalid_argument("fit_logistic_midpoint: trials must be >= 1");
  }
  for (int c : success_counts) {
    if (c < 0 || c > trials) {
      throw std::invalid_argument(
          "fit_logistic_midpoint: counts must lie in [0, trials]");
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(rhos.begin(), rhos.end());
  const double grid_lo = *lo_it;
  const double grid_hi = *hi_it;
  const long total = std::accumulate(success_counts.begin(),
                                     success_counts.end(), 0L);

  LogisticFit fit;
  if (total == static_cast<long>(success_counts.size()) * trials) {
    // Success everywhere: the transition lies above the tested range.
    fit.degenerate = true;
    fit.rho_hat = grid_hi;
    return fit;
  }
  if (total == 0) {
    fit.degenerate = true;
    fit.rho_hat = grid_lo;
    return fit;
  }

  bool mixed = false;
  for (int c : success_counts) {
    if (c > 0 && c < trials) mixed = true;
  }
  if (!mixed) {
    // Only all-success and all-failure cells: if they are separated in rho,
    // the MLE is unbounded; report the midpoint of the separating gap.
    double top_success = -1.0, bottom_failure = 2.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      if (success_counts[i] == trials) {
        top_success = std::max(top_success, rhos[i]);
      } else {
        bottom_failure = std::min(bottom_failure, rhos[i]);
      }
    }
    if (top_success < bottom_failure) {
      fit.degenerate = true;
      fit.rho_hat = 0.5 * (top_success + bottom_failure);
      return fit;
    }
  }

  // Binomial-logit IRLS (Newton) with ridge damping on the normal equations.
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = 1e-8 * Eigen::Matrix2d::Identity();
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const Eigen::Vector2d v(1.0, rhos[i]);
      const double eta = beta.dot(v);
      double p = 1.0 / (1.0 + std::exp(-eta));
      p = std::clamp(p, 1e-12, 1.0 - 1e-12);
      grad += (success_counts[i] - trials * p) * v;
      hess += trials * p * (1.0 - p) * v * v.transpose();
    }
    const Eigen::Vector2d step = hess.ldlt().solve(grad);
    beta += step;
    if (!beta.allFinite() || step.norm() < 1e-12) break;
  }

  fit.intercept = beta[0];
  fit.slope = beta[1];
  const double rho_hat = -beta[0] / beta[1];
  if (!std::isfinite(rho_hat) || beta[1] >= 0) {
    fit.degenerate = true;
    fit.rho_hat = std::isfinite(rho_hat)
                      ? std::clamp(rho_hat, grid_lo, grid_hi)
                      : 0.5 * (grid_lo + grid_hi);
    return fit;
  }
  if (rho_hat < grid_lo || rho_hat > grid_hi) {
    fit.degenerate = true;
    fit.rho_hat = std::clamp(rho_hat, grid_lo, grid_hi);
    return fit;
  }
  fit.rho_hat = rho_hat;
  return fit;
}

TransitionEstimate estimate_phase_transition(const PhaseGrid& grid,
                                             SolverKind solver,
                                             const ReferenceCurve& reference,
                                             const SolverOptions& opts) {
  if (grid.deltas.empty()) {
    throw std::invalid_argument("estimate_phase_transition: no deltas given");
  }
  for (double delta : grid.deltas) {
    if (delta <= 0 || delta > 1) {
      throw std::invalid_argument(
          "estimate_phase_transition: deltas must lie in (0, 1]");
    }
  }
  if (grid.trials_per_cell < 1) {
    throw std::invalid_argument(
        "estimate_phase_transition: trials_per_cell must be >= 1");
  }
  if (grid.N < 2) {
    throw std::invalid_argument("estimate_phase_transition: N must be >= 2");
  }

  const int D = static_cast<int>(grid.deltas.size());
  const int R = grid.rho_count;
  const int M = grid.trials_per_cell;

  std::vector<std::vector<double>> rho_grids(D);
  for (int di = 0; di < D; ++di) {
    rho_grids[di] = make_rho_grid(reference.rho_at(grid.deltas[di]), R,
                                  grid.rho_halfwidth);
  }

  const int total = D * R * M;
  std::vector<TrialRecord> records(total);
  parallel_run(total, grid.threads, [&](int i) {
    const int di = i / (R * M);
    const int rem = i % (R * M);
    const int ri = rem / M;
    const int m = rem % M;
    const std::uint64_t seed = trial_seed(grid.master_seed, di, ri, m);
    records[i] = run_recovery_trial(solver, grid.ensemble, grid.N,
                                    grid.deltas[di], rho_grids[di][ri], seed,
                                    opts, grid.success_threshold);
  });

  TransitionEstimate estimate;
  estimate.per_delta.reserve(D);
  for (int di = 0; di < D; ++di) {
    DeltaTransition tr;
    tr.delta = grid.deltas[di];
    tr.rhos = rho_grids[di];
    tr.trials = M;
    tr.success_counts.assign(R, 0);
    for (int ri = 0; ri < R; ++ri) {
      for (int m = 0; m < M; ++m) {
        const TrialRecord& rec = records[(di * R + ri) * M + m];
        if (rec.success) ++tr.success_counts[ri];
      }
    }
    const LogisticFit fit =
        fit_logistic_midpoint(tr.rhos, tr.success_counts, M);
    tr.rho_hat = fit.rho_hat;
    tr.intercept = fit.intercept;
    tr.slope = fit.slope;
    tr.degenerate = fit.degenerate;
    estimate.per_delta.push_back(std::move(tr));
  }
  estimate.trials = std::move(records);
  return estimate;
}

BenchmarkSuiteResult run_benchmark_suite(const BenchmarkConfig& config,
                                         const SolverOptions& opts) {
  if (config.solvers.empty() || config.rhos.empty()) {
    throw std::invalid_argument(
        "run_benchmark_suite: need at least one solver and one rho");
  }
  if (config.trials < 1) {
    throw std::invalid_argument("run_benchmark_suite: trials must be >= 1");
  }

  const int S = static_cast<int>(config.solvers.size());
  const int C = static_cast<int>(config.rhos.size());
  const int M = config.trials;
  const int total = S * C * M;

  std::vector<TrialRecord> records(total);
  parallel_run(total, config.threads, [&](int i) {
    const int si = i / (C * M);
    const int rem = i % (C * M);
    const int ci = rem / M;
    const int m = rem % M;
    // Seeds ignore the solver index: every solver sees the same instances.
    const std::uint64_t seed = trial_seed(config.master_seed, ci, m, 0);
    records[i] = run_recovery_trial(config.solvers[si], config.ensemble,
                                    config.N, config.delta, config.rhos[ci],
                                    seed, opts, config.success_threshold);
  });

  BenchmarkSuiteResult out;
  out.summary.reserve(static_cast<std::size_t>(S) * C);
  for (int si = 0; si < S; ++si) {
    for (int ci = 0; ci < C; ++ci) {
      BenchmarkRecord agg;
      agg.solver = to_string(config.solvers[si]);
      agg.delta = config.delta;
      agg.rho = config.rhos[ci];
      agg.N = config.N;
      agg.trials = M;

      std::vector<const TrialRecord*> valid;
      for (int m = 0; m < M; ++m) {
        const TrialRecord& rec = records[(si * C + ci) * M + m];
        agg.n = rec.n;
        agg.k = rec.k;
        if (rec.success) ++agg.success_count;
        if (rec.status != "error") valid.push_back(&rec);
      }
      if (valid.empty()) {
        agg.rmse_min = agg.rmse_mean = agg.rmse_max = -1.0;
        agg.calls_min = agg.calls_mean = agg.calls_max = -1.0;
        agg.time_min = agg.time_mean = agg.time_max = -1.0;
      } else {
        auto stats = [&](auto getter, double& mn, double& mean, double& mx) {
          mn = mx = getter(*valid.front());
          double sum = 0.0;
          for (const TrialRecord* rec : valid) {
            const double v = getter(*rec);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            sum += v;
          }
          mean = sum / static_cast<double>(valid.size());
        };
        stats([](const TrialRecord& r) { return r.relative_rmse; },
              agg.rmse_min, agg.rmse_mean, agg.rmse_max);
        stats([](const TrialRecord& r) {
          return static_cast<double>(r.operator_calls);
        }, agg.calls_min, agg.calls_mean, agg.calls_max);
        stats([](const TrialRecord& r) { return r.wall_time_s; },
              agg.time_min, agg.time_mean, agg.time_max);
      }
      out.summary.push_back(std::move(agg));
    }
  }
  out.trials = std::move(records);
  return out;
}

SamplingMask generate_mri_pattern(int rows, int cols, int n,
                                  std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("generate_mri_pattern: bad extents");
  }
  const int total = rows * cols;
  if (n < 1 || n > total) {
    throw std::invalid_argument(
        "generate_mri_pattern: need 1 <= n <= rows*cols");
  }
  // Low-frequency square block sized to hold ~60% of the budget.
  int side = static_cast<int>(std::floor(std::sqrt(0.6 * n)));
  side = std::clamp(side, 1, std::min(rows, cols));

  std::vector<char> taken(total, 0);
  std::vector<int> indices;
  indices.reserve(n);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      taken[r * cols + c] = 1;
      indices.push_back(r * cols + c);
    }
  }

  const int remaining = n - static_cast<int>(indices.size());
  if (remaining > 0) {
    std::vector<int> pool;
    pool.reserve(total - indices.size());
    for (int i = 0; i < total; ++i) {
      if (!taken[i]) pool.push_back(i);
    }
    Rng rng(seed);
    const std::vector<int> picks = rng.sample_without_replacement(
        static_cast<int>(pool.size()), remaining);
    for (int p : picks) indices.push_back(pool[p]);
  }

  std::sort(indices.begin(), indices.end());
  return SamplingMask::make_2d(rows, cols, std::move(indices));
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& b, double sigma,
                          std::uint64_t seed) {
  if (sigma < 0) {
    throw std::invalid_argument("add_noise: sigma must be nonnegative");
  }
  Rng rng(seed);
  Eigen::VectorXd noisy = b;
  for (Eigen::Index i = 0; i < noisy.size(); ++i) {
    noisy[i] += sigma * rng.normal();
  }
  return noisy;
}

Eigen::MatrixXd make_piecewise_constant_image(int rows, int cols,
                                              int num_rects,
                                              std::uint64_t seed) {
  if (rows < 1 || cols < 1 || num_rects < 0) {
    throw std::invalid_argument("make_piecewise_constant_image: bad shape");
  }
  Eigen::MatrixXd img = Eigen::MatrixXd::Constant(rows, cols, 128.0);
  Rng rng(seed);
  for (int rect = 0; rect < num_rects; ++rect) {
    int r0 = static_cast<int>(rng.uniform_int(rows));
    int r1 = static_cast<int>(rng.uniform_int(rows));
    int c0 = static_cast<int>(rng.uniform_int(cols));
    int c1 = static_cast<int>(rng.uniform_int(cols));
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    const double value = static_cast<double>(rng.uniform_int(256));
    img.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1).setConstant(value);
  }
  return img;
}

ImageProblem make_image_problem(Eigen::MatrixXd image, int wavelet_levels,
                                SamplingMask mask, double sigma,
                                std::uint64_t noise_seed) {
  if (image.rows() < 1 || image.cols() < 1) {
    throw std::invalid_argument("make_image_problem: empty image");
  }
  if (image.norm() == 0.0) {
    throw std::invalid_argument(
        "make_image_problem: image is identically zero");
  }
  if (!mask.is_2d() ||
      mask.domain_shape()[0] != static_cast<int>(image.rows()) ||
      mask.domain_shape()[1] != static_cast<int>(image.cols())) {
    throw std::invalid_argument(
        "make_image_problem: mask domain does not match the image");
  }
  if (sigma < 0) {
    throw std::invalid_argument("make_image_problem: sigma must be >= 0");
  }
  // Validates extents against the decomposition depth.
  WaveletTransform probe(static_cast<int>(image.rows()),
                         static_cast<int>(image.cols()), wavelet_levels);
  const double n = static_cast<double>(mask.count());
  const double epsilon = std::sqrt(n + 2.0 * std::sqrt(2.0 * n)) * sigma;
  return ImageProblem{std::move(image), wavelet_levels, std::move(mask),
                      sigma, epsilon, noise_seed};
}

ImageDemoResult run_image_demo(const ImageProblem& problem, SolverKind solver,
                               const SolverOptions& opts) {
  const int rows = static_cast<int>(problem.image.rows());
  const int cols = static_cast<int>(problem.image.cols());
  const WaveletTransform wavelet(rows, cols, problem.wavelet_levels);

  std::shared_ptr<const SamplingOperator> sampler =
      make_partial_dct(rows * cols, problem.mask);
  const Eigen::VectorXd b_clean =
      sampler->apply(wavelet.flatten(problem.image));
  const Eigen::VectorXd b =
      add_noise(b_clean, problem.sigma, problem.noise_seed);
  const auto A = compose_synthesis_operator(sampler, wavelet);

  SolverOptions run_opts = opts;
  run_opts.epsilon = problem.epsilon;

  const auto start = Clock::now();
  const SolverResult res = run_solver(solver, *A, b, run_opts);

  ImageDemoResult out;
  out.wall_time_s = seconds_since(start);
  out.reconstruction = wavelet.inverse(wavelet.unflatten(res.x_hat));
  out.relative_error =
      (out.reconstruction - problem.image).norm() / problem.image.norm();
  out.feasibility_gap = res.residual_history.empty()
                            ? b.norm()
                            : res.residual_history.back() * b.norm();
  out.epsilon = problem.epsilon;
  out.outer_iters = res.outer_iters;
  out.operator_calls = res.operator_calls;
  out.status = res.status;
  return out;
}

}  // namespace onel1
