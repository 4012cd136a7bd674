#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "onel1/operators.hpp"
#include "onel1/reference_curve.hpp"
#include "onel1/solvers.hpp"

namespace onel1 {

enum class Ensemble { PartialDct, GaussianOrthonormal };
enum class SolverKind { EoneL1, RoneL1, Ist, Amp };

// Canonical names: "partial-dct" / "gaussian"; "eone-l1" / "rone-l1" /
// "ist" / "amp" (IST here always means the continuation variant).
std::string to_string(Ensemble ensemble);
std::string to_string(SolverKind kind);
Ensemble ensemble_from_string(const std::string& name);
SolverKind solver_kind_from_string(const std::string& name);

// k-sparse signal: k distinct uniformly-chosen positions, standard normal
// values, deterministic per seed.
Eigen::VectorXd generate_sparse_signal(int N, int k, std::uint64_t seed);

// n x N measurement operator drawn from the ensemble, deterministic per seed.
std::unique_ptr<SamplingOperator> make_ensemble_operator(Ensemble ensemble,
                                                         int n, int N,
                                                         std::uint64_t seed);

// Runs one solver on one random instance via the given solver kind.
SolverResult run_solver(SolverKind kind, const SamplingOperator& A,
                        const Eigen::VectorXd& b, const SolverOptions& opts);

struct TrialRecord {
  std::string solver;
  std::string ensemble;
  double delta = 0.0;
  double rho = 0.0;
  int N = 0;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double relative_rmse = -1.0;  // -1 when the trial errored
  bool success = false;
  std::uint64_t operator_calls = 0;
  int outer_iters = 0;
  double wall_time_s = 0.0;
  std::string status;  // "converged" | "max-iterations" | "error"
  std::string error;   // populated when status == "error"
};

// One Monte Carlo cell: n = ceil(delta*N), k = ceil(rho*n), noise-free
// b = A x. Solver errors are captured in the record, never thrown, so a
// sweep always completes. Wall time covers the solver call only.
TrialRecord run_recovery_trial(SolverKind solver, Ensemble ensemble, int N,
                               double delta, double rho, std::uint64_t seed,
                               const SolverOptions& opts = {},
                               double success_threshold = 1e-4);

// count equispaced rho values on [center-halfwidth, center+halfwidth]
// clipped to [0.001, 0.999].
std::vector<double> make_rho_grid(double rho_center, int count = 21,
                                  double halfwidth = 0.1);

struct PhaseGrid {
  std::vector<double> deltas;
  int rho_count = 21;
  double rho_halfwidth = 0.1;
  int trials_per_cell = 20;
  Ensemble ensemble = Ensemble::PartialDct;
  int N = 1024;
  double success_threshold = 1e-4;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0: use hardware concurrency
};

struct LogisticFit {
  double rho_hat = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  bool degenerate = false;
};

// Binomial-logit maximum likelihood by iteratively reweighted least squares;
// rho_hat = -intercept/slope is the 50% success point. Degenerate data
// (all-success, all-failure, perfect separation, or a fit leaving the tested
// interval) yields a flagged result with rho_hat clamped into the grid.
LogisticFit fit_logistic_midpoint(const std::vector<double>& rhos,
                                  const std::vector<int>& success_counts,
                                  int trials);

struct DeltaTransition {
  double delta = 0.0;
  std::vector<double> rhos;
  std::vector<int> success_counts;
  int trials = 0;
  double rho_hat = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  bool degenerate = false;
};

struct TransitionEstimate {
  std::vector<DeltaTransition> per_delta;
  std::vector<TrialRecord> trials;
};

// Monte Carlo phase-transition sweep: per delta, a rho grid centered on the
// reference curve, M trials per cell, logistic fit of the 50% point. Trials
// run in parallel (each owns its operator and RNG stream); per-trial seeds
// derive from (master_seed, delta index, rho index, trial index) so results
// do not depend on scheduling.
TransitionEstimate estimate_phase_transition(const PhaseGrid& grid,
                                             SolverKind solver,
                                             const ReferenceCurve& reference,
                                             const SolverOptions& opts = {});

struct BenchmarkConfig {
  int N = 4096;
  double delta = 0.2;
  std::vector<double> rhos = {0.1, 0.22};
  int trials = 20;
  Ensemble ensemble = Ensemble::PartialDct;
  std::vector<SolverKind> solvers = {SolverKind::EoneL1, SolverKind::RoneL1,
                                     SolverKind::Ist, SolverKind::Amp};
  double success_threshold = 1e-4;
  std::uint64_t master_seed = 0;
  int threads = 0;
};

// Aggregate row per solver per cell; min/mean/max exclude errored trials.
struct BenchmarkRecord {
  std::string solver;
  double delta = 0.0;
  double rho = 0.0;
  int N = 0;
  int n = 0;
  int k = 0;
  int trials = 0;
  int success_count = 0;
  double rmse_min = 0.0, rmse_mean = 0.0, rmse_max = 0.0;
  double calls_min = 0.0, calls_mean = 0.0, calls_max = 0.0;
  double time_min = 0.0, time_mean = 0.0, time_max = 0.0;
};

struct BenchmarkSuiteResult {
  std::vector<BenchmarkRecord> summary;
  std::vector<TrialRecord> trials;
};

// Per-trial seeds depend on (master_seed, cell, trial) but not on the solver,
// so every solver sees the same problem instances.
BenchmarkSuiteResult run_benchmark_suite(const BenchmarkConfig& config,
                                         const SolverOptions& opts = {});

// Deterministic sampling pattern over the 2-D DCT grid: a fully-sampled
// low-frequency square block holding ~60% of the budget plus uniformly random
// remaining coefficients; always includes DC; exactly n indices.
SamplingMask generate_mri_pattern(int rows, int cols, int n,
                                  std::uint64_t seed);

// b + e with e i.i.d. N(0, sigma^2), deterministic per seed.
Eigen::VectorXd add_noise(const Eigen::VectorXd& b, double sigma,
                          std::uint64_t seed);

// Flat background overlaid with seeded random axis-aligned rectangles of
// constant gray level; values in [0, 255].
Eigen::MatrixXd make_piecewise_constant_image(int rows, int cols,
                                              int num_rects,
                                              std::uint64_t seed);

struct ImageProblem {
  Eigen::MatrixXd image;  // ground truth, grayscale
  int wavelet_levels = 4;
  SamplingMask mask;  // over the image's 2-D DCT grid
  double sigma = 0.0;
  double epsilon = 0.0;  // always sqrt(n + 2*sqrt(2n)) * sigma
  std::uint64_t noise_seed = 0;
};

// Validates shapes and computes epsilon from (n, sigma).
ImageProblem make_image_problem(Eigen::MatrixXd image, int wavelet_levels,
                                SamplingMask mask, double sigma,
                                std::uint64_t noise_seed);

struct ImageDemoResult {
  Eigen::MatrixXd reconstruction;
  double relative_error = 0.0;   // Frobenius, vs the ground-truth image
  double wall_time_s = 0.0;
  double feasibility_gap = 0.0;  // ||A x_hat - b||_2
  double epsilon = 0.0;
  int outer_iters = 0;
  std::uint64_t operator_calls = 0;
  SolverStatus status = SolverStatus::MaxIterations;
};

// Noisy reconstruction pipeline: b = mask-selected 2-D DCT of the image plus
// noise; A = (partial 2-D DCT) composed with Haar synthesis; the solver runs
// in noisy mode (epsilon from the problem; first feasible iterate wins) and
// the estimate maps back through the inverse wavelet transform.
ImageDemoResult run_image_demo(const ImageProblem& problem, SolverKind solver,
                               const SolverOptions& opts = {});

}  // namespace onel1
