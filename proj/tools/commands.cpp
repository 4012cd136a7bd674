#include "commands.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "onel1/experiments.hpp"
#include "onel1/image_io.hpp"
#include "onel1/operators.hpp"
#include "onel1/records_io.hpp"
#include "onel1/reference_curve.hpp"
#include "onel1/rng.hpp"
#include "onel1/solvers.hpp"
#include "onel1/wavelet.hpp"

namespace onel1::cli {

namespace {

namespace fs = std::filesystem;

// Short human-readable number for summary lines (files carry full precision).
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string status_name(SolverStatus status) {
  return status == SolverStatus::Converged ? "converged" : "max-iterations";
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir +
                  "': " + ec.message());
  }
}

std::string out_path(const RunConfig& cfg, const std::string& filename) {
  return (fs::path(cfg.out) / filename).string();
}

// Numbers separated by whitespace, commas, or newlines; '#' starts a comment.
std::vector<std::string> read_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
  }
  return tokens;
}

Eigen::VectorXd read_vector_file(const std::string& path) {
  const std::vector<std::string> tokens = read_tokens(path);
  Eigen::VectorXd values(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    char* end = nullptr;
    values[static_cast<Eigen::Index>(i)] =
        std::strtod(tokens[i].c_str(), &end);
    if (end != tokens[i].c_str() + tokens[i].size()) {
      throw InputError("'" + path + "': bad number '" + tokens[i] + "'");
    }
  }
  return values;
}

std::vector<int> read_index_file(const std::string& path) {
  const std::vector<std::string> tokens = read_tokens(path);
  std::vector<int> indices;
  indices.reserve(tokens.size());
  for (const std::string& token : tokens) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || v < 0 || v > 1 << 30) {
      throw InputError("'" + path + "': bad index '" + token + "'");
    }
    indices.push_back(static_cast<int>(v));
  }
  return indices;
}

SolverOptions options_from(const RunConfig& cfg) {
  SolverOptions opts;
  opts.schedule.r = cfg.r;  // 0 keeps the recommended value
  opts.schedule.alpha = cfg.alpha;
  opts.tau = cfg.tau;
  opts.tau1 = cfg.tau1;
  opts.tau2 = cfg.tau2;
  opts.epsilon = cfg.epsilon;
  return opts;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

int run_solve(const RunConfig& cfg) {
  const Eigen::VectorXd b = read_vector_file(cfg.b_path);
  const int n = static_cast<int>(b.size());
  if (n < 1) throw InputError("'" + cfg.b_path + "' holds no values");
  if (b.norm() == 0.0) {
    throw InputError("measurement vector b is identically zero");
  }
  if (cfg.big_n < n) {
    throw InputError("--big-n (" + std::to_string(cfg.big_n) +
                     ") must be at least the measurement count n = " +
                     std::to_string(n));
  }

  std::unique_ptr<SamplingOperator> op;
  std::string operator_desc;
  if (!cfg.mask_path.empty()) {
    std::vector<int> indices = read_index_file(cfg.mask_path);
    if (static_cast<int>(indices.size()) != n) {
      throw InputError("mask has " + std::to_string(indices.size()) +
                       " indices but b has " + std::to_string(n) + " values");
    }
    std::sort(indices.begin(), indices.end());
    try {
      op = make_partial_dct(cfg.big_n,
                            SamplingMask::make_1d(cfg.big_n,
                                                  std::move(indices)));
    } catch (const std::exception& err) {
      throw InputError(err.what());
    }
    operator_desc = "partial-dct:mask-file";
  } else {
    try {
      op = make_ensemble_operator(ensemble_from_string(cfg.ensemble), n,
                                  cfg.big_n, cfg.seed);
    } catch (const std::exception& err) {
      throw InputError(err.what());
    }
    operator_desc = cfg.ensemble;
  }

  const SolverOptions opts = options_from(cfg);
  nlohmann::json results = nlohmann::json::array();
  for (const std::string& name : cfg.solvers) {
    SolverResult res;
    try {
      res = run_solver(solver_kind_from_string(name), *op, b, opts);
    } catch (const std::exception& err) {
      throw SolverError(name + std::string(": ") + err.what());
    }
    const double final_residual =
        res.residual_history.empty() ? -1.0 : res.residual_history.back();

    std::cout << "solve solver=" << name << " status="
              << status_name(res.status) << " outer_iters=" << res.outer_iters
              << " operator_calls=" << res.operator_calls
              << " final_relative_residual=" << num(final_residual) << "\n";

    results.push_back(
        {{"solver", name},
         {"status", status_name(res.status)},
         {"outer_iters", res.outer_iters},
         {"operator_calls", res.operator_calls},
         {"final_relative_residual", final_residual},
         {"residual_history", res.residual_history},
         {"x_hat", std::vector<double>(res.x_hat.data(),
                                       res.x_hat.data() + res.x_hat.size())}});

    if (!cfg.x_out.empty()) {
      fs::path path(cfg.x_out);
      if (cfg.solvers.size() > 1) {
        path = path.parent_path() /
               (path.stem().string() + "_" + name + path.extension().string());
      }
      std::string text;
      for (Eigen::Index i = 0; i < res.x_hat.size(); ++i) {
        text += format_double(res.x_hat[i]);
        text.push_back('\n');
      }
      write_text_file(path.string(), text);
    }
  }

  ensure_out_dir(cfg.out);
  write_json_file(out_path(cfg, "solve.json"),
                  {{"command", "solve"},
                   {"N", cfg.big_n},
                   {"n", n},
                   {"operator", operator_desc},
                   {"seed", cfg.seed},
                   {"epsilon", cfg.epsilon},
                   {"results", results}});
  return kExitOk;
}

void warn_errored_trials(const std::vector<TrialRecord>& trials) {
  int errored = 0;
  for (const TrialRecord& rec : trials) {
    if (rec.status == "error") ++errored;
  }
  if (errored > 0) {
    std::cerr << "warning: " << errored << "/" << trials.size()
              << " trials errored (see the trials file)\n";
  }
}

int run_phase_transition(const RunConfig& cfg) {
  ReferenceCurve curve = [&] {
    try {
      return cfg.curve_path.empty() ? builtin_reference_curve()
                                    : load_reference_curve(cfg.curve_path);
    } catch (const std::exception& err) {
      throw InputError(err.what());
    }
  }();

  PhaseGrid grid;
  grid.deltas = cfg.deltas;
  grid.trials_per_cell = cfg.trials;
  grid.ensemble = ensemble_from_string(cfg.ensemble);
  grid.N = cfg.big_n;
  grid.master_seed = cfg.seed;
  grid.threads = cfg.threads;

  TransitionEstimate est;
  try {
    est = estimate_phase_transition(grid, solver_kind_from_string(
                                              cfg.solvers.front()),
                                    curve, options_from(cfg));
  } catch (const std::exception& err) {
    throw SolverError(err.what());
  }

  ensure_out_dir(cfg.out);
  const RecordFormat format = record_format_from_string(cfg.format);
  try {
    write_trial_records(out_path(cfg, "phase_transition_trials." + cfg.format),
                        format, est.trials);

    // Summary: one fitted transition per delta, plus the reference value.
    // Cells: success counts per (delta, rho) grid point, plot-ready.
    if (format == RecordFormat::Csv) {
      std::string summary =
          "delta,rho_ref,rho_hat,intercept,slope,degenerate,trials\n";
      std::string cells = "delta,rho,successes,trials\n";
      for (const DeltaTransition& tr : est.per_delta) {
        summary += format_double(tr.delta) + "," +
                   format_double(curve.rho_at(tr.delta)) + "," +
                   format_double(tr.rho_hat) + "," +
                   format_double(tr.intercept) + "," +
                   format_double(tr.slope) + "," +
                   (tr.degenerate ? "1" : "0") + "," +
                   std::to_string(tr.trials) + "\n";
        for (std::size_t i = 0; i < tr.rhos.size(); ++i) {
          cells += format_double(tr.delta) + "," + format_double(tr.rhos[i]) +
                   "," + std::to_string(tr.success_counts[i]) + "," +
                   std::to_string(tr.trials) + "\n";
        }
      }
      write_text_file(out_path(cfg, "phase_transition_summary.csv"), summary);
      write_text_file(out_path(cfg, "phase_transition_cells.csv"), cells);
    } else {
      nlohmann::json summary = nlohmann::json::array();
      nlohmann::json cells = nlohmann::json::array();
      for (const DeltaTransition& tr : est.per_delta) {
        summary.push_back({{"delta", tr.delta},
                           {"rho_ref", curve.rho_at(tr.delta)},
                           {"rho_hat", tr.rho_hat},
                           {"intercept", tr.intercept},
                           {"slope", tr.slope},
                           {"degenerate", tr.degenerate},
                           {"trials", tr.trials}});
        for (std::size_t i = 0; i < tr.rhos.size(); ++i) {
          cells.push_back({{"delta", tr.delta},
                           {"rho", tr.rhos[i]},
                           {"successes", tr.success_counts[i]},
                           {"trials", tr.trials}});
        }
      }
      write_json_file(out_path(cfg, "phase_transition_summary.json"), summary);
      write_json_file(out_path(cfg, "phase_transition_cells.json"), cells);
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& err) {
    throw IoError(err.what());
  }

  for (const DeltaTransition& tr : est.per_delta) {
    std::cout << "phase-transition delta=" << num(tr.delta)
              << " rho_ref=" << num(curve.rho_at(tr.delta))
              << " rho_hat=" << num(tr.rho_hat)
              << " degenerate=" << (tr.degenerate ? 1 : 0)
              << " trials=" << tr.trials << "\n";
  }
  warn_errored_trials(est.trials);
  return kExitOk;
}

int run_benchmark(const RunConfig& cfg) {
  BenchmarkConfig bc;
  bc.N = cfg.big_n;
  bc.delta = cfg.deltas.front();
  bc.rhos = cfg.rhos;
  bc.trials = cfg.trials;
  bc.ensemble = ensemble_from_string(cfg.ensemble);
  bc.solvers.clear();
  for (const std::string& name : cfg.solvers) {
    bc.solvers.push_back(solver_kind_from_string(name));
  }
  bc.master_seed = cfg.seed;
  bc.threads = cfg.threads;

  BenchmarkSuiteResult suite;
  try {
    suite = run_benchmark_suite(bc, options_from(cfg));
  } catch (const std::exception& err) {
    throw SolverError(err.what());
  }

  ensure_out_dir(cfg.out);
  const RecordFormat format = record_format_from_string(cfg.format);
  try {
    write_benchmark_records(out_path(cfg, "benchmark_summary." + cfg.format),
                            format, suite.summary);
    write_trial_records(out_path(cfg, "benchmark_trials." + cfg.format),
                        format, suite.trials);
  } catch (const std::exception& err) {
    throw IoError(err.what());
  }

  for (const BenchmarkRecord& rec : suite.summary) {
    std::cout << "benchmark solver=" << rec.solver << " delta="
              << num(rec.delta) << " rho=" << num(rec.rho) << " n=" << rec.n
              << " k=" << rec.k << " success=" << rec.success_count << "/"
              << rec.trials << " rmse_mean=" << num(rec.rmse_mean)
              << " calls_mean=" << num(rec.calls_mean)
              << " time_mean=" << num(rec.time_mean) << "s\n";
  }
  warn_errored_trials(suite.trials);
  return kExitOk;
}

int run_image_demo(const RunConfig& cfg) {
  Eigen::MatrixXd image;
  try {
    image = cfg.image_path.empty()
                ? make_piecewise_constant_image(256, 256, 25,
                                                derive_seed(cfg.seed, {100}))
                : read_pgm(cfg.image_path);
  } catch (const std::exception& err) {
    throw InputError(err.what());
  }
  const int rows = static_cast<int>(image.rows());
  const int cols = static_cast<int>(image.cols());

  ImageDemoResult res;
  double delta = 0.0;
  try {
    SamplingMask mask =
        generate_mri_pattern(rows, cols, cfg.n, derive_seed(cfg.seed, {101}));
    delta = static_cast<double>(cfg.n) / (static_cast<double>(rows) * cols);
    ImageProblem problem =
        make_image_problem(std::move(image), cfg.levels, std::move(mask),
                           cfg.sigma, derive_seed(cfg.seed, {102}));
    try {
      res = onel1::run_image_demo(problem,
                                  solver_kind_from_string(cfg.solvers.front()),
                                  options_from(cfg));
    } catch (const std::exception& err) {
      throw SolverError(err.what());
    }

    ensure_out_dir(cfg.out);
    write_pgm(out_path(cfg, "image_original.pgm"), problem.image);
    write_pgm(out_path(cfg, "image_reconstruction.pgm"), res.reconstruction);
  } catch (const SolverError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& err) {
    throw InputError(err.what());
  }

  // With epsilon = 0 the run is the noise-free problem and feasibility is
  // the solver's convergence criterion itself.
  const bool feasible = res.epsilon > 0
                            ? res.feasibility_gap <= res.epsilon * (1 + 1e-6)
                            : res.status == SolverStatus::Converged;
  write_json_file(out_path(cfg, "image_demo.json"),
                  {{"command", "image-demo"},
                   {"solver", cfg.solvers.front()},
                   {"rows", rows},
                   {"cols", cols},
                   {"n", cfg.n},
                   {"delta", delta},
                   {"sigma", cfg.sigma},
                   {"levels", cfg.levels},
                   {"seed", cfg.seed},
                   {"epsilon", res.epsilon},
                   {"relative_error", res.relative_error},
                   {"feasibility_gap", res.feasibility_gap},
                   {"feasible", feasible},
                   {"wall_time_s", res.wall_time_s},
                   {"outer_iters", res.outer_iters},
                   {"operator_calls", res.operator_calls},
                   {"status", status_name(res.status)}});

  std::cout << "image-demo solver=" << cfg.solvers.front()
            << " relative_error=" << num(res.relative_error)
            << " epsilon=" << num(res.epsilon)
            << " feasibility_gap=" << num(res.feasibility_gap)
            << " time=" << num(res.wall_time_s) << "s status="
            << status_name(res.status) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest: fast, self-contained oracle and invariant checks.

void expect(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

void check_soft_threshold() {
  // Grid oracle: S_lambda(w) minimizes 0.5*(z-w)^2 + lambda*|z|.
  for (const double lambda : {0.1, 0.7}) {
    for (double w = -2.0; w <= 2.0; w += 0.23) {
      Eigen::VectorXd input(1);
      input[0] = w;
      const double prox = soft_threshold(input, lambda)[0];
      double best_z = -3.0, best_val = 1e300;
      for (double z = -3.0; z <= 3.0; z += 1e-4) {
        const double val = 0.5 * (z - w) * (z - w) + lambda * std::abs(z);
        if (val < best_val) {
          best_val = val;
          best_z = z;
        }
      }
      expect(std::abs(prox - best_z) < 1e-3, "prox differs from grid argmin");
    }
  }
  // Nonexpansiveness.
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd a(3), b(3);
    for (int j = 0; j < 3; ++j) {
      a[j] = 3.0 * rng.normal();
      b[j] = 3.0 * rng.normal();
    }
    const double lambda = std::abs(rng.normal());
    expect((soft_threshold(a, lambda) - soft_threshold(b, lambda)).norm() <=
               (a - b).norm() + 1e-12,
           "prox is not nonexpansive");
  }
}

void check_partial_dct_adjoint() {
  Rng rng(12);
  SamplingMask mask = SamplingMask::sample_uniform_1d(256, 64, rng);
  const auto op = make_partial_dct(256, mask);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x(256), y(64);
    for (int j = 0; j < 256; ++j) x[j] = rng.normal();
    for (int j = 0; j < 64; ++j) y[j] = rng.normal();
    const double lhs = op->apply(x).dot(y);
    const double rhs = x.dot(op->adjoint(y));
    expect(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)),
           "<Ax,y> != <x,A'y> for the partial DCT");
  }
}

void check_row_orthonormality() {
  Rng rng(13);
  SamplingMask mask = SamplingMask::sample_uniform_1d(128, 32, rng);
  const auto dct = make_partial_dct(128, mask);
  const auto gauss = make_row_orthonormal_gaussian(32, 128, 77);
  for (const SamplingOperator* op :
       {static_cast<const SamplingOperator*>(dct.get()),
        static_cast<const SamplingOperator*>(gauss.get())}) {
    Eigen::VectorXd y(32);
    for (int j = 0; j < 32; ++j) y[j] = rng.normal();
    const Eigen::VectorXd round_trip = op->apply(op->adjoint(y));
    expect((round_trip - y).norm() <= 1e-10 * y.norm(), "AA' != I");
  }
}

void check_mu0_quantile() {
  Rng rng(14);
  const auto op = make_row_orthonormal_gaussian(11, 101, 5);
  Eigen::VectorXd b(11);
  for (int j = 0; j < 11; ++j) b[j] = rng.normal();
  const double alpha = 0.99;
  const double mu0 = mu0_from_quantile(*op, b, alpha);
  Eigen::VectorXd corr = (op->matrix().transpose() * b).cwiseAbs();
  std::vector<double> sorted(corr.data(), corr.data() + corr.size());
  std::sort(sorted.begin(), sorted.end());
  const int rank = static_cast<int>(std::ceil(alpha * 101));
  expect(std::abs(mu0 - 1.0 / sorted[rank - 1]) <= 1e-12 * mu0,
         "mu0 != 1 / (ceil(alpha*N)-th smallest |A'b|)");
}

void check_lagrangian_identity() {
  Rng rng(15);
  const auto op = make_row_orthonormal_gaussian(4, 8, 21);
  const OrthonormalCompletion completion = orthonormal_completion(op->matrix());
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd x(8), p(8), y(8);
    for (int j = 0; j < 8; ++j) {
      x[j] = rng.normal();
      p[j] = rng.normal();
      y[j] = rng.normal();
    }
    const double mu = 0.5 + std::abs(rng.normal());
    const double direct = augmented_lagrangian_value(x, p, y, mu, completion);
    const Eigen::VectorXd gap = p - completion.phi() * x + y / mu;
    const double completed = x.lpNorm<1>() + 0.5 * mu * gap.squaredNorm() -
                             y.squaredNorm() / (2.0 * mu);
    expect(std::abs(direct - completed) <=
               1e-10 * std::max(1.0, std::abs(direct)),
           "augmented Lagrangian completed-square identity failed");
  }
}

void check_oracle_equivalence() {
  int matches = 0;
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t seed = 1000 + i;
    const auto op = make_row_orthonormal_gaussian(5, 10, seed);
    const Eigen::VectorXd x_true =
        generate_sparse_signal(10, 1 + static_cast<int>(i % 2),
                               derive_seed(seed, {1}));
    const Eigen::VectorXd b = op->matrix() * x_true;
    const Eigen::VectorXd x_star = bp_bruteforce_oracle(op->matrix(), b);
    const SolverOptions opts;
    const Eigen::VectorXd x_exact = solve_eone_l1(*op, b, opts).x_hat;
    const Eigen::VectorXd x_relaxed = solve_rone_l1(*op, b, opts).x_hat;
    const double scale = std::max(1.0, x_star.norm());
    if ((x_exact - x_star).norm() <= 1e-4 * scale &&
        (x_relaxed - x_star).norm() <= 1e-4 * scale) {
      ++matches;
    }
    expect(x_exact.lpNorm<1>() <= x_star.lpNorm<1>() * (1 + 1e-3) &&
               x_relaxed.lpNorm<1>() <= x_star.lpNorm<1>() * (1 + 1e-3),
           "solver l1 norm exceeds the brute-force minimum");
  }
  expect(matches >= 4, "solvers matched the brute-force oracle on fewer "
                       "than 4 of 5 tiny instances");
}

void check_phi_free_equivalence() {
  const auto op = make_row_orthonormal_gaussian(8, 16, 42);
  const Eigen::VectorXd x_true = generate_sparse_signal(16, 2, 43);
  const Eigen::VectorXd b = op->matrix() * x_true;
  SolverOptions opts;
  opts.max_outer = 60;
  SolverTrace free_trace, expanded_trace;
  (void)solve_rone_l1(*op, b, opts, &free_trace);
  (void)solve_rone_l1_expanded(op->matrix(), b, opts, &expanded_trace);
  const std::size_t steps =
      std::min(free_trace.outer.size(), expanded_trace.outer.size());
  expect(steps >= 10, "trace too short to certify the phi-free recursion");
  for (std::size_t t = 0; t < steps; ++t) {
    expect((free_trace.outer[t].x_t - expanded_trace.outer[t].x_t).norm() <=
               1e-10,
           "phi-free iterate differs from the expanded reference");
  }
}

void check_reference_curve() {
  const ReferenceCurve curve = builtin_reference_curve();
  double prev_delta = 0.0, prev_rho = 0.0;
  for (const auto& [delta, rho] : curve.points()) {
    expect(delta > prev_delta, "reference deltas not increasing");
    expect(rho > prev_rho, "reference curve not increasing");
    prev_delta = delta;
    prev_rho = rho;
  }
  // Interpolation between two adjacent tabulated points.
  const auto& pts = curve.points();
  const double mid_delta = 0.5 * (pts[9].first + pts[10].first);
  const double expected = 0.5 * (pts[9].second + pts[10].second);
  expect(std::abs(curve.rho_at(mid_delta) - expected) <= 1e-12,
         "linear interpolation mismatch");
}

int run_selftest(const RunConfig&) {
  const std::vector<std::pair<const char*, std::function<void()>>> checks = {
      {"soft-threshold-prox", check_soft_threshold},
      {"partial-dct-adjoint", check_partial_dct_adjoint},
      {"row-orthonormality", check_row_orthonormality},
      {"mu0-quantile", check_mu0_quantile},
      {"lagrangian-identity", check_lagrangian_identity},
      {"oracle-equivalence", check_oracle_equivalence},
      {"phi-free-equivalence", check_phi_free_equivalence},
      {"reference-curve", check_reference_curve},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    try {
      fn();
      std::cout << "ok " << name << "\n";
    } catch (const std::exception& err) {
      ++failures;
      std::cout << "FAIL " << name << ": " << err.what() << "\n";
    }
  }
  std::cout << "selftest: " << (checks.size() - failures) << "/"
            << checks.size() << " checks passed\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Solve:
      return run_solve(cfg);
    case Command::PhaseTransition:
      return run_phase_transition(cfg);
    case Command::Benchmark:
      return run_benchmark(cfg);
    case Command::ImageDemo:
      return run_image_demo(cfg);
    case Command::Selftest:
      return run_selftest(cfg);
  }
  throw UsageError("no subcommand selected");
}

}  // namespace onel1::cli
