#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "onel1/experiments.hpp"
#include "onel1/operators.hpp"
#include "onel1/rng.hpp"
#include "onel1/solvers.hpp"

using namespace onel1;

namespace {

Eigen::VectorXd random_vector(int N, Rng& rng) {
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v[i] = rng.normal();
  return v;
}

// Dense copy of a matrix-free operator, column by column.
Eigen::MatrixXd densify(const SamplingOperator& op) {
  Eigen::MatrixXd A(op.rows(), op.cols());
  for (int j = 0; j < op.cols(); ++j) {
    A.col(j) = op.apply(Eigen::VectorXd::Unit(op.cols(), j));
  }
  return A;
}

// Grid-search oracle for argmin_x lambda*|x| + 0.5*(x - w)^2: a coarse pass
// followed by a fine pass around the best coarse point, accurate to ~1e-7.
double prox_grid_oracle(double w, double lambda) {
  auto objective = [&](double x) {
    return lambda * std::abs(x) + 0.5 * (x - w) * (x - w);
  };
  const double span = std::abs(w) + 1.0;
  double best_x = 0.0;
  double best_f = objective(0.0);
  for (double x = -span; x <= span; x += 1e-3) {
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double lo = best_x - 2e-3, hi = best_x + 2e-3;
  for (double x = lo; x <= hi; x += 1e-7) {
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  return best_x;
}

struct TinyInstance {
  std::unique_ptr<SamplingOperator> op;
  Eigen::MatrixXd A_dense;
  Eigen::VectorXd x_true;
  Eigen::VectorXd b;
};

TinyInstance make_tiny_instance(int N, int n, int k, bool gaussian,
                                std::uint64_t seed) {
  TinyInstance inst;
  if (gaussian) {
    auto g = make_row_orthonormal_gaussian(n, N, derive_seed(seed, {0}));
    inst.A_dense = g->matrix();
    inst.op = std::move(g);
  } else {
    Rng rng(derive_seed(seed, {0}));
    inst.op = make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
    inst.A_dense = densify(*inst.op);
  }
  inst.x_true = generate_sparse_signal(N, k, derive_seed(seed, {1}));
  inst.b = inst.op->apply(inst.x_true);
  return inst;
}

}  // namespace

TEST_CASE("soft_threshold matches the elementwise shrinkage formula") {
  Rng rng(2001);
  const Eigen::VectorXd w = random_vector(64, rng);
  const double lambda = 0.37;
  const Eigen::VectorXd s = soft_threshold(w, lambda);
  for (int i = 0; i < w.size(); ++i) {
    const double expected =
        std::abs(w[i]) <= lambda
            ? 0.0
            : (w[i] > 0 ? w[i] - lambda : w[i] + lambda);
    CHECK(s[i] == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("soft_threshold is the prox of the scaled l1 norm (grid oracle)") {
  Rng rng(2002);
  for (int rep = 0; rep < 40; ++rep) {
    const double w = 4.0 * (rng.uniform() - 0.5);
    const double lambda = 1.5 * rng.uniform();
    Eigen::VectorXd wv(1);
    wv << w;
    const double fast = soft_threshold(wv, lambda)[0];
    const double oracle = prox_grid_oracle(w, lambda);
    CHECK(std::abs(fast - oracle) < 1e-6);
  }
}

TEST_CASE("soft_threshold is nonexpansive") {
  Rng rng(2003);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::VectorXd a = random_vector(5, rng);
    const Eigen::VectorXd b = random_vector(5, rng);
    const double lambda = rng.uniform();
    const double lhs =
        (soft_threshold(a, lambda) - soft_threshold(b, lambda)).norm();
    CHECK(lhs <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("soft_threshold edge cases") {
  Eigen::VectorXd w(3);
  w << -2.0, 0.5, 3.0;
  CHECK((soft_threshold(w, 0.0) - w).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(soft_threshold(w, 10.0).lpNorm<1>() == 0.0);
  CHECK_THROWS(soft_threshold(w, -1e-12));
}

TEST_CASE("mu0_from_quantile matches a full-sort oracle") {
  Rng rng(2004);
  const int N = 200, n = 50;
  const auto op =
      make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd b = random_vector(n, rng);
  const Eigen::VectorXd corr = op->adjoint(b);

  for (double alpha : {0.5, 0.9, 0.99}) {
    std::vector<double> mags(N);
    for (int i = 0; i < N; ++i) mags[i] = std::abs(corr[i]);
    std::sort(mags.begin(), mags.end());
    const int rank = static_cast<int>(std::ceil(alpha * N));
    const double q = mags[rank - 1];
    CHECK(mu0_from_quantile(*op, b, alpha) ==
          doctest::Approx(1.0 / q).epsilon(1e-14));
  }
}

TEST_CASE("mu0_from_quantile rejects degenerate inputs") {
  const auto op = make_row_orthonormal_gaussian(4, 12, 3);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(4);
  CHECK_THROWS(mu0_from_quantile(*op, Eigen::VectorXd::Zero(4), 0.99));
  CHECK_THROWS(mu0_from_quantile(*op, b, 0.0));
  CHECK_THROWS(mu0_from_quantile(*op, b, 1.0));
  CHECK_THROWS(mu0_from_quantile(*op, Eigen::VectorXd::Ones(5), 0.99));

  // [I | 0] has orthonormal rows but half the correlations are exactly zero,
  // so a low quantile has no finite reciprocal.
  Eigen::MatrixXd half = Eigen::MatrixXd::Zero(4, 8);
  half.leftCols(4) = Eigen::MatrixXd::Identity(4, 4);
  DenseMatrixOperator op_half(half);
  CHECK_THROWS(mu0_from_quantile(op_half, b, 0.5));
  CHECK(mu0_from_quantile(op_half, b, 0.99) == doctest::Approx(1.0));
}

TEST_CASE("augmented_lagrangian_value matches the completed-square identity") {
  Rng rng(2005);
  const auto op = make_row_orthonormal_gaussian(5, 12, 17);
  const OrthonormalCompletion comp = orthonormal_completion(op->matrix());
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::VectorXd x = random_vector(12, rng);
    const Eigen::VectorXd p = random_vector(12, rng);
    const Eigen::VectorXd y = random_vector(12, rng);
    const double mu = 0.25 + 3.0 * rng.uniform();
    // <g, y> + (mu/2)||g||^2 = (mu/2)||g + y/mu||^2 - ||y||^2/(2 mu).
    const Eigen::VectorXd gap = p - comp.phi() * x;
    const double completed = x.lpNorm<1>() +
                             0.5 * mu * (gap + y / mu).squaredNorm() -
                             y.squaredNorm() / (2.0 * mu);
    CHECK(augmented_lagrangian_value(x, p, y, mu, comp) ==
          doctest::Approx(completed).epsilon(1e-10));
  }
  CHECK_THROWS(augmented_lagrangian_value(Eigen::VectorXd::Zero(5),
                                          Eigen::VectorXd::Zero(12),
                                          Eigen::VectorXd::Zero(12), 1.0,
                                          comp));
  CHECK_THROWS(augmented_lagrangian_value(Eigen::VectorXd::Zero(12),
                                          Eigen::VectorXd::Zero(12),
                                          Eigen::VectorXd::Zero(12), 0.0,
                                          comp));
}

TEST_CASE("both solvers reach the brute-force basis-pursuit minimizer") {
  int matches_exact = 0, matches_relaxed = 0;
  const int instances = 10;
  for (int i = 0; i < instances; ++i) {
    const int N = 8 + 2 * (i % 3);           // 8, 10, 12
    const int n = N / 2;
    const int k = 1 + (i % 2);
    const TinyInstance inst =
        make_tiny_instance(N, n, k, /*gaussian=*/i % 2 == 0, 9000 + i);
    const Eigen::VectorXd oracle = bp_bruteforce_oracle(inst.A_dense, inst.b);

    const SolverResult exact = solve_eone_l1(*inst.op, inst.b, {});
    const SolverResult relaxed = solve_rone_l1(*inst.op, inst.b, {});

    if (relative_rmse(exact.x_hat, oracle) < 1e-4) ++matches_exact;
    if (relative_rmse(relaxed.x_hat, oracle) < 1e-4) ++matches_relaxed;

    // The l1 value must essentially match the optimum even if the minimizer
    // is not unique.
    const double opt = oracle.lpNorm<1>();
    CHECK(exact.x_hat.lpNorm<1>() <= opt * (1.0 + 1e-3));
    CHECK(relaxed.x_hat.lpNorm<1>() <= opt * (1.0 + 1e-3));
    // And both iterates are (nearly) feasible.
    CHECK((inst.op->apply(exact.x_hat) - inst.b).norm() <
          1e-4 * inst.b.norm());
    CHECK((inst.op->apply(relaxed.x_hat) - inst.b).norm() <
          1e-4 * inst.b.norm());
  }
  CHECK(matches_exact >= instances - 1);
  CHECK(matches_relaxed >= instances - 1);
}

TEST_CASE("phi-free relaxed solver tracks the expanded reference per iterate") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto op = make_row_orthonormal_gaussian(8, 16, 4000 + seed);
    const Eigen::VectorXd x_true =
        generate_sparse_signal(16, 2, derive_seed(seed, {1}));
    const Eigen::VectorXd b = op->apply(x_true);

    SolverOptions opts;
    opts.max_outer = 80;
    SolverTrace trace_free, trace_exp;
    const SolverResult free_run = solve_rone_l1(*op, b, opts, &trace_free);
    const SolverResult exp_run =
        solve_rone_l1_expanded(op->matrix(), b, opts, &trace_exp);

    REQUIRE(free_run.outer_iters == exp_run.outer_iters);
    REQUIRE(trace_free.outer.size() == trace_exp.outer.size());
    REQUIRE(trace_free.outer.size() >= 10);
    for (std::size_t t = 0; t < trace_free.outer.size(); ++t) {
      const double diff = (trace_free.outer[t].x_t - trace_exp.outer[t].x_t)
                              .lpNorm<Eigen::Infinity>();
      CHECK(diff <= 1e-10);
      CHECK(trace_free.outer[t].mu_t ==
            doctest::Approx(trace_exp.outer[t].mu_t).epsilon(1e-14));
    }
    CHECK((free_run.x_hat - exp_run.x_hat).lpNorm<Eigen::Infinity>() <=
          1e-10);
  }
}

TEST_CASE("expanded run keeps the hidden multiplier block at zero") {
  const auto op = make_row_orthonormal_gaussian(6, 14, 321);
  const Eigen::VectorXd x_true = generate_sparse_signal(14, 2, 55);
  const Eigen::VectorXd b = op->apply(x_true);
  const OrthonormalCompletion comp = orthonormal_completion(op->matrix());

  SolverOptions opts;
  opts.max_outer = 60;
  SolverTrace trace;
  (void)solve_rone_l1_expanded(op->matrix(), b, opts, &trace);
  REQUIRE(trace.outer.size() >= 10);

  Eigen::VectorXd y_head = Eigen::VectorXd::Zero(6);
  for (const IterateState& state : trace.outer) {
    // p update uses p_tail = B x - y_tail/mu; p_tail == B x certifies that
    // the hidden multiplier block is identically zero.
    const Eigen::VectorXd expected_tail = comp.B * state.x_t;
    CHECK((state.p_tail - expected_tail).lpNorm<Eigen::Infinity>() <= 1e-12);
    // The observed block follows the multiplier ascent y += mu*(b - A x).
    y_head += state.mu_t * (b - comp.A * state.x_t);
    CHECK((state.y_A - y_head).lpNorm<Eigen::Infinity>() <=
          1e-9 * std::max(1.0, y_head.lpNorm<Eigen::Infinity>()));
    y_head = state.y_A;  // resync to avoid compounding rounding differences
  }
}

TEST_CASE("exact solver inner loop never increases the augmented Lagrangian") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto op = make_row_orthonormal_gaussian(8, 16, 6000 + seed);
    const Eigen::VectorXd x_true =
        generate_sparse_signal(16, 2, derive_seed(seed, {2}));
    const Eigen::VectorXd b = op->apply(x_true);
    const OrthonormalCompletion comp = orthonormal_completion(op->matrix());

    SolverOptions opts;
    opts.max_outer = 40;
    SolverTrace trace;
    (void)solve_eone_l1(*op, b, opts, &trace);
    REQUIRE(trace.outer.size() >= 3);
    REQUIRE(trace.inner_x.size() == trace.outer.size());

    for (std::size_t t = 0; t < trace.outer.size(); ++t) {
      const double mu = trace.outer[t].mu_t;
      Eigen::VectorXd y_full = Eigen::VectorXd::Zero(16);
      y_full.head(8) = trace.outer[t].y_A;  // multiplier at entry; tail = 0

      double prev = std::numeric_limits<double>::infinity();
      for (const Eigen::VectorXd& xj : trace.inner_x[t]) {
        Eigen::VectorXd p(16);
        p.head(8) = b;
        p.tail(8) = comp.B * xj;
        const double L = augmented_lagrangian_value(xj, p, y_full, mu, comp);
        CHECK(L <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
        prev = L;
      }
    }
  }
}

TEST_CASE("relaxed solver matches a literal reimplementation of its recursion") {
  Rng rng(2006);
  const int N = 64, n = 20;
  const auto op =
      make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd x_true = generate_sparse_signal(N, 3, 777);
  const Eigen::VectorXd b = op->apply(x_true);

  SolverOptions opts;
  opts.max_outer = 50;
  SolverTrace trace;
  (void)solve_rone_l1(*op, b, opts, &trace);
  REQUIRE(trace.outer.size() == 50);

  // Literal recursion, recomputing A[(1+kappa) x_t - kappa x_{t-1}] directly
  // instead of tracking w = A x.
  const double mu0 = mu0_from_quantile(*op, b, 0.99);
  const double r = std::min(1.0 + 0.04 * static_cast<double>(n) / N, 1.02);
  const double kappa = 1.0 / r;
  double mu = mu0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd x_prev = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd z_prev = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd z =
        t == 0 ? b
               : Eigen::VectorXd(
                     b - op->apply((1.0 + kappa) * x - kappa * x_prev) +
                     kappa * z_prev);
    const Eigen::VectorXd x_next = soft_threshold(x + op->adjoint(z), 1.0 / mu);
    CHECK((trace.outer[t].x_t - x_next).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK(trace.outer[t].mu_t == doctest::Approx(mu).epsilon(1e-14));
    x_prev = x;
    x = x_next;
    z_prev = z;
    mu *= r;
  }
}

TEST_CASE("relaxed solver costs one apply and one adjoint per iteration") {
  Rng rng(2007);
  const auto op =
      make_partial_dct(256, SamplingMask::sample_uniform_1d(256, 64, rng));
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(256, 5, 99));
  const SolverResult res = solve_rone_l1(*op, b, {});
  CHECK(res.status == SolverStatus::Converged);
  // Entry overhead: 2 calls for the AA' spot check + 1 adjoint for mu0.
  CHECK(res.operator_calls ==
        3 + 2 * static_cast<std::uint64_t>(res.outer_iters));
}

TEST_CASE("exact solver call count matches its inner trace") {
  const auto op = make_row_orthonormal_gaussian(12, 48, 31);
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(48, 3, 32));
  SolverTrace trace;
  const SolverResult res = solve_eone_l1(*op, b, {}, &trace);
  CHECK(res.status == SolverStatus::Converged);
  std::uint64_t expected = 3;  // spot check + mu0
  for (const auto& inner : trace.inner_x) {
    // Each inner step is apply + adjoint; each outer adds one final apply.
    expected += 2 * (inner.size() - 1) + 1;
  }
  CHECK(res.operator_calls == expected);
}

TEST_CASE("default continuation schedules match the documented formulas") {
  const int N = 40, n = 10;
  const auto op = make_row_orthonormal_gaussian(n, N, 71);
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(N, 2, 72));
  const double mu0 = mu0_from_quantile(*op, b, 0.99);

  SolverTrace exact_trace;
  (void)solve_eone_l1(*op, b, {}, &exact_trace);
  REQUIRE(exact_trace.outer.size() >= 2);
  CHECK(exact_trace.outer[0].mu_t == doctest::Approx(mu0).epsilon(1e-14));
  CHECK(exact_trace.outer[1].mu_t / exact_trace.outer[0].mu_t ==
        doctest::Approx(1.0 + static_cast<double>(n) / N).epsilon(1e-14));

  SolverTrace relaxed_trace;
  (void)solve_rone_l1(*op, b, {}, &relaxed_trace);
  REQUIRE(relaxed_trace.outer.size() >= 2);
  CHECK(relaxed_trace.outer[0].mu_t == doctest::Approx(mu0).epsilon(1e-14));
  CHECK(relaxed_trace.outer[1].mu_t / relaxed_trace.outer[0].mu_t ==
        doctest::Approx(std::min(1.0 + 0.04 * n / static_cast<double>(N),
                                 1.02))
            .epsilon(1e-14));

  // Large n/N: the relaxed ratio caps at 1.02.
  const auto wide = make_row_orthonormal_gaussian(30, 40, 73);
  const Eigen::VectorXd b2 = wide->apply(generate_sparse_signal(40, 2, 74));
  SolverTrace capped;
  (void)solve_rone_l1(*wide, b2, {}, &capped);
  REQUIRE(capped.outer.size() >= 2);
  CHECK(capped.outer[1].mu_t / capped.outer[0].mu_t ==
        doctest::Approx(1.02).epsilon(1e-14));

  // Explicit overrides are honored.
  SolverOptions opts;
  opts.schedule.mu0 = 7.0;
  opts.schedule.r = 1.5;
  SolverTrace forced;
  (void)solve_rone_l1(*op, b, opts, &forced);
  REQUIRE(forced.outer.size() >= 2);
  CHECK(forced.outer[0].mu_t == 7.0);
  CHECK(forced.outer[1].mu_t / forced.outer[0].mu_t ==
        doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("relaxed solver error decays exponentially in the tail") {
  Rng rng(2008);
  const int N = 256, n = 52, k = 6;
  const auto op =
      make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(N, k, 1234));

  SolverTrace trace;
  const SolverResult res = solve_rone_l1(*op, b, {}, &trace);
  REQUIRE(res.status == SolverStatus::Converged);
  const Eigen::VectorXd& x_final = res.x_hat;

  std::vector<double> ts, logs;
  const std::size_t T = trace.outer.size();
  for (std::size_t t = static_cast<std::size_t>(0.4 * T); t + 1 < T; ++t) {
    const double e = (trace.outer[t].x_t - x_final).norm();
    if (e > 1e-300) {
      ts.push_back(static_cast<double>(t));
      logs.push_back(std::log(e));
    }
  }
  REQUIRE(ts.size() >= 10);

  // Ordinary least squares of log e_t on t.
  const std::size_t m = ts.size();
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < m; ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double slope = (m * stl - st * sl) / (m * stt - st * st);
  const double intercept = (sl - slope * st) / m;
  double ss_res = 0, ss_tot = 0;
  const double mean_l = sl / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double fit = intercept + slope * ts[i];
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - mean_l) * (logs[i] - mean_l);
  }
  CHECK(slope < 0.0);
  CHECK(1.0 - ss_res / ss_tot >= 0.9);
}

TEST_CASE("ist with lambda = 0 lands on the minimum-norm interpolant") {
  Rng rng(2009);
  const auto op =
      make_partial_dct(64, SamplingMask::sample_uniform_1d(64, 16, rng));
  const Eigen::VectorXd b = random_vector(16, rng);
  const SolverResult res = solve_ist(*op, b, IstMode::fixed_lambda(0.0), {});
  // x_1 = A'b is already feasible because AA' = I.
  CHECK(res.status == SolverStatus::Converged);
  CHECK(res.outer_iters == 1);
  CHECK((res.x_hat - op->adjoint(b)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("fixed-threshold ist stalls at a regularized point, not Converged") {
  const auto op = make_row_orthonormal_gaussian(10, 40, 81);
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(40, 2, 82));
  const double lambda = 0.05 * b.lpNorm<Eigen::Infinity>();
  SolverOptions opts;
  opts.tau = 1e-12;  // unreachable with a fixed threshold
  const SolverResult res = solve_ist(*op, b, IstMode::fixed_lambda(lambda), opts);
  CHECK(res.status == SolverStatus::MaxIterations);
  CHECK(res.outer_iters < opts.max_outer);  // stall detection fired
  // The stall point is a fixed point of the thresholded iteration.
  const Eigen::VectorXd step = soft_threshold(
      res.x_hat + op->adjoint(b - op->apply(res.x_hat)), lambda);
  CHECK((step - res.x_hat).norm() <= 1e-4 * std::max(1.0, res.x_hat.norm()));
}

TEST_CASE("continuation ist recovers an easy sparse instance") {
  Rng rng(2010);
  const auto op =
      make_partial_dct(256, SamplingMask::sample_uniform_1d(256, 80, rng));
  const Eigen::VectorXd x_true = generate_sparse_signal(256, 6, 314);
  const SolverResult res =
      solve_ist(*op, op->apply(x_true), IstMode::continuation(), {});
  CHECK(res.status == SolverStatus::Converged);
  CHECK(relative_rmse(res.x_hat, x_true) < 1e-4);
}

TEST_CASE("amp recovers an easy sparse instance") {
  Rng rng(2011);
  const auto op =
      make_partial_dct(512, SamplingMask::sample_uniform_1d(512, 128, rng));
  const Eigen::VectorXd x_true = generate_sparse_signal(512, 6, 2718);
  const SolverResult res = solve_amp(*op, op->apply(x_true), {});
  CHECK(res.status == SolverStatus::Converged);
  CHECK(relative_rmse(res.x_hat, x_true) < 1e-4);
}

TEST_CASE("amp returns zero immediately for b = 0") {
  const auto op = make_row_orthonormal_gaussian(4, 16, 5);
  const SolverResult res = solve_amp(*op, Eigen::VectorXd::Zero(4), {});
  CHECK(res.status == SolverStatus::Converged);
  CHECK(res.outer_iters == 1);
  CHECK(res.x_hat.norm() == 0.0);
}

TEST_CASE("amp detects a stuck fixed point instead of spinning") {
  // With n <= 6 the dynamic threshold theta*s*||b||/sqrt(n) >= s*||b||
  // dominates every rescaled correlation s*|A'b|_i, so x stays at zero
  // forever (theta = 2.5 > sqrt(n); the column rescaling s cancels).
  Rng rng(2012);
  const auto op =
      make_partial_dct(16, SamplingMask::sample_uniform_1d(16, 4, rng));
  const Eigen::VectorXd b = random_vector(4, rng);
  const SolverResult res = solve_amp(*op, b, {});
  CHECK(res.status == SolverStatus::MaxIterations);
  CHECK(res.outer_iters == 1);
  CHECK(res.x_hat.norm() == 0.0);
  CHECK(res.operator_calls <= 6);
}

TEST_CASE("solvers reject b = 0, shape mismatches and bad operators") {
  const auto op = make_row_orthonormal_gaussian(6, 24, 44);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  const Eigen::VectorXd wrong = Eigen::VectorXd::Ones(7);
  const Eigen::VectorXd good = op->apply(generate_sparse_signal(24, 2, 45));

  CHECK_THROWS(solve_eone_l1(*op, zero, {}));
  CHECK_THROWS(solve_rone_l1(*op, zero, {}));
  CHECK_THROWS(solve_ist(*op, zero, IstMode::continuation(), {}));
  CHECK_THROWS(solve_eone_l1(*op, wrong, {}));
  CHECK_THROWS(solve_rone_l1(*op, wrong, {}));
  CHECK_THROWS(solve_amp(*op, wrong, {}));

  DenseMatrixOperator scaled(2.0 * op->matrix());
  CHECK_THROWS(solve_eone_l1(scaled, good, {}));
  CHECK_THROWS(solve_rone_l1(scaled, good, {}));
  CHECK_THROWS(solve_ist(scaled, good, IstMode::continuation(), {}));
  CHECK_THROWS(solve_amp(scaled, good, {}));
}

TEST_CASE("solver options are validated") {
  const auto op = make_row_orthonormal_gaussian(6, 24, 46);
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(24, 2, 47));
  SolverOptions opts;

  opts.tau = 0.0;
  CHECK_THROWS(solve_rone_l1(*op, b, opts));
  opts = {};
  opts.epsilon = -1.0;
  CHECK_THROWS(solve_rone_l1(*op, b, opts));
  opts = {};
  opts.schedule.r = 1.0;  // must exceed 1 when set
  CHECK_THROWS(solve_rone_l1(*op, b, opts));
  opts = {};
  opts.schedule.alpha = 1.0;
  CHECK_THROWS(solve_rone_l1(*op, b, opts));
  opts = {};
  opts.max_outer = 0;
  CHECK_THROWS(solve_rone_l1(*op, b, opts));
  opts = {};
  opts.amp_theta = 0.0;
  CHECK_THROWS(solve_amp(*op, b, opts));
  CHECK_THROWS(solve_ist(*op, b, IstMode::fixed_lambda(-0.1), {}));
}

TEST_CASE("noisy mode stops at the first feasible iterate") {
  Rng rng(2013);
  const int N = 128, n = 40;
  const auto op =
      make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd x_true = generate_sparse_signal(N, 4, 5050);
  const Eigen::VectorXd b_clean = op->apply(x_true);
  Eigen::VectorXd noise(n);
  Rng noise_rng(6060);
  for (int i = 0; i < n; ++i) noise[i] = 0.01 * noise_rng.normal();
  const Eigen::VectorXd b = b_clean + noise;
  const double eps = noise.norm();

  for (bool exact : {false, true}) {
    SolverOptions opts;
    opts.epsilon = eps;
    const SolverResult res = exact ? solve_eone_l1(*op, b, opts)
                                   : solve_rone_l1(*op, b, opts);
    CHECK(res.status == SolverStatus::Converged);
    const double gap = (op->apply(res.x_hat) - b).norm();
    CHECK(gap <= eps * (1.0 + 1e-9));
    // First-feasible semantics: every earlier iterate was infeasible.
    const double threshold = eps / b.norm();
    REQUIRE(!res.residual_history.empty());
    for (std::size_t i = 0; i + 1 < res.residual_history.size(); ++i) {
      CHECK(res.residual_history[i] > threshold);
    }
    CHECK(res.residual_history.back() <= threshold);
    // The noise is small, so the estimate stays near the true signal.
    CHECK(relative_rmse(res.x_hat, x_true) < 0.1);
  }
}

TEST_CASE("solvers are bitwise deterministic for a fixed instance") {
  const auto op = make_row_orthonormal_gaussian(10, 40, 404);
  const Eigen::VectorXd b = op->apply(generate_sparse_signal(40, 3, 405));
  const SolverResult a = solve_rone_l1(*op, b, {});
  const SolverResult c = solve_rone_l1(*op, b, {});
  CHECK(a.outer_iters == c.outer_iters);
  CHECK(a.operator_calls == c.operator_calls);
  CHECK((a.x_hat - c.x_hat).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.residual_history == c.residual_history);
}

TEST_CASE("bp_bruteforce_oracle recovers a sparse generator and validates") {
  const TinyInstance inst = make_tiny_instance(10, 5, 1, true, 8080);
  const Eigen::VectorXd oracle = bp_bruteforce_oracle(inst.A_dense, inst.b);
  CHECK(relative_rmse(oracle, inst.x_true) < 1e-8);

  CHECK_THROWS(bp_bruteforce_oracle(Eigen::MatrixXd::Random(5, 15),
                                    Eigen::VectorXd::Ones(5)));  // N > 14
  CHECK_THROWS(bp_bruteforce_oracle(Eigen::MatrixXd::Random(8, 14),
                                    Eigen::VectorXd::Ones(8)));  // n > 7
}

TEST_CASE("relative_rmse basics") {
  Eigen::VectorXd t(2), h(2);
  t << 3.0, 4.0;
  h << 3.0, 3.0;
  CHECK(relative_rmse(h, t) == doctest::Approx(1.0 / 5.0));
  CHECK_THROWS(relative_rmse(h, Eigen::VectorXd::Zero(2)));
  CHECK_THROWS(relative_rmse(h, Eigen::VectorXd::Ones(3)));
}

TEST_CASE("expanded reference solver is restricted to small N") {
  const auto op = make_row_orthonormal_gaussian(4, 80, 1);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(4);
  CHECK_THROWS(solve_rone_l1_expanded(op->matrix(), b, {}));
}
