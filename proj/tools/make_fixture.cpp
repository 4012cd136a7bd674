// Regenerates data/fixtures/solve_tiny: a 12-dimensional basis-pursuit
// instance (5 partial-DCT measurements, 2-sparse signal) whose expected
// solution is certified by the exhaustive brute-force oracle.
//
// Structured tiny systems often have non-unique l1 minimizers, so the
// generator scans seeds until it finds an instance where both iterative
// solvers (run at tight tolerances) land on the oracle point to 1e-10 —
// a practical uniqueness certificate. The chosen tolerances are recorded in
// the fixture comments; the CLI test replays them.
//
// Usage: onel1_make_fixture [output-dir]   (default data/fixtures/solve_tiny)

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "onel1/experiments.hpp"
#include "onel1/operators.hpp"
#include "onel1/records_io.hpp"
#include "onel1/rng.hpp"
#include "onel1/solvers.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data/fixtures/solve_tiny";

  const int N = 12;
  const int n = 5;
  const int k = 2;

  onel1::SolverOptions opts;
  opts.tau = 1e-9;
  opts.tau1 = 1e-9;
  opts.tau2 = 1e-11;

  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    onel1::Rng mask_rng(onel1::derive_seed(seed, {0}));
    const onel1::SamplingMask mask =
        onel1::SamplingMask::sample_uniform_1d(N, n, mask_rng);
    const auto op = onel1::make_partial_dct(N, mask);
    Eigen::MatrixXd A_dense(n, N);
    for (int j = 0; j < N; ++j) {
      A_dense.col(j) = op->apply(Eigen::VectorXd::Unit(N, j));
    }

    const Eigen::VectorXd x_true =
        onel1::generate_sparse_signal(N, k, onel1::derive_seed(seed, {1}));
    const Eigen::VectorXd b = op->apply(x_true);
    if (b.norm() == 0.0) continue;

    const Eigen::VectorXd x_star = onel1::bp_bruteforce_oracle(A_dense, b);
    if ((x_star - x_true).norm() > 1e-10) continue;  // recovery must be exact

    const Eigen::VectorXd x_exact = onel1::solve_eone_l1(*op, b, opts).x_hat;
    const Eigen::VectorXd x_relaxed = onel1::solve_rone_l1(*op, b, opts).x_hat;
    const double err_exact = (x_exact - x_star).norm();
    const double err_relaxed = (x_relaxed - x_star).norm();
    if (err_exact > 1e-10 || err_relaxed > 1e-10) continue;

    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& comment,
                     auto&& body) {
      std::ofstream out(dir + "/" + name, std::ios::trunc);
      if (!out) {
        std::cerr << "cannot write " << dir << "/" << name << "\n";
        std::exit(1);
      }
      out << "# " << comment << "\n";
      body(out);
    };

    write("mask.txt", "0-based DCT row indices, N = 12",
          [&](std::ostream& out) {
            for (int idx : mask.indices()) out << idx << "\n";
          });
    write("b.txt",
          "measurement vector (5 partial-DCT samples of a 2-sparse signal)",
          [&](std::ostream& out) {
            for (int i = 0; i < n; ++i) {
              out << onel1::format_double(b[i]) << "\n";
            }
          });
    write("expected_x.txt",
          "unique minimum-l1 solution, certified by the exhaustive oracle; "
          "solvers reproduce it to 1e-10 with --tau 1e-9 --tau1 1e-9 "
          "--tau2 1e-11",
          [&](std::ostream& out) {
            for (int i = 0; i < N; ++i) {
              out << onel1::format_double(x_star[i]) << "\n";
            }
          });

    std::cout << "wrote " << dir << " (seed " << seed
              << ", exact-solver error " << err_exact
              << ", relaxed-solver error " << err_relaxed << ")\n";
    return 0;
  }

  std::cerr << "no suitable instance found in 500 seeds\n";
  return 1;
}
