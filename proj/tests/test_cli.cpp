#include "doctest.h"

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "onel1/image_io.hpp"
#include "onel1/operators.hpp"
#include "onel1/records_io.hpp"
#include "onel1/solvers.hpp"

using namespace onel1;
using onel1::cli::Command;
using onel1::cli::RunConfig;
using onel1::cli::UsageError;

namespace fs = std::filesystem;

namespace {

const std::string kSourceDir = ONEL1_SOURCE_DIR;
const std::string kCliPath = ONEL1_CLI_PATH;
const std::string kFixtureDir = kSourceDir + "/data/fixtures/solve_tiny";

std::optional<RunConfig> parse(std::vector<std::string> args) {
  args.insert(args.begin(), "onel1");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return onel1::cli::parse_config(static_cast<int>(argv.size()), argv.data());
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/onel1_cli_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("/tmp") / ("onel1_cli_out_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = kCliPath + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json read_json(const fs::path& path) {
  return nlohmann::json::parse(read_file(path));
}

// Values of a whitespace-separated numeric file, '#' comments skipped.
std::vector<double> read_values(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double v = 0.0;
    while (fields >> v) values.push_back(v);
  }
  return values;
}

TrialRecord sample_trial() {
  TrialRecord rec;
  rec.solver = "rone-l1";
  rec.ensemble = "partial-dct";
  rec.delta = 0.2;
  rec.rho = 1.0 / 3.0;
  rec.N = 1024;
  rec.n = 205;
  rec.k = 69;
  rec.seed = 18446744073709551615ull;
  rec.relative_rmse = 1.2345678901234567e-5;
  rec.success = true;
  rec.operator_calls = 4242;
  rec.outer_iters = 137;
  rec.wall_time_s = 0.03125;
  rec.status = "converged";
  rec.error = "";
  return rec;
}

}  // namespace

TEST_CASE("benchmark defaults match the documented desk-scale setup") {
  const auto cfg = parse({"benchmark"});
  REQUIRE(cfg.has_value());
  CHECK(cfg->command == Command::Benchmark);
  CHECK(cfg->solvers ==
        std::vector<std::string>{"eone-l1", "rone-l1", "ist", "amp"});
  CHECK(cfg->big_n == 4096);
  CHECK(cfg->deltas == std::vector<double>{0.2});
  CHECK(cfg->rhos == std::vector<double>{0.1, 0.22});
  CHECK(cfg->trials == 20);
  CHECK(cfg->ensemble == "partial-dct");
  CHECK(cfg->format == "csv");
  CHECK_FALSE(cfg->full_scale);

  const auto full = parse({"benchmark", "--full-scale"});
  REQUIRE(full.has_value());
  CHECK(full->big_n == 16384);
  CHECK(full->trials == 20);
}

TEST_CASE("phase-transition defaults cover the desk and full-scale grids") {
  const auto desk = parse({"phase-transition"});
  REQUIRE(desk.has_value());
  CHECK(desk->solvers == std::vector<std::string>{"rone-l1"});
  CHECK(desk->big_n == 1024);
  CHECK(desk->trials == 10);
  REQUIRE(desk->deltas.size() == 9);
  CHECK(desk->deltas.front() == doctest::Approx(0.1));
  CHECK(desk->deltas.back() == doctest::Approx(0.9));

  const auto full = parse({"phase-transition", "--full-scale"});
  REQUIRE(full.has_value());
  CHECK(full->trials == 20);
  REQUIRE(full->deltas.size() == 33);
  CHECK(full->deltas.front() == doctest::Approx(0.02));
  CHECK(full->deltas.back() == doctest::Approx(0.98));

  const auto gauss = parse({"phase-transition", "--ensemble", "gaussian"});
  REQUIRE(gauss.has_value());
  CHECK(gauss->big_n == 1000);
}

TEST_CASE("image-demo defaults") {
  const auto cfg = parse({"image-demo"});
  REQUIRE(cfg.has_value());
  CHECK(cfg->solvers == std::vector<std::string>{"rone-l1"});
  CHECK(cfg->n == 7419);
  CHECK(cfg->levels == 4);
  CHECK(cfg->sigma == 1.0);
  // --sigma 0 must survive finalization (0 is a meaningful noise level).
  const auto noiseless = parse({"image-demo", "--sigma", "0"});
  REQUIRE(noiseless.has_value());
  CHECK(noiseless->sigma == 0.0);
}

TEST_CASE("output directory falls back to ONEL1_OUT_DIR") {
  REQUIRE(setenv("ONEL1_OUT_DIR", "/tmp/onel1_envdir", 1) == 0);
  const auto cfg = parse({"benchmark"});
  REQUIRE(cfg.has_value());
  CHECK(cfg->out == "/tmp/onel1_envdir");

  const auto flag = parse({"benchmark", "--out", "/tmp/explicit"});
  REQUIRE(flag.has_value());
  CHECK(flag->out == "/tmp/explicit");

  REQUIRE(unsetenv("ONEL1_OUT_DIR") == 0);
  const auto bare = parse({"benchmark"});
  REQUIRE(bare.has_value());
  CHECK(bare->out == ".");
}

TEST_CASE("parse_config rejects malformed invocations") {
  CHECK_THROWS_AS((void)parse({}), UsageError);  // missing subcommand
  CHECK_THROWS_AS((void)parse({"frobnicate"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--bogus"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--r", "1.0"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--r", "0.5"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--alpha", "1"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--tau", "0"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--solver", "omp"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--ensemble", "fourier"}),
                  UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--delta", "0.1", "--delta",
                               "0.2"}),
                  UsageError);  // exactly one delta
  CHECK_THROWS_AS((void)parse({"benchmark", "--rho", "1.5"}), UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--threads", "-1"}), UsageError);
  CHECK_THROWS_AS((void)parse({"phase-transition", "--solver", "rone-l1",
                               "--solver", "amp"}),
                  UsageError);  // exactly one solver
  CHECK_THROWS_AS((void)parse({"phase-transition", "--trials", "0"}),
                  UsageError);
  CHECK_THROWS_AS((void)parse({"solve", "--big-n", "64"}),
                  UsageError);  // missing --b
  CHECK_THROWS_AS((void)parse({"solve", "--b", "b.txt"}),
                  UsageError);  // missing --big-n
  CHECK_THROWS_AS((void)parse({"image-demo", "--sigma", "-1"}), UsageError);
  CHECK_THROWS_AS((void)parse({"image-demo", "--levels", "-1"}), UsageError);
  // Flags from another subcommand are unknown here.
  CHECK_THROWS_AS((void)parse({"benchmark", "--sigma", "1"}), UsageError);
}

TEST_CASE("help returns nullopt instead of a config") {
  CHECK_FALSE(parse({"--help"}).has_value());
  CHECK_FALSE(parse({"benchmark", "--help"}).has_value());
}

TEST_CASE("config files merge under flags") {
  const std::string path = write_temp(
      "merge.cfg",
      "# comment line\n"
      "trials = 5\n"
      "big-n=256   # trailing comment\n"
      "solver = rone-l1, amp\n"
      "full-scale = false\n");
  const auto cfg =
      parse({"benchmark", "--config", path, "--trials", "7"});
  REQUIRE(cfg.has_value());
  CHECK(cfg->trials == 7);    // flag wins
  CHECK(cfg->big_n == 256);   // file value
  CHECK(cfg->solvers == std::vector<std::string>{"rone-l1", "amp"});
}

TEST_CASE("config files reject unknown or out-of-scope keys") {
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("unknown.cfg", "bogus=1\n")}),
      UsageError);
  // 'sigma' exists, but only for image-demo.
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("scope.cfg", "sigma=1\n")}),
      UsageError);
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("noeq.cfg", "trials 5\n")}),
      UsageError);
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("nest.cfg", "config=other.cfg\n")}),
      UsageError);
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("badbool.cfg", "full-scale=maybe\n")}),
      UsageError);
  CHECK_THROWS_AS(
      (void)parse({"benchmark", "--config",
                   write_temp("badnum.cfg", "trials=five\n")}),
      UsageError);
  CHECK_THROWS_AS((void)parse({"benchmark", "--config", "/nonexistent.cfg"}),
                  UsageError);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
  const auto first =
      parse({"benchmark", "--big-n", "256", "--trials", "3", "--delta", "0.3",
             "--rho", "0.1", "--rho", "0.22", "--seed", "99", "--solver",
             "rone-l1", "--solver", "amp", "--format", "json", "--r",
             "1.0199999999999999", "--out", "/tmp/rt"});
  REQUIRE(first.has_value());
  const std::string s1 = onel1::cli::serialize_config(*first);
  const std::string path = write_temp("roundtrip.cfg", s1);
  const auto second = parse({"benchmark", "--config", path});
  REQUIRE(second.has_value());
  CHECK(onel1::cli::serialize_config(*second) == s1);

  const auto img = parse({"image-demo", "--n", "400", "--sigma", "0.25",
                          "--levels", "3", "--seed", "4", "--out", "/tmp/rt"});
  REQUIRE(img.has_value());
  const std::string s2 = onel1::cli::serialize_config(*img);
  const auto img2 =
      parse({"image-demo", "--config", write_temp("roundtrip2.cfg", s2)});
  REQUIRE(img2.has_value());
  CHECK(onel1::cli::serialize_config(*img2) == s2);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v :
       {1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, 0.1 + 0.2,
        -123456.789, 0.0, 1.0}) {
    const std::string text = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(text.c_str(), &end);
    CHECK(back == v);
    CHECK(end == text.c_str() + text.size());
  }
  CHECK(std::signbit(std::strtod(format_double(-0.0).c_str(), nullptr)));
}

TEST_CASE("csv_escape implements RFC-4180 quoting") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("") == "");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line1\nline2") == "\"line1\nline2\"");
}

TEST_CASE("record_format_from_string") {
  CHECK(record_format_from_string("csv") == RecordFormat::Csv);
  CHECK(record_format_from_string("json") == RecordFormat::Json);
  CHECK(to_string(RecordFormat::Json) == "json");
  CHECK_THROWS(record_format_from_string("yaml"));
}

TEST_CASE("trial records survive a CSV round trip, quoting included") {
  TrialRecord plain = sample_trial();
  TrialRecord errored = sample_trial();
  errored.status = "error";
  errored.success = false;
  errored.relative_rmse = -1.0;
  errored.error = "solver: b = 0, \"quoted\",\nwith newline";

  std::ostringstream out;
  write_trial_records_csv(out, {plain, errored});
  const std::string text = out.str();
  CHECK(text.rfind("solver,ensemble,delta,rho,N,n,k,seed,relative_rmse,"
                   "success,operator_calls,outer_iters,wall_time_s,status,"
                   "error\n",
                   0) == 0);

  std::istringstream in(text);
  const std::vector<TrialRecord> back = read_trial_records_csv(in);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const TrialRecord& a = i == 0 ? plain : errored;
    const TrialRecord& b = back[i];
    CHECK(a.solver == b.solver);
    CHECK(a.ensemble == b.ensemble);
    CHECK(a.delta == b.delta);
    CHECK(a.rho == b.rho);  // exact: %.17g
    CHECK(a.N == b.N);
    CHECK(a.n == b.n);
    CHECK(a.k == b.k);
    CHECK(a.seed == b.seed);
    CHECK(a.relative_rmse == b.relative_rmse);
    CHECK(a.success == b.success);
    CHECK(a.operator_calls == b.operator_calls);
    CHECK(a.outer_iters == b.outer_iters);
    CHECK(a.wall_time_s == b.wall_time_s);
    CHECK(a.status == b.status);
    CHECK(a.error == b.error);
  }
}

TEST_CASE("trial records survive a JSON round trip") {
  TrialRecord rec = sample_trial();
  rec.error = "multi\nline, \"msg\"";
  std::ostringstream out;
  write_trial_records_json(out, {rec});
  std::istringstream in(out.str());
  const std::vector<TrialRecord> back = read_trial_records_json(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].solver == rec.solver);
  CHECK(back[0].rho == rec.rho);
  CHECK(back[0].seed == rec.seed);
  CHECK(back[0].success == rec.success);
  CHECK(back[0].error == rec.error);
  CHECK(back[0].wall_time_s == rec.wall_time_s);
}

TEST_CASE("empty record lists serialize to a bare header") {
  std::ostringstream out;
  write_trial_records_csv(out, {});
  CHECK(out.str() ==
        "solver,ensemble,delta,rho,N,n,k,seed,relative_rmse,success,"
        "operator_calls,outer_iters,wall_time_s,status,error\n");
  std::istringstream in(out.str());
  CHECK(read_trial_records_csv(in).empty());

  std::ostringstream bench;
  write_benchmark_records_csv(bench, {});
  CHECK(bench.str() ==
        "solver,delta,rho,N,n,k,trials,success_count,rmse_min,rmse_mean,"
        "rmse_max,calls_min,calls_mean,calls_max,time_min,time_mean,"
        "time_max\n");
}

TEST_CASE("csv readers reject the wrong header") {
  std::istringstream in("solver,oops\nrone-l1,1\n");
  CHECK_THROWS(read_trial_records_csv(in));
  std::istringstream in2("");
  CHECK_THROWS(read_trial_records_csv(in2));
}

TEST_CASE("benchmark records survive CSV and JSON round trips") {
  BenchmarkRecord rec;
  rec.solver = "eone-l1";
  rec.delta = 0.2;
  rec.rho = 0.22;
  rec.N = 4096;
  rec.n = 820;
  rec.k = 181;
  rec.trials = 20;
  rec.success_count = 19;
  rec.rmse_min = 1e-6;
  rec.rmse_mean = 2.5e-5;
  rec.rmse_max = 3.3e-4;
  rec.calls_min = 100;
  rec.calls_mean = 6297.25;
  rec.calls_max = 9038;
  rec.time_min = 0.5;
  rec.time_mean = 0.75;
  rec.time_max = 1.25;

  std::ostringstream out;
  write_benchmark_records_csv(out, {rec});
  std::istringstream in(out.str());
  const auto back = read_benchmark_records_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].solver == rec.solver);
  CHECK(back[0].calls_mean == rec.calls_mean);
  CHECK(back[0].success_count == rec.success_count);
  CHECK(back[0].time_max == rec.time_max);

  std::ostringstream jout;
  write_benchmark_records_json(jout, {rec});
  std::istringstream jin(jout.str());
  const auto jback = read_benchmark_records_json(jin);
  REQUIRE(jback.size() == 1);
  CHECK(jback[0].rmse_mean == rec.rmse_mean);
  CHECK(jback[0].N == rec.N);
}

TEST_CASE("pgm io round-trips integer images and parses both formats") {
  const Eigen::MatrixXd img =
      onel1::make_piecewise_constant_image(9, 13, 6, 77);
  std::ostringstream out(std::ios::binary);
  write_pgm(out, img);
  std::istringstream in(out.str());
  const Eigen::MatrixXd back = read_pgm(in);
  REQUIRE(back.rows() == 9);
  REQUIRE(back.cols() == 13);
  CHECK((back - img).lpNorm<Eigen::Infinity>() == 0.0);

  // Clamping and rounding on write.
  Eigen::MatrixXd weird(1, 3);
  weird << -5.0, 3.6, 300.0;
  std::ostringstream wout(std::ios::binary);
  write_pgm(wout, weird);
  std::istringstream win(wout.str());
  const Eigen::MatrixXd wback = read_pgm(win);
  CHECK(wback(0, 0) == 0.0);
  CHECK(wback(0, 1) == 4.0);
  CHECK(wback(0, 2) == 255.0);

  // ASCII P2 with comments.
  std::istringstream p2(
      "P2\n# a comment\n3 2\n255\n0 128 255\n1 2 3\n");
  const Eigen::MatrixXd ascii = read_pgm(p2);
  REQUIRE(ascii.rows() == 2);
  REQUIRE(ascii.cols() == 3);
  CHECK(ascii(0, 1) == 128.0);
  CHECK(ascii(1, 2) == 3.0);

  // Rescaled maxval stays raw (values are already in [0, maxval]).
  std::istringstream small("P2\n2 1\n15\n7 15\n");
  const Eigen::MatrixXd raw = read_pgm(small);
  CHECK(raw(0, 0) == 7.0);
}

TEST_CASE("pgm reader rejects malformed input") {
  std::istringstream bad_magic("P6\n2 2\n255\n....");
  CHECK_THROWS(read_pgm(bad_magic));
  std::istringstream big_maxval("P2\n1 1\n65535\n512\n");
  CHECK_THROWS(read_pgm(big_maxval));
  std::istringstream truncated("P5\n4 4\n255\nab");
  CHECK_THROWS(read_pgm(truncated));
  std::istringstream over("P2\n1 1\n15\n16\n");  // pixel above maxval
  CHECK_THROWS(read_pgm(over));
  std::istringstream zero_dim("P2\n0 2\n255\n");
  CHECK_THROWS(read_pgm(zero_dim));
  CHECK_THROWS(read_pgm("/nonexistent/image.pgm"));
}

TEST_CASE("bundled fixture truly is the minimum-l1 solution") {
  const std::vector<double> mask_raw = read_values(kFixtureDir + "/mask.txt");
  const std::vector<double> b_raw = read_values(kFixtureDir + "/b.txt");
  const std::vector<double> x_raw =
      read_values(kFixtureDir + "/expected_x.txt");
  REQUIRE(mask_raw.size() == 5);
  REQUIRE(b_raw.size() == 5);
  REQUIRE(x_raw.size() == 12);

  std::vector<int> indices;
  for (double m : mask_raw) indices.push_back(static_cast<int>(m));
  const auto op = make_partial_dct(12, SamplingMask::make_1d(12, indices));
  Eigen::VectorXd b(5);
  for (int i = 0; i < 5; ++i) b[i] = b_raw[i];
  Eigen::VectorXd expected(12);
  for (int i = 0; i < 12; ++i) expected[i] = x_raw[i];

  // The stored vector is consistent with the measurements...
  CHECK((op->apply(expected) - b).lpNorm<Eigen::Infinity>() < 1e-12);

  // ...and is the exhaustive-search minimum-l1 interpolant.
  Eigen::MatrixXd A(5, 12);
  for (int j = 0; j < 12; ++j) {
    A.col(j) = op->apply(Eigen::VectorXd::Unit(12, j));
  }
  const Eigen::VectorXd oracle = bp_bruteforce_oracle(A, b);
  CHECK((oracle - expected).lpNorm<Eigen::Infinity>() < 1e-10);

  // Both solvers reproduce it at the documented replay tolerances.
  SolverOptions tight;
  tight.tau = 1e-9;
  tight.tau1 = 1e-9;
  tight.tau2 = 1e-11;
  CHECK((solve_eone_l1(*op, b, tight).x_hat - expected)
            .lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((solve_rone_l1(*op, b, tight).x_hat - expected)
            .lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("cli selftest passes") {
  CHECK(run_cli("selftest") == 0);
}

TEST_CASE("cli solve reproduces the fixture end to end") {
  const fs::path dir = fresh_dir("solve");
  const int rc = run_cli(
      "solve --b " + kFixtureDir + "/b.txt --mask " + kFixtureDir +
      "/mask.txt --big-n 12 --solver eone-l1 --solver rone-l1 "
      "--tau 1e-9 --tau1 1e-9 --tau2 1e-11 --x-out " +
      (dir / "x.csv").string() + " --out " + dir.string());
  CHECK(rc == 0);

  const nlohmann::json doc = read_json(dir / "solve.json");
  CHECK(doc.at("command") == "solve");
  CHECK(doc.at("N") == 12);
  CHECK(doc.at("n") == 5);
  CHECK(doc.at("operator") == "partial-dct:mask-file");
  REQUIRE(doc.at("results").size() == 2);

  const std::vector<double> expected =
      read_values(kFixtureDir + "/expected_x.txt");
  for (const auto& result : doc.at("results")) {
    CHECK(result.at("status") == "converged");
    const auto x = result.at("x_hat").get<std::vector<double>>();
    REQUIRE(x.size() == expected.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::abs(x[i] - expected[i]) < 1e-8);
    }
    CHECK(result.at("final_relative_residual").get<double>() < 1e-9);
  }

  // Per-solver solution files with the solver name spliced in.
  const std::vector<double> x_eone = read_values(dir / "x_eone-l1.csv");
  const std::vector<double> x_rone = read_values(dir / "x_rone-l1.csv");
  REQUIRE(x_eone.size() == 12);
  REQUIRE(x_rone.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(std::abs(x_eone[i] - expected[i]) < 1e-8);
    CHECK(std::abs(x_rone[i] - expected[i]) < 1e-8);
  }
}

TEST_CASE("cli exit codes distinguish usage, input and solver failures") {
  CHECK(run_cli("") == 2);                       // missing subcommand
  CHECK(run_cli("solve") == 2);                  // missing required flags
  CHECK(run_cli("benchmark --bogus") == 2);
  CHECK(run_cli("benchmark --format xml") == 2);

  CHECK(run_cli("solve --b /nonexistent.txt --big-n 16") == 3);
  const std::string zeros = write_temp("zeros.txt", "0\n0\n0\n");
  CHECK(run_cli("solve --b " + zeros + " --big-n 16") == 3);

  const std::string b3 = write_temp("b3.txt", "1.0\n-0.5\n0.25\n");
  const std::string dup_mask = write_temp("dupmask.txt", "0\n0\n3\n");
  CHECK(run_cli("solve --b " + b3 + " --mask " + dup_mask + " --big-n 16") ==
        3);
  // Mask length must match b.
  const std::string short_mask = write_temp("shortmask.txt", "0\n3\n");
  CHECK(run_cli("solve --b " + b3 + " --mask " + short_mask +
                " --big-n 16") == 3);
  // b longer than the ambient dimension.
  CHECK(run_cli("solve --b " + b3 + " --big-n 2") == 3);
}

TEST_CASE("cli benchmark writes parseable records") {
  const fs::path dir = fresh_dir("bench");
  const int rc = run_cli(
      "benchmark --big-n 64 --delta 0.4 --rho 0.1 --trials 2 "
      "--solver rone-l1 --solver amp --seed 3 --threads 1 --out " +
      dir.string());
  CHECK(rc == 0);

  std::ifstream summary(dir / "benchmark_summary.csv");
  REQUIRE(summary.good());
  const auto records = read_benchmark_records_csv(summary);
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) {
    CHECK(rec.N == 64);
    CHECK(rec.n == 26);
    CHECK(rec.trials == 2);
  }

  std::ifstream trials(dir / "benchmark_trials.csv");
  REQUIRE(trials.good());
  CHECK(read_trial_records_csv(trials).size() == 4);

  // JSON variant.
  const fs::path jdir = fresh_dir("bench_json");
  CHECK(run_cli("benchmark --big-n 64 --delta 0.4 --rho 0.1 --trials 1 "
                "--solver rone-l1 --seed 3 --threads 1 --format json --out " +
                jdir.string()) == 0);
  std::ifstream jsummary(jdir / "benchmark_summary.json");
  REQUIRE(jsummary.good());
  CHECK(read_benchmark_records_json(jsummary).size() == 1);
}

TEST_CASE("cli phase-transition writes summary, cells and trials") {
  const fs::path dir = fresh_dir("phase");
  const int rc = run_cli(
      "phase-transition --big-n 48 --delta 0.4 --trials 2 --solver rone-l1 "
      "--seed 5 --threads 1 --out " +
      dir.string());
  CHECK(rc == 0);

  const std::string summary = read_file(dir / "phase_transition_summary.csv");
  CHECK(summary.rfind("delta,rho_ref,rho_hat,intercept,slope,degenerate,"
                      "trials\n",
                      0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 2);

  const std::string cells = read_file(dir / "phase_transition_cells.csv");
  CHECK(cells.rfind("delta,rho,successes,trials\n", 0) == 0);
  CHECK(std::count(cells.begin(), cells.end(), '\n') == 22);  // header + grid

  std::ifstream trials(dir / "phase_transition_trials.csv");
  REQUIRE(trials.good());
  CHECK(read_trial_records_csv(trials).size() == 21 * 2);
}

TEST_CASE("cli image-demo reconstructs a provided image") {
  const fs::path dir = fresh_dir("image");
  const Eigen::MatrixXd img =
      onel1::make_piecewise_constant_image(16, 16, 4, 11);
  write_pgm((dir / "input.pgm").string(), img);

  const int rc = run_cli(
      "image-demo --image " + (dir / "input.pgm").string() +
      " --n 200 --levels 2 --sigma 0.5 --seed 8 --out " + dir.string());
  CHECK(rc == 0);

  const nlohmann::json doc = read_json(dir / "image_demo.json");
  CHECK(doc.at("command") == "image-demo");
  CHECK(doc.at("rows") == 16);
  CHECK(doc.at("cols") == 16);
  CHECK(doc.at("n") == 200);
  CHECK(doc.at("sigma") == 0.5);
  CHECK(doc.at("epsilon").get<double>() > 0.0);
  CHECK(doc.at("relative_error").get<double>() < 0.5);

  const Eigen::MatrixXd recon =
      read_pgm((dir / "image_reconstruction.pgm").string());
  CHECK(recon.rows() == 16);
  CHECK(recon.cols() == 16);
  const Eigen::MatrixXd original =
      read_pgm((dir / "image_original.pgm").string());
  CHECK((original - img).lpNorm<Eigen::Infinity>() == 0.0);

  // A non-divisible wavelet depth is an input error (exit 3).
  CHECK(run_cli("image-demo --image " + (dir / "input.pgm").string() +
                " --n 200 --levels 5 --sigma 0.5 --out " + dir.string()) ==
        3);
}
