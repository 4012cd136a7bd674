#include "config.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "onel1/experiments.hpp"
#include "onel1/records_io.hpp"

namespace onel1::cli {

namespace {

constexpr unsigned kSolve = 1u << static_cast<int>(Command::Solve);
constexpr unsigned kPhase = 1u << static_cast<int>(Command::PhaseTransition);
constexpr unsigned kBench = 1u << static_cast<int>(Command::Benchmark);
constexpr unsigned kImage = 1u << static_cast<int>(Command::ImageDemo);
constexpr unsigned kSelf = 1u << static_cast<int>(Command::Selftest);
constexpr unsigned kAll = kSolve | kPhase | kBench | kImage | kSelf;

constexpr std::array<const char*, 5> kCommandNames = {
    "solve", "phase-transition", "benchmark", "image-demo", "selftest"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double_value(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw UsageError("config key '" + key + "': bad number '" + v + "'");
  }
  return out;
}

long long parse_int_value(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long long out = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw UsageError("config key '" + key + "': bad integer '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw UsageError("config key '" + key + "': bad integer '" + v + "'");
  }
  return out;
}

bool parse_bool_value(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError("config key '" + key + "': bad boolean '" + v +
                   "' (use true or false)");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(v);
  while (std::getline(stream, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split_list(v)) {
    out.push_back(parse_double_value(key, item));
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(',');
    out += items[i];
  }
  return out;
}

std::string join_doubles(const std::vector<double>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(',');
    out += format_double(items[i]);
  }
  return out;
}

// One CLI flag == one config-file key. `add` registers the flag on a
// subcommand; `apply` parses a config-file value into the config; `serialize`
// renders the current value (nullopt = omit the key).
struct KeySpec {
  const char* key;
  unsigned commands;
  std::function<CLI::Option*(CLI::App*, RunConfig&)> add;
  std::function<void(RunConfig&, const std::string&)> apply;
  std::function<std::optional<std::string>(const RunConfig&)> serialize;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"solver", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--solver", c.solvers,
                              "Solver: eone-l1|rone-l1|ist|amp (repeatable)");
       },
       [](RunConfig& c, const std::string& v) { c.solvers = split_list(v); },
       [](const RunConfig& c) -> std::optional<std::string> {
         return join_strings(c.solvers);
       }},
      {"ensemble", kSolve | kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--ensemble", c.ensemble,
                              "Measurement ensemble: partial-dct|gaussian");
       },
       [](RunConfig& c, const std::string& v) { c.ensemble = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         return c.ensemble;
       }},
      {"b", kSolve,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--b", c.b_path,
                              "Measurement vector file (one value per line)");
       },
       [](RunConfig& c, const std::string& v) { c.b_path = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.b_path.empty()) return std::nullopt;
         return c.b_path;
       }},
      {"mask", kSolve,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option(
             "--mask", c.mask_path,
             "Sampling-mask file (0-based DCT row indices, one per line)");
       },
       [](RunConfig& c, const std::string& v) { c.mask_path = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.mask_path.empty()) return std::nullopt;
         return c.mask_path;
       }},
      {"x-out", kSolve,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--x-out", c.x_out,
                              "Also write the solution vector(s) as CSV");
       },
       [](RunConfig& c, const std::string& v) { c.x_out = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.x_out.empty()) return std::nullopt;
         return c.x_out;
       }},
      {"big-n", kSolve | kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--big-n", c.big_n,
                              "Ambient dimension N of the sparse signal");
       },
       [](RunConfig& c, const std::string& v) {
         c.big_n = static_cast<int>(parse_int_value("big-n", v));
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.big_n);
       }},
      {"n", kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--n", c.n,
                              "Number of DCT measurements (default 7419)");
       },
       [](RunConfig& c, const std::string& v) {
         c.n = static_cast<int>(parse_int_value("n", v));
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.n);
       }},
      {"delta", kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--delta", c.deltas,
                              "Undersampling ratio n/N (repeatable)");
       },
       [](RunConfig& c, const std::string& v) {
         c.deltas = parse_double_list("delta", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return join_doubles(c.deltas);
       }},
      {"rho", kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--rho", c.rhos,
                              "Sparsity ratio k/n (repeatable)");
       },
       [](RunConfig& c, const std::string& v) {
         c.rhos = parse_double_list("rho", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return join_doubles(c.rhos);
       }},
      {"r", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option(
             "--r", c.r, "Continuation ratio mu_{t+1}/mu_t (0 = recommended)");
       },
       [](RunConfig& c, const std::string& v) {
         c.r = parse_double_value("r", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.r);
       }},
      {"alpha", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--alpha", c.alpha,
                              "Quantile level used to derive mu_0");
       },
       [](RunConfig& c, const std::string& v) {
         c.alpha = parse_double_value("alpha", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.alpha);
       }},
      {"tau", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--tau", c.tau,
                              "Relative-residual stop for one-loop solvers");
       },
       [](RunConfig& c, const std::string& v) {
         c.tau = parse_double_value("tau", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.tau);
       }},
      {"tau1", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--tau1", c.tau1,
                              "Outer relative-residual stop (exact solver)");
       },
       [](RunConfig& c, const std::string& v) {
         c.tau1 = parse_double_value("tau1", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.tau1);
       }},
      {"tau2", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--tau2", c.tau2,
                              "Inner relative-change stop (exact solver)");
       },
       [](RunConfig& c, const std::string& v) {
         c.tau2 = parse_double_value("tau2", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.tau2);
       }},
      {"epsilon", kSolve,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--epsilon", c.epsilon,
                              "Noise level: stop at ||Ax-b|| <= epsilon");
       },
       [](RunConfig& c, const std::string& v) {
         c.epsilon = parse_double_value("epsilon", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.epsilon);
       }},
      {"sigma", kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--sigma", c.sigma,
                              "Measurement noise std deviation (default 1)");
       },
       [](RunConfig& c, const std::string& v) {
         c.sigma = parse_double_value("sigma", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return format_double(c.sigma);
       }},
      {"trials", kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--trials", c.trials,
                              "Random problem instances per cell");
       },
       [](RunConfig& c, const std::string& v) {
         c.trials = static_cast<int>(parse_int_value("trials", v));
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.trials);
       }},
      {"seed", kAll,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--seed", c.seed, "Master seed");
       },
       [](RunConfig& c, const std::string& v) {
         c.seed = parse_u64_value("seed", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.seed);
       }},
      {"out", kSolve | kPhase | kBench | kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option(
             "--out", c.out,
             "Output directory (default $ONEL1_OUT_DIR, else .)");
       },
       [](RunConfig& c, const std::string& v) { c.out = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.out.empty()) return std::nullopt;
         return c.out;
       }},
      {"format", kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--format", c.format,
                              "Record file format: csv|json");
       },
       [](RunConfig& c, const std::string& v) { c.format = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         return c.format;
       }},
      {"full-scale", kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_flag("--full-scale", c.full_scale,
                            "Published-scale experiment sizes (slow)");
       },
       [](RunConfig& c, const std::string& v) {
         c.full_scale = parse_bool_value("full-scale", v);
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return c.full_scale ? "true" : "false";
       }},
      {"threads", kPhase | kBench,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--threads", c.threads,
                              "Worker threads (0 = hardware concurrency)");
       },
       [](RunConfig& c, const std::string& v) {
         c.threads = static_cast<int>(parse_int_value("threads", v));
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.threads);
       }},
      {"curve", kPhase,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--curve", c.curve_path,
                              "Reference transition-curve CSV "
                              "(default: built-in table)");
       },
       [](RunConfig& c, const std::string& v) { c.curve_path = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.curve_path.empty()) return std::nullopt;
         return c.curve_path;
       }},
      {"image", kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option(
             "--image", c.image_path,
             "Input PGM image (default: generated 256x256 blocks image)");
       },
       [](RunConfig& c, const std::string& v) { c.image_path = v; },
       [](const RunConfig& c) -> std::optional<std::string> {
         if (c.image_path.empty()) return std::nullopt;
         return c.image_path;
       }},
      {"levels", kImage,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--levels", c.levels,
                              "Wavelet decomposition depth");
       },
       [](RunConfig& c, const std::string& v) {
         c.levels = static_cast<int>(parse_int_value("levels", v));
       },
       [](const RunConfig& c) -> std::optional<std::string> {
         return std::to_string(c.levels);
       }},
      {"config", kAll,
       [](CLI::App* a, RunConfig& c) {
         return a->add_option("--config", c.config_path,
                              "Key=value config file (flags take precedence)");
       },
       [](RunConfig&, const std::string&) {
         throw UsageError("config files cannot nest 'config'");
       },
       [](const RunConfig&) -> std::optional<std::string> {
         return std::nullopt;
       }},
  };
  return table;
}

std::vector<std::pair<std::string, std::string>> load_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file '" + path + "'");
  }
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config file '" + path + "' line " +
                       std::to_string(lineno) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// Fills per-subcommand defaults for keys the user did not set explicitly
// (neither flag nor config file). Explicit values are left alone even when
// they equal a sentinel, so validate_config() can reject them honestly.
void finalize_defaults(RunConfig& cfg,
                       const std::set<std::string>& provided) {
  const auto unset = [&](const char* key) { return provided.count(key) == 0; };
  if (cfg.solvers.empty()) {
    if (cfg.command == Command::Benchmark) {
      cfg.solvers = {"eone-l1", "rone-l1", "ist", "amp"};
    } else {
      cfg.solvers = {"rone-l1"};
    }
  }
  if (unset("big-n")) {
    if (cfg.command == Command::PhaseTransition) {
      cfg.big_n = cfg.ensemble == "gaussian" ? 1000 : 1024;
    } else if (cfg.command == Command::Benchmark) {
      cfg.big_n = cfg.full_scale ? 16384 : 4096;
    }
  }
  if (cfg.deltas.empty()) {
    if (cfg.command == Command::PhaseTransition) {
      if (cfg.full_scale) {
        for (int j = 0; j < 33; ++j) cfg.deltas.push_back(0.02 + 0.03 * j);
      } else {
        for (int j = 1; j <= 9; ++j) cfg.deltas.push_back(0.1 * j);
      }
    } else if (cfg.command == Command::Benchmark) {
      cfg.deltas = {0.2};
    }
  }
  if (cfg.rhos.empty() && cfg.command == Command::Benchmark) {
    cfg.rhos = {0.1, 0.22};
  }
  if (unset("trials")) {
    if (cfg.command == Command::PhaseTransition) {
      cfg.trials = cfg.full_scale ? 20 : 10;
    } else if (cfg.command == Command::Benchmark) {
      cfg.trials = 20;
    }
  }
  if (unset("sigma") && cfg.command == Command::ImageDemo) cfg.sigma = 1.0;
  if (unset("n") && cfg.command == Command::ImageDemo) cfg.n = 7419;
  if (cfg.out.empty()) {
    const char* env = std::getenv("ONEL1_OUT_DIR");
    cfg.out = (env != nullptr && env[0] != '\0') ? env : ".";
  }
}

void validate_config(const RunConfig& cfg) {
  for (const std::string& name : cfg.solvers) {
    try {
      (void)solver_kind_from_string(name);
    } catch (const std::exception& err) {
      throw UsageError(err.what());
    }
  }
  const bool uses_ensemble =
      cfg.command == Command::PhaseTransition ||
      cfg.command == Command::Benchmark ||
      (cfg.command == Command::Solve && cfg.mask_path.empty());
  if (uses_ensemble) {
    try {
      (void)ensemble_from_string(cfg.ensemble);
    } catch (const std::exception& err) {
      throw UsageError(err.what());
    }
  }
  require(cfg.r == 0.0 || cfg.r > 1.0, "--r must exceed 1 (or 0 = automatic)");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "--alpha must lie in (0, 1)");
  require(cfg.tau > 0.0 && cfg.tau1 > 0.0 && cfg.tau2 > 0.0,
          "--tau, --tau1, --tau2 must be positive");
  require(cfg.epsilon >= 0.0, "--epsilon must be nonnegative");
  require(cfg.format == "csv" || cfg.format == "json",
          "--format must be csv or json");
  require(cfg.threads >= 0, "--threads must be nonnegative");
  for (double d : cfg.deltas) {
    require(d > 0.0 && d <= 1.0, "--delta values must lie in (0, 1]");
  }
  for (double rho : cfg.rhos) {
    require(rho > 0.0 && rho < 1.0, "--rho values must lie in (0, 1)");
  }

  switch (cfg.command) {
    case Command::Solve:
      require(!cfg.b_path.empty(), "solve requires --b <file>");
      require(cfg.big_n >= 1, "solve requires --big-n <N>");
      break;
    case Command::PhaseTransition:
      require(cfg.solvers.size() == 1,
              "phase-transition takes exactly one --solver");
      require(cfg.big_n >= 2, "--big-n must be at least 2");
      require(cfg.trials >= 1, "--trials must be at least 1");
      break;
    case Command::Benchmark:
      require(cfg.deltas.size() == 1, "benchmark takes exactly one --delta");
      require(cfg.big_n >= 2, "--big-n must be at least 2");
      require(cfg.trials >= 1, "--trials must be at least 1");
      break;
    case Command::ImageDemo:
      require(cfg.solvers.size() == 1,
              "image-demo takes exactly one --solver");
      require(cfg.n >= 1, "--n must be at least 1");
      require(cfg.levels >= 0, "--levels must be nonnegative");
      require(cfg.sigma >= 0.0, "--sigma must be nonnegative");
      break;
    case Command::Selftest:
      break;
  }
}

}  // namespace

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{
      "onel1: l1-minimization solvers (basis pursuit and its denoising "
      "variant) with orthonormal-expansion continuation, plus the "
      "reproduction experiment suite"};
  app.require_subcommand(1);

  std::array<CLI::App*, 5> subs{};
  subs[static_cast<int>(Command::Solve)] = app.add_subcommand(
      "solve", "Solve one instance from a measurement vector");
  subs[static_cast<int>(Command::PhaseTransition)] = app.add_subcommand(
      "phase-transition", "Monte Carlo phase-transition estimate");
  subs[static_cast<int>(Command::Benchmark)] = app.add_subcommand(
      "benchmark", "Solver comparison table on random instances");
  subs[static_cast<int>(Command::ImageDemo)] = app.add_subcommand(
      "image-demo", "Noisy compressed-sensing image reconstruction");
  subs[static_cast<int>(Command::Selftest)] = app.add_subcommand(
      "selftest", "Run the built-in oracle and invariant checks");

  // Option handle per (subcommand, key), used to give command-line flags
  // precedence over config-file values.
  std::array<std::map<std::string, CLI::Option*>, 5> options{};
  for (const KeySpec& spec : key_table()) {
    for (int c = 0; c < 5; ++c) {
      if (spec.commands & (1u << c)) {
        options[c][spec.key] = spec.add(subs[c], cfg);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    (void)app.exit(help);
    return std::nullopt;
  } catch (const CLI::ParseError& err) {
    throw UsageError(err.what());
  }

  for (int c = 0; c < 5; ++c) {
    if (subs[c]->parsed()) cfg.command = static_cast<Command>(c);
  }
  const int cmd = static_cast<int>(cfg.command);

  std::set<std::string> provided;
  for (const auto& [key, flag] : options[cmd]) {
    if (flag->count() > 0) provided.insert(key);
  }

  if (!cfg.config_path.empty()) {
    for (const auto& [key, value] : load_config_file(cfg.config_path)) {
      const KeySpec* spec = nullptr;
      for (const KeySpec& candidate : key_table()) {
        if (key == candidate.key) spec = &candidate;
      }
      if (spec == nullptr || !(spec->commands & (1u << cmd))) {
        throw UsageError("config key '" + key + "' is not valid for '" +
                         kCommandNames[cmd] + "'");
      }
      const CLI::Option* flag = options[cmd].at(key);
      // 'config' always routes to its apply handler (which rejects nesting);
      // the outer --config flag necessarily has a nonzero count here.
      if (key == "config" || flag->count() == 0) spec->apply(cfg, value);
      provided.insert(key);
    }
  }

  finalize_defaults(cfg, provided);
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  const int cmd = static_cast<int>(cfg.command);
  std::string out;
  for (const KeySpec& spec : key_table()) {
    if (!(spec.commands & (1u << cmd))) continue;
    if (const auto value = spec.serialize(cfg)) {
      out += spec.key;
      out.push_back('=');
      out += *value;
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace onel1::cli
