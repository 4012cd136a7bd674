#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace onel1::cli {

enum class Command { Solve, PhaseTransition, Benchmark, ImageDemo, Selftest };

// Malformed flags, bad values, or unknown config-file keys. Exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All CLI state after defaults, config file, and flags have been merged
// (flags override file values override defaults). Numeric sentinels (0 or
// -1) mean "not set"; finalize_defaults() replaces them with the documented
// per-subcommand defaults.
struct RunConfig {
  Command command = Command::Selftest;

  std::vector<std::string> solvers;      // --solver (repeatable)
  std::string ensemble = "partial-dct";  // --ensemble
  double r = 0.0;                        // --r (0 = recommended value)
  double alpha = 0.99;                   // --alpha
  double tau = 1e-5;                     // --tau
  double tau1 = 1e-5;                    // --tau1
  double tau2 = 1e-6;                    // --tau2
  double epsilon = 0.0;                  // --epsilon (solve)
  double sigma = -1.0;                   // --sigma (image-demo; default 1)
  std::uint64_t seed = 0;                // --seed
  std::string out;                       // --out (default $ONEL1_OUT_DIR or .)
  std::string format = "csv";            // --format csv|json
  bool full_scale = false;               // --full-scale
  int threads = 0;                       // --threads (0 = hardware)
  std::string config_path;               // --config

  std::string b_path;                    // --b (solve)
  std::string mask_path;                 // --mask (solve)
  std::string x_out;                     // --x-out (solve)
  int big_n = 0;                         // --big-n (ambient dimension N)

  std::vector<double> deltas;            // --delta (repeatable)
  std::vector<double> rhos;              // --rho (repeatable)
  int trials = 0;                        // --trials
  std::string curve_path;                // --curve (phase-transition)

  std::string image_path;                // --image (image-demo)
  int n = 0;                             // --n (image-demo measurements)
  int levels = 4;                        // --levels (wavelet depth)
};

// Parses argv, applies any --config file (command-line flags win), fills the
// per-subcommand defaults, and validates. Returns nullopt when help was
// requested (caller exits 0). Throws UsageError otherwise.
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

// Key=value serialization of every option of the active subcommand, in a
// fixed order, reparseable through --config. parse -> serialize -> parse is
// the identity.
std::string serialize_config(const RunConfig& cfg);

}  // namespace onel1::cli
