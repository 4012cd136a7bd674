#pragma once

#include <stdexcept>

#include "config.hpp"

namespace onel1::cli {

// Documented exit codes (also in --help and the README).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // selftest check failed
inline constexpr int kExitUsage = 2;    // bad flags / config keys
inline constexpr int kExitInput = 3;    // unreadable or invalid input data
inline constexpr int kExitSolver = 4;   // solver raised an error
inline constexpr int kExitIo = 5;       // output could not be written

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executes the subcommand; returns kExitOk/kExitFailure, throws the error
// types above (and UsageError) for the caller to map to exit codes.
int run_command(const RunConfig& cfg);

}  // namespace onel1::cli
