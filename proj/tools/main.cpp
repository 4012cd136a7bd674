#include <exception>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace onel1::cli;
  try {
    const auto cfg = parse_config(argc, argv);
    if (!cfg) return kExitOk;  // help requested
    return run_command(*cfg);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n"
              << "run 'onel1 --help' for usage\n";
    return kExitUsage;
  } catch (const InputError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInput;
  } catch (const SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << "\n";
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
}
