#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gyro::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kValidation = 2,  // parse or validation failure
  kVerdict = 3,     // nonreciprocal / no resonance
  kNumerical = 4,
};

// Worker cap from GYRO_THREADS, else the hardware concurrency.
unsigned worker_threads();

// Runs the command line `args` (args[0] is the program name) and returns
// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gyro::cli
