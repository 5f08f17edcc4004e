#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qcomm/optimizer.hpp"

namespace qcomm::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

/// Parses `args` (without the program name) and runs one subcommand:
/// sweep, maximize, verify, witness, curves.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Round-trip formatting used for every numeric CSV/JSON field ("%.17g").
std::string format_real(double x);

/// CSV body for sweep rows, header included, LF line endings.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// QCOMM_THREADS if set to a positive integer, else hardware concurrency.
/// Throws std::invalid_argument for a malformed value.
int threads_from_env();

}  // namespace qcomm::cli
