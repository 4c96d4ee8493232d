#pragma once

#include "galois/lab.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace galois {

enum ExitCode : int { exit_ok = 0, exit_discrepancy = 1, exit_usage = 2, exit_budget = 3 };

/// Runs one command; `args` excludes the program name. Results go to `out`
/// and are byte-stable; timing, cache notices and errors go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void write_report(std::ostream& out, const ClosureReport& report);

} // namespace galois
