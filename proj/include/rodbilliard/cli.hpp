#pragma once

#include <iosfwd>
#include <string>

#include "rodbilliard/core.hpp"

namespace rodbilliard {

/// Process exit codes of the rodbill tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_unsupported = 2,
  exit_degenerate = 3,
  exit_oracle_mismatch = 4,
};

/// Parses "RE,IM" (surrounding spaces allowed). Throws DomainError.
Complex parse_complex(const std::string& text);

/// Entry point of the rodbill tool; argv[0] is the program name. Data goes to
/// `out` unless --out is given, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rodbilliard
