#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace floquet::cli {

struct SelftestOptions {
  /// Rebuild F with one exponent moved to another log branch while keeping P;
  /// the Type II.b check must then report OracleMismatch.
  bool inject_branch_fault = false;
  /// Integrate with 16 steps per period so that tolerance checks fail.
  bool reduced_precision = false;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options);

/// One line per check; returns 0 if all passed and 1 otherwise.
int print_selftest(const std::vector<SelftestCheck>& checks, std::ostream& out);

}  // namespace floquet::cli
