#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "powerdist/io.hpp"

namespace powerdist::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotConverged = 2,
  kValidationFailed = 3,
};

struct SolveOptions {
  std::filesystem::path input;
  int k = 1;
  std::uint64_t seed = 0;
  int restarts = 1;
  int max_iterations = 300;
  std::optional<double> threshold;
  double scale = ScaledCostPolicy::kDefaultScale;
  bool lonlat = false;
  std::filesystem::path out;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool passed() const;
};

/// Re-verifies a result set: exact balance, power consistency at the
/// rounding tolerance, centroid condition, the side-count statistic and the
/// recorded cost.
ValidationReport validate_record(const io::RunRecord& record);

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);
int cmd_stats(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

/// Parses `argv` and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powerdist::cli
