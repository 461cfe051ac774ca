#pragma once

// Config-driven scenarios: build a construction, verify it, write CSVs and
// a plain-text report under the configured output directory.

#include "collarext/config.hpp"

#include <string>
#include <vector>

namespace collarext {

struct VerdictLine {
  std::string source;  // module.operation that produced it
  std::string text;
  bool ok = true;
  std::string str() const;
};

struct RunReport {
  std::string kind;
  std::vector<std::string> echo;  // "section.key = value", sorted
  std::vector<VerdictLine> verdicts;
  std::vector<std::string> csv_files;
  std::string output_dir;
  double seconds = 0.0;

  bool failed() const;
};

/// Scenario kinds in the order they are documented.
const std::vector<std::string>& scenario_kinds();

/// Checks the kind, rejects unknown keys and validates every referenced
/// parameter without running anything. Throws UsageError.
void validate_scenario(const Config& cfg);

/// Validates, runs, writes <output>/report.txt plus the kind's CSV files.
/// Throws UsageError for configuration problems; construction and search
/// failures become failed verdict lines.
RunReport run_scenario(const Config& cfg);

/// 0 when every verdict holds, 1 otherwise.
int exit_code(const RunReport& r);

/// %.17g
std::string format_double(double v);

}  // namespace collarext
