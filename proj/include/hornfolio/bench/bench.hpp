#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hornfolio/portfolio/portfolio.hpp"

namespace hornfolio::bench {

using portfolio::ChcVerdict;

enum class Category { Confirmed, Unconfirmed, Wrong, NoVerdict };
std::string_view to_string(Category category);

/// unknown produced -> NoVerdict; unknown expected -> Unconfirmed;
/// agreement -> Confirmed; otherwise Wrong.
Category categorize(ChcVerdict produced, ChcVerdict expected);

/// Parses "sat", "unsat" or "unknown"; throws Error{ConfigError} otherwise.
ChcVerdict parse_verdict(std::string_view text);

/// `task,verdict` lines. Blank lines, `#` comments and a `task,verdict` header
/// are skipped. Throws Error{ConfigError} on duplicates or bad lines.
std::map<std::string, ChcVerdict> parse_expected(std::string_view text);
std::map<std::string, ChcVerdict> load_expected(const std::string& path);

struct TaskResult {
  std::string task;  // file stem
  ChcVerdict verdict = ChcVerdict::Unknown;
  Category category = Category::NoVerdict;
  std::int64_t wall_ms = 0;
};

struct SuiteOptions {
  portfolio::SolveOptions solve;  // per task; timeout is the per-task limit
  unsigned jobs = 1;              // tasks in flight
};

struct SuiteReport {
  std::vector<TaskResult> rows;  // sorted by task name
  std::vector<std::string> warnings;
};

/// Solves every .smt2 file in `tasks_dir`, each in its own scratch
/// subdirectory. Tasks without an expected entry count as NoVerdict and add a
/// warning; tasks that fail to parse produce unknown and a warning.
SuiteReport run_suite(const std::string& tasks_dir, const std::map<std::string, ChcVerdict>& expected,
                      const SuiteOptions& options);

/// Per-task CSV rows, then counts per verdict and category, then the corpus
/// size on an "Out of" line. Without timing the wall_ms column reads "-".
std::string format_report(const SuiteReport& report, bool timing = true);

}  // namespace hornfolio::bench
