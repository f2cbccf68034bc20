#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hornfolio/codegen/codegen.hpp"
#include "hornfolio/portfolio/actor.hpp"

namespace hornfolio::portfolio {

enum class OverflowOutcome { NoOverflow, OverflowFound, OverflowUnknown };
enum class ValidationOutcome { ExecOverflow, ExecCleanViolation, ValidationFailed };
enum class ChcVerdict { Sat, Unsat, Unknown };
enum class Route { LIA, BV, Core };

std::string_view to_string(OverflowOutcome outcome);
std::string_view to_string(ValidationOutcome outcome);
std::string_view to_string(ChcVerdict verdict);  // sat, unsat, unknown
std::string_view to_string(Route route);

/// True when a stage with this route may handle a system of this theory.
/// Core systems also run through LIA stages.
bool route_accepts(Route route, const chc::TheoryClass& theory);

struct Stage {
  std::string name;
  codegen::Encoding encoding = codegen::Encoding::Forward;
  Route route = Route::LIA;
  std::vector<Actor> reach;
  std::vector<Actor> overflow;     // LIA and Core only
  std::optional<Actor> validator;  // LIA and Core only
  double budget_fraction = 0.5;
};

struct PortfolioPlan {
  std::vector<Stage> stages;

  /// Throws Error{ConfigError} on an empty reach group, a fraction outside
  /// (0, 1], fractions summing above 1, or gate actors on the wrong route.
  void validate() const;
};

/// One line of provenance: what the stage ran and what the gate made of it.
struct StageRecord {
  std::string stage;
  codegen::Encoding encoding = codegen::Encoding::Forward;
  Route route = Route::LIA;
  bool skipped = false;
  Verdict reach = Verdict::Unknown;
  std::string actor;
  bool witness = false;
  std::set<UnknownReason> reasons;
  std::optional<OverflowOutcome> overflow;
  std::optional<ValidationOutcome> validation;
  ChcVerdict verdict = ChcVerdict::Unknown;
  std::int64_t wall_ms = 0;
  std::string note;

  /// Space-separated key=value fields; the note, if any, comes last.
  std::string to_line() const;
  static StageRecord from_line(std::string_view line);
};

struct FinalResult {
  ChcVerdict verdict = ChcVerdict::Unknown;
  std::vector<StageRecord> provenance;
};

using OverflowFn = std::function<OverflowOutcome()>;
using ValidateFn = std::function<ValidationOutcome(const std::string& witness)>;

/// LIA gate. A safe program only counts once the overflow group rules out
/// overflow; an unsafe one only once its witness replays without overflow.
/// The callbacks run only when the reach verdict needs them.
FinalResult gate_lia(const RunResult& reach, const OverflowFn& overflow_fn, const ValidateFn& validate_fn);

/// BV gate: Safe -> Sat, Unsafe -> Unsat, Unknown -> Unknown.
FinalResult gate_bv(const RunResult& reach);

/// Applies the gates again to logged stage outcomes; first definitive wins.
ChcVerdict replay_provenance(const std::vector<StageRecord>& records);

OverflowOutcome overflow_outcome(const RunResult& group_result);
ValidationOutcome validation_outcome(const RunResult& validator_result);

/// INI-style config. Sections `[reach NAME]`, `[overflow NAME]` and
/// `[validator NAME]` declare actors (keys: command or builtin, safe_pattern,
/// unsafe_pattern, overflow_pattern, wall_s, memory_mb). `[stage NAME]`
/// declares a stage in file order (keys: route, encoding, reach, overflow,
/// validator, budget). Throws Error{ConfigError} with the offending line.
PortfolioPlan load_config(std::string_view text);
PortfolioPlan load_config_file(const std::string& path);

/// The shipped default.portfolio.
std::string_view default_config_text();

/// Stages of `plan` whose route accepts `theory`, in order.
PortfolioPlan plan_for(const PortfolioPlan& plan, const chc::TheoryClass& theory);

/// default.portfolio filtered for the theory.
PortfolioPlan default_plan(const chc::TheoryClass& theory);

/// The same staging with builtin actors only: the oracle for reachability,
/// bool-only for overflow, replay-monitor for validation.
PortfolioPlan builtin_plan(const chc::TheoryClass& theory);

/// Keeps only stages with this encoding, rescaling their budget fractions so
/// the kept stages get the whole budget in their original proportions.
PortfolioPlan restrict_encoding(const PortfolioPlan& plan, codegen::Encoding encoding);

struct RunOptions {
  std::string scratch;  // created if missing
  unsigned jobs = 0;    // per group; 0 = all actors at once
  std::string int_c_type = "int";
  oracle::DomainSpec domain;
  const BuiltinRegistry* builtins = nullptr;
  std::stop_token stop;
  Duration grace{500};
};

/// Runs the stages in order and returns the first definitive verdict.
/// Scratch layout: stage<i>-<encoding>/task.c, one log and witness directory
/// per actor, and provenance.log with one line per stage.
/// Throws Error{PlanTheoryMismatch} when no stage routes the system's theory.
FinalResult run_portfolio(const chc::ChcSystem& system, const PortfolioPlan& plan, Duration total_budget,
                          const RunOptions& options);

struct SolveOptions {
  std::optional<std::string> config_path;  // default.portfolio when unset
  bool builtin_oracle = false;             // overrides config_path
  Duration timeout{60'000};
  std::optional<codegen::Encoding> encoding;  // unset: staged forward then backward
  unsigned jobs = 0;
  std::string scratch;
  oracle::DomainSpec domain;
};

FinalResult solve(const chc::ChcSystem& system, const SolveOptions& options);

}  // namespace hornfolio::portfolio
