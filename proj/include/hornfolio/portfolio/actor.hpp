#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <vector>

#include "hornfolio/chc/system.hpp"
#include "hornfolio/oracle/oracle.hpp"

namespace hornfolio::portfolio {

using Duration = std::chrono::milliseconds;

enum class ActorKind { Reachability, Overflow, WitnessValidator, Builtin };
std::string_view to_string(ActorKind kind);

/// One tool invocation. Command placeholders: {input_file}, {witness_dir},
/// {timeout_s}, and {witness_file} (the witness handed to a validator).
/// Builtin actors name a registered backend instead of a command.
struct Actor {
  std::string name;
  ActorKind kind = ActorKind::Reachability;
  std::string command;
  std::string builtin;
  std::string safe_pattern;
  std::string unsafe_pattern;
  std::string overflow_pattern;  // validators: the replayed violation overflowed
  double wall_s = 0;             // 0: only the group budget applies
  std::uint64_t memory_mb = 0;   // advisory
};

enum class Verdict { Safe, Unsafe, Unknown };
enum class UnknownReason { Timeout, ToolError, AmbiguousOutput, NoMatch };
std::string_view to_string(Verdict verdict);
std::string_view to_string(UnknownReason reason);

struct RunResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<std::string> witness;  // Unsafe only; exists on disk
  std::set<UnknownReason> reasons;     // Unknown only
  bool overflow_seen = false;          // overflow_pattern matched
  std::string actor;
  std::int64_t wall_ms = 0;
  std::string log_path;

  static RunResult unknown(std::string actor, UnknownReason reason);
};

/// What a builtin backend gets to see.
struct BuiltinRequest {
  const chc::ChcSystem* system = nullptr;  // normalized
  std::string input_file;
  std::string witness_dir;
  std::optional<std::string> witness_file;
  std::string int_c_type = "int";
  oracle::DomainSpec domain;
  std::chrono::steady_clock::time_point deadline;
  std::stop_token stop;
};

using BuiltinFn = std::function<RunResult(const Actor&, const BuiltinRequest&)>;
using BuiltinRegistry = std::map<std::string, BuiltinFn>;

/// oracle: saturation as a reachability actor, writing the derivation as its
///   witness. replay-monitor: re-checks a derivation witness and reports an
///   overflow when an Int subterm leaves the range of the C integer type.
/// bool-only: overflow analysis that proves absence of overflow exactly for
///   Core systems.
const BuiltinRegistry& default_builtins();

struct RunContext {
  std::string witness_dir;  // created if missing
  std::string log_path;
  std::optional<std::string> witness_file;
  std::stop_token stop;
  const chc::ChcSystem* system = nullptr;
  const BuiltinRegistry* builtins = nullptr;
  std::string int_c_type = "int";
  oracle::DomainSpec domain;
  Duration grace{500};
};

/// Runs one actor to completion, budget expiry or stop request. Never throws
/// for actor misbehaviour; every failure is an Unknown with a reason.
RunResult run_actor(const Actor& actor, const std::string& input_file, Duration budget, const RunContext& ctx);

/// Starts the group concurrently (at most `jobs` at a time, 0 = all) and
/// returns the first Safe/Unsafe result, stopping the others. All-Unknown
/// groups return Unknown with the union of reasons. `ctx_for` supplies the
/// per-actor directories.
RunResult run_parallel(const std::vector<Actor>& group, const std::string& input_file, Duration budget,
                       const std::function<RunContext(const Actor&)>& ctx_for, unsigned jobs = 0,
                       std::stop_token stop = {});

/// Placeholder expansion with shell quoting of substituted values.
std::string expand_command(const std::string& tmpl, const std::map<std::string, std::string>& values);

}  // namespace hornfolio::portfolio
