#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hornfolio/chc/eval.hpp"
#include "hornfolio/chc/system.hpp"

namespace hornfolio::oracle {

using chc::Value;

/// Finite evaluation domain. Bitvectors up to bv_cap bits are enumerated in
/// full; wider ones only over [0, 2^bv_cap), which makes the domain incomplete.
struct DomainSpec {
  Value int_lo = -64;
  Value int_hi = 64;
  unsigned bv_cap = 8;

  /// Throws std::invalid_argument unless int_lo <= int_hi and bv_cap in [1, 16].
  void validate() const;
  /// True when every sort of the system is enumerated exhaustively.
  bool complete_for(const chc::ChcSystem& system) const;
  bool contains(const chc::Sort& sort, Value v) const;
};

struct Limits {
  std::size_t max_facts = 1'000'000;
  std::size_t max_steps = 10'000'000;
  /// Polled between rounds and inside long enumerations; true aborts with BoundExhausted.
  std::function<bool()> should_stop;
};

struct Fact {
  std::size_t pred = 0;
  std::vector<Value> args;

  friend bool operator==(const Fact&, const Fact&) = default;
  friend auto operator<=>(const Fact&, const Fact&) = default;
};

struct Step {
  std::size_t rule = 0;
  std::vector<Value> assignment;  // one value per rule.vars entry
  Fact fact;
};

struct QueryStep {
  std::size_t rule = 0;
  std::vector<Value> assignment;
};

/// Steps are ordered so every premise fact is derived before it is used.
struct Derivation {
  std::vector<Step> steps;
  QueryStep final_query;
};

enum class UnknownReason { BoundExhausted, IntDomainIncomplete };
std::string_view to_string(UnknownReason reason);

struct OracleVerdict {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Derivation> derivation;  // Unsat
  UnknownReason reason = UnknownReason::BoundExhausted;  // Unknown
  std::vector<Fact> facts;  // every derived fact, sorted; the model when Sat
  std::size_t steps = 0;    // evaluation steps spent
};
std::string_view to_string(OracleVerdict::Kind kind);

/// Serial evaluates one work item after another; Parallel spreads the work
/// items of a saturation round over OpenMP threads. Both yield identical results.
enum class ExecutionPolicy { Serial, Parallel };

/// Bottom-up semi-naive saturation. Each round first fires queries against the
/// facts that are new since the previous round, then derives the next round's
/// new facts. The system must be normalized (std::invalid_argument otherwise).
OracleVerdict saturate(const chc::ChcSystem& system, const DomainSpec& dom = {},
                       const Limits& limits = {}, ExecutionPolicy policy = ExecutionPolicy::Serial);

/// Re-evaluates every step with the reference term evaluator.
bool check_derivation(const chc::ChcSystem& system, const Derivation& d, const DomainSpec& dom = {});

/// Nondet values that drive the forward encoding of `system` along `d`: per
/// step the rule index followed by the rule's variable values, then the same
/// for the query. `d` must refer to the rules of normalize(system). Throws
/// Error{ReplayUnsupported} for non-linear systems.
std::vector<Value> replay_inputs(const chc::ChcSystem& system, const Derivation& d);

/// Human-readable dump, one line per step.
std::string format_derivation(const chc::ChcSystem& system, const Derivation& d);
std::string format_fact(const chc::ChcSystem& system, const Fact& fact);

/// JSON witness used to hand derivations between actors.
std::string derivation_to_json(const chc::ChcSystem& system, const Derivation& d);
/// Throws std::invalid_argument on malformed input.
Derivation derivation_from_json(const chc::ChcSystem& system, const std::string& text);

}  // namespace hornfolio::oracle
