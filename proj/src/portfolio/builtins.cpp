#include <climits>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hornfolio/chc/eval.hpp"
#include "hornfolio/portfolio/actor.hpp"

namespace hornfolio::portfolio {

namespace {

using Clock = std::chrono::steady_clock;

RunResult oracle_actor(const Actor& actor, const BuiltinRequest& req) {
  oracle::Limits limits;
  limits.should_stop = [&] { return req.stop.stop_requested() || Clock::now() >= req.deadline; };
  const auto v = oracle::saturate(*req.system, req.domain, limits);
  RunResult r;
  r.actor = actor.name;
  switch (v.kind) {
    case oracle::OracleVerdict::Kind::Sat:
      r.verdict = Verdict::Safe;
      break;
    case oracle::OracleVerdict::Kind::Unsat: {
      const auto path = (std::filesystem::path(req.witness_dir) / "derivation.json").string();
      std::ofstream(path) << oracle::derivation_to_json(*req.system, *v.derivation);
      r.verdict = Verdict::Unsafe;
      r.witness = path;
      break;
    }
    case oracle::OracleVerdict::Kind::Unknown:
      r.reasons.insert(limits.should_stop() ? UnknownReason::Timeout : UnknownReason::NoMatch);
      break;
  }
  return r;
}

// Evaluates every term the replayed run computes, watching Int subterms.
bool replay_overflows(const chc::ChcSystem& system, const oracle::Derivation& d, chc::IntRangeMonitor& monitor) {
  auto visit = [&](std::size_t rule_index, const std::vector<chc::Value>& a) {
    const chc::Rule& rule = system.rules[rule_index];
    for (std::size_t i = 0; i < rule.vars.size(); ++i) {
      if (rule.vars[i].sort.is_int() && (a[i] < monitor.lo || a[i] > monitor.hi)) monitor.violated = true;
    }
    auto eval = [&](const chc::Term& t) {
      if (!chc::evaluate(t, rule.vars, a, &monitor)) monitor.violated = true;
    };
    eval(rule.constraint);
    for (const auto& app : rule.premise) {
      for (const auto& t : app.args) eval(t);
    }
    if (rule.head) {
      for (const auto& t : rule.head->args) eval(t);
    }
  };
  for (const auto& s : d.steps) visit(s.rule, s.assignment);
  visit(d.final_query.rule, d.final_query.assignment);
  return monitor.violated;
}

RunResult replay_monitor(const Actor& actor, const BuiltinRequest& req) {
  RunResult r;
  r.actor = actor.name;
  if (!req.witness_file) {
    r.reasons.insert(UnknownReason::ToolError);
    return r;
  }
  std::ifstream in(*req.witness_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  oracle::Derivation d;
  try {
    d = oracle::derivation_from_json(*req.system, ss.str());
  } catch (const std::exception&) {
    r.reasons.insert(UnknownReason::NoMatch);
    return r;
  }
  if (!oracle::check_derivation(*req.system, d, req.domain)) {
    r.reasons.insert(UnknownReason::NoMatch);
    return r;
  }
  chc::IntRangeMonitor monitor;
  if (req.int_c_type != "int") {
    monitor.lo = LLONG_MIN;
    monitor.hi = LLONG_MAX;
  }
  r.verdict = Verdict::Unsafe;
  r.overflow_seen = replay_overflows(*req.system, d, monitor);
  return r;
}

RunResult bool_only(const Actor& actor, const BuiltinRequest& req) {
  RunResult r;
  r.actor = actor.name;
  if (chc::detect_theory(*req.system).kind == chc::TheoryClass::Kind::Core) {
    r.verdict = Verdict::Safe;
  } else {
    r.reasons.insert(UnknownReason::NoMatch);
  }
  return r;
}

}  // namespace

const BuiltinRegistry& default_builtins() {
  static const BuiltinRegistry registry = {
      {"oracle", oracle_actor},
      {"replay-monitor", replay_monitor},
      {"bool-only", bool_only},
  };
  return registry;
}

}  // namespace hornfolio::portfolio
