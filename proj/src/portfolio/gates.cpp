#include <sstream>

#include "hornfolio/error.hpp"
#include "hornfolio/portfolio/portfolio.hpp"

namespace hornfolio::portfolio {

std::string_view to_string(OverflowOutcome outcome) {
  switch (outcome) {
    case OverflowOutcome::NoOverflow: return "NoOverflow";
    case OverflowOutcome::OverflowFound: return "OverflowFound";
    case OverflowOutcome::OverflowUnknown: return "OverflowUnknown";
  }
  return "?";
}

std::string_view to_string(ValidationOutcome outcome) {
  switch (outcome) {
    case ValidationOutcome::ExecOverflow: return "ExecOverflow";
    case ValidationOutcome::ExecCleanViolation: return "ExecCleanViolation";
    case ValidationOutcome::ValidationFailed: return "ValidationFailed";
  }
  return "?";
}

std::string_view to_string(ChcVerdict verdict) {
  switch (verdict) {
    case ChcVerdict::Sat: return "sat";
    case ChcVerdict::Unsat: return "unsat";
    case ChcVerdict::Unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::LIA: return "LIA";
    case Route::BV: return "BV";
    case Route::Core: return "Core";
  }
  return "?";
}

bool route_accepts(Route route, const chc::TheoryClass& theory) {
  using K = chc::TheoryClass::Kind;
  switch (route) {
    case Route::LIA: return theory.kind == K::LIA || theory.kind == K::Core;
    case Route::BV: return theory.kind == K::BV;
    case Route::Core: return theory.kind == K::Core;
  }
  return false;
}

OverflowOutcome overflow_outcome(const RunResult& r) {
  switch (r.verdict) {
    case Verdict::Safe: return OverflowOutcome::NoOverflow;
    case Verdict::Unsafe: return OverflowOutcome::OverflowFound;
    case Verdict::Unknown: break;
  }
  return OverflowOutcome::OverflowUnknown;
}

ValidationOutcome validation_outcome(const RunResult& r) {
  if (r.overflow_seen) return ValidationOutcome::ExecOverflow;
  if (r.verdict == Verdict::Unsafe) return ValidationOutcome::ExecCleanViolation;
  return ValidationOutcome::ValidationFailed;
}

namespace {

StageRecord record_of(const RunResult& reach) {
  StageRecord rec;
  rec.reach = reach.verdict;
  rec.actor = reach.actor;
  rec.witness = reach.witness.has_value();
  rec.reasons = reach.reasons;
  rec.wall_ms = reach.wall_ms;
  return rec;
}

}  // namespace

FinalResult gate_lia(const RunResult& reach, const OverflowFn& overflow_fn, const ValidateFn& validate_fn) {
  StageRecord rec = record_of(reach);
  rec.route = Route::LIA;
  if (reach.verdict == Verdict::Safe) {
    rec.overflow = overflow_fn();
    if (*rec.overflow == OverflowOutcome::NoOverflow) rec.verdict = ChcVerdict::Sat;
  } else if (reach.verdict == Verdict::Unsafe) {
    if (!reach.witness) {
      rec.note = "unsafe without witness";
    } else {
      rec.validation = validate_fn(*reach.witness);
      if (*rec.validation == ValidationOutcome::ExecCleanViolation) rec.verdict = ChcVerdict::Unsat;
    }
  }
  return {rec.verdict, {rec}};
}

FinalResult gate_bv(const RunResult& reach) {
  StageRecord rec = record_of(reach);
  rec.route = Route::BV;
  if (reach.verdict == Verdict::Safe) rec.verdict = ChcVerdict::Sat;
  if (reach.verdict == Verdict::Unsafe) rec.verdict = ChcVerdict::Unsat;
  return {rec.verdict, {rec}};
}

ChcVerdict replay_provenance(const std::vector<StageRecord>& records) {
  for (const auto& rec : records) {
    if (rec.skipped) continue;
    RunResult reach;
    reach.verdict = rec.reach;
    reach.reasons = rec.reasons;
    if (rec.witness) reach.witness = "logged";
    ChcVerdict v;
    if (rec.route == Route::BV) {
      v = gate_bv(reach).verdict;
    } else {
      v = gate_lia(
              reach, [&] { return rec.overflow.value_or(OverflowOutcome::OverflowUnknown); },
              [&](const std::string&) { return rec.validation.value_or(ValidationOutcome::ValidationFailed); })
              .verdict;
    }
    if (v != ChcVerdict::Unknown) return v;
  }
  return ChcVerdict::Unknown;
}

std::string StageRecord::to_line() const {
  std::ostringstream os;
  os << "stage=" << stage << " encoding=" << codegen::to_string(encoding) << " route=" << to_string(route)
     << " skipped=" << (skipped ? 1 : 0) << " reach=" << to_string(reach)
     << " actor=" << (actor.empty() ? "-" : actor) << " witness=" << (witness ? 1 : 0) << " reasons=";
  if (reasons.empty()) os << "-";
  bool first = true;
  for (auto r : reasons) {
    os << (first ? "" : ",") << to_string(r);
    first = false;
  }
  os << " overflow=" << (overflow ? to_string(*overflow) : "-")
     << " validation=" << (validation ? to_string(*validation) : "-") << " verdict=" << to_string(verdict)
     << " wall_ms=" << wall_ms;
  if (!note.empty()) os << " note=" << note;
  return os.str();
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const E (&all)[N]) {
  for (E e : all) {
    if (to_string(e) == text) return e;
  }
  throw Error(ErrorKind::ConfigError, "bad provenance value " + std::string(text));
}

}  // namespace

StageRecord StageRecord::from_line(std::string_view line) {
  StageRecord rec;
  if (const auto n = line.find(" note="); n != std::string_view::npos) {
    rec.note = std::string(line.substr(n + 6));
    line = line.substr(0, n);
  }
  std::istringstream in{std::string(line)};
  std::string field;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "bad provenance field " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "stage") {
      rec.stage = value;
    } else if (key == "encoding") {
      rec.encoding = parse_enum(value, {codegen::Encoding::Forward, codegen::Encoding::Backward});
    } else if (key == "route") {
      rec.route = parse_enum(value, {Route::LIA, Route::BV, Route::Core});
    } else if (key == "skipped") {
      rec.skipped = value == "1";
    } else if (key == "reach") {
      rec.reach = parse_enum(value, {Verdict::Safe, Verdict::Unsafe, Verdict::Unknown});
    } else if (key == "actor") {
      rec.actor = value == "-" ? "" : value;
    } else if (key == "witness") {
      rec.witness = value == "1";
    } else if (key == "reasons") {
      std::istringstream rs(value);
      std::string r;
      while (value != "-" && std::getline(rs, r, ',')) {
        rec.reasons.insert(parse_enum(r, {UnknownReason::Timeout, UnknownReason::ToolError,
                                          UnknownReason::AmbiguousOutput, UnknownReason::NoMatch}));
      }
    } else if (key == "overflow") {
      if (value != "-") {
        rec.overflow = parse_enum(value, {OverflowOutcome::NoOverflow, OverflowOutcome::OverflowFound,
                                          OverflowOutcome::OverflowUnknown});
      }
    } else if (key == "validation") {
      if (value != "-") {
        rec.validation = parse_enum(value, {ValidationOutcome::ExecOverflow, ValidationOutcome::ExecCleanViolation,
                                            ValidationOutcome::ValidationFailed});
      }
    } else if (key == "verdict") {
      rec.verdict = parse_enum(value, {ChcVerdict::Sat, ChcVerdict::Unsat, ChcVerdict::Unknown});
    } else if (key == "wall_ms") {
      rec.wall_ms = std::stoll(value);
    }
  }
  return rec;
}

}  // namespace hornfolio::portfolio
