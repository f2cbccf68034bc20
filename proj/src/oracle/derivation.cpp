#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hornfolio/error.hpp"
#include "hornfolio/oracle/oracle.hpp"

namespace hornfolio::oracle {

using chc::ChcSystem;
using chc::Rule;

namespace {

bool holds(const chc::Term& t, const Rule& r, const std::vector<Value>& a) {
  const auto v = chc::evaluate(t, r.vars, a);
  return v && *v != 0;
}

std::optional<Fact> apply(const chc::PredicateApp& app, const Rule& r, const std::vector<Value>& a) {
  Fact f{app.pred, {}};
  for (const auto& arg : app.args) {
    const auto v = chc::evaluate(arg, r.vars, a);
    if (!v) return std::nullopt;
    f.args.push_back(*v);
  }
  return f;
}

// Assignment in range, constraint true, every premise fact among `known`.
bool rule_fires(const ChcSystem& system, std::size_t rule, const std::vector<Value>& a,
                const std::vector<Fact>& known, const DomainSpec& dom) {
  if (rule >= system.rules.size()) return false;
  const Rule& r = system.rules[rule];
  if (a.size() != r.vars.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!dom.contains(r.vars[i].sort, a[i])) return false;
  }
  if (!holds(r.constraint, r, a)) return false;
  for (const auto& app : r.premise) {
    const auto f = apply(app, r, a);
    if (!f) return false;
    bool found = false;
    for (const auto& k : known) found = found || k == *f;
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool check_derivation(const ChcSystem& system, const Derivation& d, const DomainSpec& dom) {
  std::vector<Fact> known;
  for (const Step& s : d.steps) {
    if (!rule_fires(system, s.rule, s.assignment, known, dom)) return false;
    const Rule& r = system.rules[s.rule];
    if (!r.head) return false;
    const auto f = apply(*r.head, r, s.assignment);
    if (!f || *f != s.fact) return false;
    known.push_back(*f);
  }
  const auto& q = d.final_query;
  if (q.rule >= system.rules.size() || !system.rules[q.rule].is_query()) return false;
  return rule_fires(system, q.rule, q.assignment, known, dom);
}

std::vector<Value> replay_inputs(const ChcSystem& system, const Derivation& d) {
  if (chc::classify_linearity(system) != chc::Linearity::Linear) {
    throw Error(ErrorKind::ReplayUnsupported, "replay needs a linear system");
  }
  std::vector<Value> out;
  for (const Step& s : d.steps) {
    out.push_back(static_cast<Value>(s.rule));
    out.insert(out.end(), s.assignment.begin(), s.assignment.end());
  }
  out.push_back(static_cast<Value>(d.final_query.rule));
  out.insert(out.end(), d.final_query.assignment.begin(), d.final_query.assignment.end());
  return out;
}

std::string format_fact(const ChcSystem& system, const Fact& fact) {
  std::ostringstream os;
  os << system.decls.at(fact.pred).name << "(";
  for (std::size_t i = 0; i < fact.args.size(); ++i) os << (i ? ", " : "") << fact.args[i];
  os << ")";
  return os.str();
}

namespace {

std::string format_assignment(const Rule& r, const std::vector<Value>& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size() && i < r.vars.size(); ++i) {
    if (i) out += ", ";
    out += r.vars[i].name + "=" + std::to_string(a[i]);
  }
  return out + "}";
}

}  // namespace

std::string format_derivation(const ChcSystem& system, const Derivation& d) {
  std::ostringstream os;
  for (const Step& s : d.steps) {
    os << "rule " << s.rule << " " << format_assignment(system.rules.at(s.rule), s.assignment) << " => "
       << format_fact(system, s.fact) << "\n";
  }
  const auto& q = d.final_query;
  os << "rule " << q.rule << " " << format_assignment(system.rules.at(q.rule), q.assignment) << " => false\n";
  return os.str();
}

std::string derivation_to_json(const ChcSystem& system, const Derivation& d) {
  nlohmann::json steps = nlohmann::json::array();
  for (const Step& s : d.steps) {
    steps.push_back({{"rule", s.rule},
                     {"assignment", s.assignment},
                     {"fact", {{"pred", system.decls.at(s.fact.pred).name}, {"args", s.fact.args}}}});
  }
  nlohmann::json j = {{"steps", steps},
                      {"query", {{"rule", d.final_query.rule}, {"assignment", d.final_query.assignment}}}};
  return j.dump(1);
}

Derivation derivation_from_json(const ChcSystem& system, const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Derivation d;
    for (const auto& s : j.at("steps")) {
      Step step;
      step.rule = s.at("rule").get<std::size_t>();
      step.assignment = s.at("assignment").get<std::vector<Value>>();
      const auto name = s.at("fact").at("pred").get<std::string>();
      const auto pred = system.find_decl(name);
      if (!pred) throw std::invalid_argument("unknown predicate " + name);
      step.fact = {*pred, s.at("fact").at("args").get<std::vector<Value>>()};
      d.steps.push_back(std::move(step));
    }
    d.final_query.rule = j.at("query").at("rule").get<std::size_t>();
    d.final_query.assignment = j.at("query").at("assignment").get<std::vector<Value>>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed derivation: ") + e.what());
  }
}

}  // namespace hornfolio::oracle
