#include "hornfolio/chc/system.hpp"

#include <algorithm>
#include <unordered_set>

#include "hornfolio/error.hpp"

namespace hornfolio::chc {

std::optional<std::size_t> Rule::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

TheoryClass TheoryClass::bv(std::set<unsigned> widths) {
  if (widths.empty()) {
    throw Error(ErrorKind::SortError, "bitvector theory without widths");
  }
  return {Kind::BV, std::move(widths)};
}

std::string to_string(const TheoryClass& theory) {
  switch (theory.kind) {
    case TheoryClass::Kind::Core: return "Core";
    case TheoryClass::Kind::LIA: return "LIA";
    case TheoryClass::Kind::BV: {
      std::string out = "BV(";
      bool first = true;
      for (unsigned w : theory.widths) {
        if (!first) out += ",";
        out += std::to_string(w);
        first = false;
      }
      return out + ")";
    }
  }
  return "?";
}

std::optional<std::size_t> ChcSystem::find_decl(std::string_view name) const {
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (decls[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ChcSystem::query_count() const {
  return static_cast<std::size_t>(
      std::count_if(rules.begin(), rules.end(), [](const Rule& r) { return r.is_query(); }));
}

std::string_view to_string(Linearity linearity) {
  return linearity == Linearity::Linear ? "linear" : "nonlinear";
}

Linearity classify_linearity(const ChcSystem& system) {
  for (const auto& rule : system.rules) {
    if (rule.premise.size() >= 2) return Linearity::NonLinear;
  }
  return Linearity::Linear;
}

namespace {

void scan_sort(const Sort& sort, bool& has_int, std::set<unsigned>& widths) {
  if (sort.is_int()) has_int = true;
  if (sort.is_bv()) widths.insert(sort.width);
}

void scan_term(const Term& term, bool& has_int, std::set<unsigned>& widths) {
  scan_sort(term->sort, has_int, widths);
  for (const auto& a : term->args) scan_term(a, has_int, widths);
}

}  // namespace

TheoryClass detect_theory(const ChcSystem& system) {
  bool has_int = false;
  std::set<unsigned> widths;
  for (const auto& decl : system.decls) {
    for (const auto& s : decl.arg_sorts) scan_sort(s, has_int, widths);
  }
  for (const auto& rule : system.rules) {
    for (const auto& v : rule.vars) scan_sort(v.sort, has_int, widths);
    scan_term(rule.constraint, has_int, widths);
    for (const auto& app : rule.premise) {
      for (const auto& a : app.args) scan_term(a, has_int, widths);
    }
    if (rule.head) {
      for (const auto& a : rule.head->args) scan_term(a, has_int, widths);
    }
  }
  if (has_int && !widths.empty()) {
    throw Error(ErrorKind::MixedTheory, "Int and BitVec sorts in one system");
  }
  if (!widths.empty()) return TheoryClass::bv(std::move(widths));
  if (has_int) return TheoryClass::lia();
  return TheoryClass::core();
}

namespace {

bool head_is_normal(const Rule& rule) {
  if (!rule.head) return true;
  std::unordered_set<std::string> seen;
  for (const auto& a : rule.head->args) {
    if (a->op != Op::Var || !seen.insert(a->name).second) return false;
  }
  return true;
}

std::string fresh_name(const Rule& rule, std::size_t& counter) {
  for (;;) {
    std::string candidate = "v!" + std::to_string(counter++);
    if (!rule.var_index(candidate)) return candidate;
  }
}

}  // namespace

bool is_normalized(const ChcSystem& system) {
  return std::all_of(system.rules.begin(), system.rules.end(), head_is_normal);
}

ChcSystem normalize(const ChcSystem& system) {
  ChcSystem out = system;
  for (auto& rule : out.rules) {
    if (head_is_normal(rule)) continue;
    std::vector<Term> conjuncts;
    if (rule.constraint->op == Op::And) {
      conjuncts = rule.constraint->args;
    } else {
      conjuncts.push_back(rule.constraint);
    }
    // Every argument of a non-normal head is replaced, so A(x, x) becomes
    // A(v!0, v!1) with v!0 = x and v!1 = x.
    std::size_t counter = 0;
    for (auto& arg : rule.head->args) {
      std::string name = fresh_name(rule, counter);
      Term fresh = var(name, arg->sort);
      rule.vars.push_back({name, arg->sort});
      conjuncts.push_back(make_app(Op::Eq, {fresh, arg}));
      arg = fresh;
    }
    rule.constraint = conjoin(std::move(conjuncts));
  }
  return out;
}

namespace {

void check_app(const ChcSystem& system, const PredicateApp& app) {
  if (app.pred >= system.decls.size()) {
    throw Error(ErrorKind::SortError, "application of undeclared predicate");
  }
  const auto& decl = system.decls[app.pred];
  if (app.args.size() != decl.arg_sorts.size()) {
    throw Error(ErrorKind::ArityError, decl.name + " expects " +
                                           std::to_string(decl.arg_sorts.size()) +
                                           " arguments, got " + std::to_string(app.args.size()));
  }
  for (std::size_t i = 0; i < app.args.size(); ++i) {
    check_well_sorted(app.args[i]);
    if (app.args[i]->sort != decl.arg_sorts[i]) {
      throw Error(ErrorKind::SortError, decl.name + " argument " + std::to_string(i) +
                                            " has sort " + to_string(app.args[i]->sort) +
                                            ", expected " + to_string(decl.arg_sorts[i]));
    }
  }
}

void check_vars_declared(const Rule& rule, const Term& term) {
  std::set<std::string> names;
  collect_vars(term, names);
  for (const auto& n : names) {
    auto idx = rule.var_index(n);
    if (!idx) throw Error(ErrorKind::SortError, "free variable " + n + " is not quantified");
  }
  // sorts of occurrences must match the binder
  if (term->op == Op::Var) {
    if (rule.vars[*rule.var_index(term->name)].sort != term->sort) {
      throw Error(ErrorKind::SortError, "variable " + term->name + " used at the wrong sort");
    }
    return;
  }
  for (const auto& a : term->args) check_vars_declared(rule, a);
}

}  // namespace

void validate(const ChcSystem& system) {
  std::unordered_set<std::string> names;
  for (const auto& decl : system.decls) {
    if (!names.insert(decl.name).second) {
      throw Error(ErrorKind::SortError, "predicate " + decl.name + " declared twice");
    }
  }
  for (const auto& rule : system.rules) {
    std::unordered_set<std::string> var_names;
    for (const auto& v : rule.vars) {
      if (!var_names.insert(v.name).second) {
        throw Error(ErrorKind::SortError, "variable " + v.name + " bound twice");
      }
    }
    check_well_sorted(rule.constraint);
    if (!rule.constraint->sort.is_bool()) {
      throw Error(ErrorKind::SortError, "rule constraint is not Bool");
    }
    check_vars_declared(rule, rule.constraint);
    for (const auto& app : rule.premise) {
      check_app(system, app);
      for (const auto& a : app.args) check_vars_declared(rule, a);
    }
    if (rule.head) {
      check_app(system, *rule.head);
      for (const auto& a : rule.head->args) check_vars_declared(rule, a);
    }
  }
}

namespace {

bool apps_equal(const PredicateApp& a, const PredicateApp& b) {
  if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const ChcSystem& a, const ChcSystem& b) {
  if (a.decls != b.decls || a.rules.size() != b.rules.size() || !(a.theory == b.theory)) {
    return false;
  }
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const Rule& ra = a.rules[i];
    const Rule& rb = b.rules[i];
    if (ra.vars != rb.vars || !structurally_equal(ra.constraint, rb.constraint) ||
        ra.premise.size() != rb.premise.size() || ra.head.has_value() != rb.head.has_value()) {
      return false;
    }
    for (std::size_t j = 0; j < ra.premise.size(); ++j) {
      if (!apps_equal(ra.premise[j], rb.premise[j])) return false;
    }
    if (ra.head && !apps_equal(*ra.head, *rb.head)) return false;
  }
  return true;
}

}  // namespace hornfolio::chc
