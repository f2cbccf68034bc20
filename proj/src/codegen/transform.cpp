#include <cstdio>
#include <map>
#include <set>

#include "hornfolio/chc/parser.hpp"
#include "hornfolio/codegen/codegen.hpp"
#include "hornfolio/error.hpp"

#ifndef HORNFOLIO_VERSION
#define HORNFOLIO_VERSION "dev"
#endif

namespace hornfolio::codegen {

using chc::ChcSystem;
using chc::Rule;
using chc::Sort;

namespace {

class Builder {
 public:
  Builder(const ChcSystem& system, const EmitOptions& opts, Encoding encoding)
      : system_(system), opts_(opts), encoding_(encoding) {
    for (const auto& d : system_.decls) {
      for (const auto& s : d.arg_sorts) map_sort(s, opts_);
    }
    for (const auto& r : system_.rules) {
      for (const auto& v : r.vars) map_sort(v.sort, opts_);
    }
  }

  std::string carrier(const Sort& s) { return map_sort(s, opts_).c_name; }

  // Nondet draw restricted to the sort's domain.
  CExprPtr draw(const Sort& s) {
    const std::string fn = nondet_function(s, opts_);
    nondets_.insert(fn);
    const CTypeSpec spec = map_sort(s, opts_);
    CExprPtr e = call(fn);
    if (spec.mask) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(*spec.mask));
      std::string lit = buf;
      if (s.is_bv() && s.width > 32) lit += "ull";
      else if (s.is_bv() && s.width > 16) lit += "u";
      e = binary("&", e, literal(lit));
    }
    return e;
  }

  CExprPtr selector_draw() {
    nondets_.insert("__VERIFIER_nondet_int");
    return call("__VERIFIER_nondet_int");
  }

  void declare_locals(const Rule& r, const std::set<std::string>& bound, Env& env, CBlock& out) {
    for (const auto& v : r.vars) {
      if (bound.count(v.name)) continue;
      const std::string name = variable_name(v.name);
      env[v.name] = name;
      out.push_back(decl(carrier(v.sort), name, draw(v.sort)));
    }
  }

  CBlock error_block() {
    CBlock out;
    out.push_back(label_stmt(std::string(kErrorLabel)));
    if (opts_.error_style == ErrorStyle::ReachError) {
      out.push_back(expr_stmt(call("reach_error")));
      out.push_back(expr_stmt(call("abort")));
    } else {
      out.push_back(return_stmt(literal("-1")));
    }
    return out;
  }

  CProgram finish(CUnit unit) {
    unit.header = {
        std::string("generated by hornfolio ") + HORNFOLIO_VERSION,
        "encoding: " + std::string(to_string(encoding_)),
        "theory: " + chc::to_string(system_.theory),
        "source: fnv1a64:" + digest(),
    };
    std::vector<std::string> nondet_decls;
    for (const auto& fn : nondets_) {
      nondet_decls.push_back("extern " + return_type(fn) + " " + fn + "(void);");
    }
    if (opts_.error_style == ErrorStyle::ReachError) {
      unit.externs.push_back("extern void abort(void);");
      unit.externs.push_back("extern void reach_error(void);");
    }
    unit.externs.insert(unit.externs.end(), nondet_decls.begin(), nondet_decls.end());
    for (auto& fn : unit.functions) silence_unused(fn);

    CProgram p;
    p.source = print_unit(unit);
    p.encoding = encoding_;
    p.recursive = encoding_ == Encoding::Backward;
    p.theory = system_.theory;
    p.error_symbol = opts_.error_style == ErrorStyle::ReachError ? "reach_error" : std::string(kErrorLabel);
    p.nondet_symbols = std::move(nondet_decls);
    p.unit = std::move(unit);
    return p;
  }

  const ChcSystem& system_;
  const EmitOptions& opts_;
  Encoding encoding_;

 private:
  static std::string return_type(const std::string& fn) {
    static const std::map<std::string, std::string> types = {
        {"__VERIFIER_nondet_int", "int"},
        {"__VERIFIER_nondet_long", "long"},
        {"__VERIFIER_nondet_longlong", "long long"},
        {"__VERIFIER_nondet_uchar", "unsigned char"},
        {"__VERIFIER_nondet_ushort", "unsigned short"},
        {"__VERIFIER_nondet_uint", "unsigned int"},
        {"__VERIFIER_nondet_ulonglong", "unsigned long long"},
    };
    return types.at(fn);
  }

  std::string digest() const {
    if (!opts_.source_digest.empty()) return opts_.source_digest;
    const std::uint64_t h = fnv1a64(chc::print_chc(system_));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  std::set<std::string> nondets_;
};

CExprPtr conjunction(std::vector<CExprPtr> parts) {
  if (parts.empty()) return nullptr;
  return nary("&&", std::move(parts));
}

std::string slot_name(const Sort& s, unsigned index) {
  std::string cls = s.is_bool() ? "bool" : s.is_int() ? "int" : "bv" + std::to_string(s.width);
  return "s_" + cls + "_" + std::to_string(index);
}

}  // namespace

CProgram transform_forward(const ChcSystem& input, const EmitOptions& opts) {
  if (chc::classify_linearity(input) != chc::Linearity::Linear) {
    throw Error(ErrorKind::ForwardRequiresLinear, "the forward encoding only handles linear systems");
  }
  const ChcSystem system = chc::normalize(input);
  Builder b(system, opts, Encoding::Forward);

  // Argument position i of a predicate maps to the slot of its sort whose index
  // counts earlier positions of the same sort.
  std::map<Sort, unsigned> slot_count;
  std::vector<std::vector<std::string>> slots(system.decls.size());
  for (std::size_t p = 0; p < system.decls.size(); ++p) {
    std::map<Sort, unsigned> seen;
    for (const auto& s : system.decls[p].arg_sorts) {
      const unsigned idx = seen[s]++;
      slots[p].push_back(slot_name(s, idx));
      slot_count[s] = std::max(slot_count[s], idx + 1);
    }
  }

  CFunction main_fn{"int", "main", {}, {}};
  main_fn.body.push_back(comment("0: no fact yet, k: current fact belongs to predicate k-1"));
  main_fn.body.push_back(decl("int", std::string(kPredicateVar), literal("0")));
  for (const auto& [sort, count] : slot_count) {
    for (unsigned i = 0; i < count; ++i) {
      main_fn.body.push_back(decl(b.carrier(sort), slot_name(sort, i), literal("0")));
    }
  }
  if (system.query_count() == 0) {
    main_fn.body.push_back(if_stmt(literal("0"), {goto_stmt(std::string(kErrorLabel))}));
  }

  CBlock cases;
  for (std::size_t ri = 0; ri < system.rules.size(); ++ri) {
    const Rule& r = system.rules[ri];
    Env env;
    CBlock body;
    b.declare_locals(r, {}, env, body);

    std::vector<CExprPtr> guard;
    if (!r.premise.empty()) {
      const auto& app = r.premise.front();
      guard.push_back(binary("==", ident(std::string(kPredicateVar)), literal(std::to_string(app.pred + 1))));
      for (std::size_t i = 0; i < app.args.size(); ++i) {
        guard.push_back(binary("==", ident(slots[app.pred][i]), lower_term(app.args[i], env, opts)));
      }
    } else if (r.head) {
      guard.push_back(binary("==", ident(std::string(kPredicateVar)), literal("0")));
    }
    if (!chc::is_true_literal(r.constraint)) {
      if (r.constraint->op == chc::Op::And) {
        for (const auto& c : r.constraint->args) guard.push_back(lower_term(c, env, opts));
      } else {
        guard.push_back(lower_term(r.constraint, env, opts));
      }
    }

    CBlock action;
    if (r.head) {
      action.push_back(assign(std::string(kPredicateVar), literal(std::to_string(r.head->pred + 1))));
      for (std::size_t i = 0; i < r.head->args.size(); ++i) {
        action.push_back(assign(slots[r.head->pred][i], lower_term(r.head->args[i], env, opts)));
      }
    } else {
      action.push_back(goto_stmt(std::string(kErrorLabel)));
    }
    if (auto cond = conjunction(std::move(guard))) {
      body.push_back(if_stmt(cond, std::move(action)));
    } else {
      body.insert(body.end(), action.begin(), action.end());
    }
    body.push_back(break_stmt());
    cases.push_back(case_stmt(static_cast<long long>(ri), std::move(body)));
  }
  cases.push_back(default_stmt({break_stmt()}));

  CBlock loop;
  loop.push_back(decl("int", std::string(kSelectorVar), b.selector_draw()));
  loop.push_back(switch_stmt(ident(std::string(kSelectorVar)), std::move(cases)));
  main_fn.body.push_back(while_stmt(literal("1"), std::move(loop)));
  for (auto& s : b.error_block()) main_fn.body.push_back(s);

  CUnit unit;
  unit.functions.push_back(std::move(main_fn));
  return b.finish(std::move(unit));
}

CProgram transform_backward(const ChcSystem& input, const EmitOptions& opts) {
  const ChcSystem system = chc::normalize(input);
  Builder b(system, opts, Encoding::Backward);

  std::vector<std::vector<std::string>> params(system.decls.size());
  for (std::size_t p = 0; p < system.decls.size(); ++p) {
    const auto& sorts = system.decls[p].arg_sorts;
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      std::optional<std::string> common;
      bool consistent = true;
      for (const auto& r : system.rules) {
        if (!r.head || r.head->pred != p) continue;
        const std::string& n = r.head->args[i]->name;
        if (common && *common != n) consistent = false;
        common = n;
      }
      params[p].push_back(consistent && common ? variable_name(*common) : "a" + std::to_string(i));
    }
  }

  auto rule_branch = [&](const Rule& r, Env env, const std::set<std::string>& bound, CStmtPtr on_success) {
    CBlock locals;
    b.declare_locals(r, bound, env, locals);
    std::vector<CExprPtr> conds;
    if (!chc::is_true_literal(r.constraint)) conds.push_back(lower_term(r.constraint, env, opts));
    for (const auto& app : r.premise) {
      std::vector<CExprPtr> args;
      for (const auto& a : app.args) args.push_back(lower_term(a, env, opts));
      conds.push_back(call(predicate_function(system.decls[app.pred].name), std::move(args)));
    }
    CStmtPtr test = conds.empty() ? on_success : if_stmt(conjunction(std::move(conds)), {on_success});
    if (locals.empty()) return test;
    locals.push_back(test);
    return block(std::move(locals));
  };

  CUnit unit;
  for (std::size_t p = 0; p < system.decls.size(); ++p) {
    CFunction fn{"int", predicate_function(system.decls[p].name), {}, {}};
    for (std::size_t i = 0; i < params[p].size(); ++i) {
      fn.params.emplace_back(b.carrier(system.decls[p].arg_sorts[i]), params[p][i]);
    }
    for (const auto& r : system.rules) {
      if (!r.head || r.head->pred != p) continue;
      Env env;
      std::set<std::string> bound;
      for (std::size_t i = 0; i < r.head->args.size(); ++i) {
        env[r.head->args[i]->name] = params[p][i];
        bound.insert(r.head->args[i]->name);
      }
      fn.body.push_back(rule_branch(r, env, bound, return_stmt(literal("1"))));
    }
    fn.body.push_back(return_stmt(literal("0")));
    unit.prototypes.push_back(CFunction{fn.return_type, fn.name, fn.params, {}});
    unit.functions.push_back(std::move(fn));
  }

  CFunction main_fn{"int", "main", {}, {}};
  if (system.query_count() == 0) {
    main_fn.body.push_back(if_stmt(literal("0"), {goto_stmt(std::string(kErrorLabel))}));
  }
  for (const auto& r : system.rules) {
    if (r.head) continue;
    main_fn.body.push_back(rule_branch(r, {}, {}, goto_stmt(std::string(kErrorLabel))));
  }
  main_fn.body.push_back(return_stmt(literal("0")));
  for (auto& s : b.error_block()) main_fn.body.push_back(s);
  unit.functions.push_back(std::move(main_fn));
  return b.finish(std::move(unit));
}

CProgram transform(const ChcSystem& system, Encoding encoding, const EmitOptions& opts) {
  return encoding == Encoding::Forward ? transform_forward(system, opts) : transform_backward(system, opts);
}

}  // namespace hornfolio::codegen
