#include "hornfolio/chc/parser.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>

#include "hornfolio/error.hpp"
#include "sexpr.hpp"

namespace hornfolio::chc {

using detail::SExpr;

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what, const SExpr& at) {
  throw Error(kind, what + " at " + at.where());
}

// Let-bindings are parallel: values are expanded in the enclosing scope.
// Quantifier binders shadow outer let names.
SExpr expand_lets(const SExpr& e, const std::map<std::string, SExpr>& env) {
  if (e.kind == SExpr::Kind::Symbol) {
    auto it = env.find(e.text);
    return it == env.end() ? e : it->second;
  }
  if (!e.is_list() || e.items.empty() || e.is_app("_")) return e;
  if (e.is_app("let")) {
    if (e.items.size() != 3 || !e.items[1].is_list()) fail(ErrorKind::SyntaxError, "malformed let", e);
    std::map<std::string, SExpr> inner = env;
    for (const auto& binding : e.items[1].items) {
      if (!binding.is_list() || binding.items.size() != 2 ||
          binding.items[0].kind != SExpr::Kind::Symbol) {
        fail(ErrorKind::SyntaxError, "malformed let binding", binding);
      }
      inner[binding.items[0].text] = expand_lets(binding.items[1], env);
    }
    return expand_lets(e.items[2], inner);
  }
  if (e.is_app("forall") || e.is_app("exists")) {
    if (e.items.size() != 3 || !e.items[1].is_list()) {
      fail(ErrorKind::SyntaxError, "malformed quantifier", e);
    }
    std::map<std::string, SExpr> inner = env;
    for (const auto& binder : e.items[1].items) {
      if (binder.is_list() && !binder.items.empty()) inner.erase(binder.items[0].text);
    }
    SExpr out = e;
    out.items[2] = expand_lets(e.items[2], inner);
    return out;
  }
  SExpr out = e;
  for (auto& item : out.items) item = expand_lets(item, env);
  return out;
}

BigInt parse_numeral(const std::string& digits) { return BigInt(digits); }

unsigned parse_index(const SExpr& e) {
  if (e.kind != SExpr::Kind::Numeral || e.text.size() > 9) {
    fail(ErrorKind::SyntaxError, "expected a small numeral index", e);
  }
  return static_cast<unsigned>(std::stoul(e.text));
}

const std::unordered_map<std::string, Op>& operator_table() {
  static const std::unordered_map<std::string, Op> table = {
      {"and", Op::And},       {"or", Op::Or},         {"not", Op::Not},
      {"=>", Op::Implies},    {"ite", Op::Ite},       {"=", Op::Eq},
      {"+", Op::Add},         {"-", Op::Sub},         {"*", Op::Mul},
      {"<", Op::Lt},          {"<=", Op::Le},         {">", Op::Gt},
      {">=", Op::Ge},         {"bvadd", Op::BvAdd},   {"bvsub", Op::BvSub},
      {"bvmul", Op::BvMul},   {"bvneg", Op::BvNeg},   {"bvand", Op::BvAnd},
      {"bvor", Op::BvOr},     {"bvxor", Op::BvXor},   {"bvnot", Op::BvNot},
      {"bvshl", Op::BvShl},   {"bvlshr", Op::BvLshr}, {"bvashr", Op::BvAshr},
      {"bvult", Op::BvUlt},   {"bvule", Op::BvUle},   {"bvugt", Op::BvUgt},
      {"bvuge", Op::BvUge},   {"bvslt", Op::BvSlt},   {"bvsle", Op::BvSle},
      {"bvsgt", Op::BvSgt},   {"bvsge", Op::BvSge},   {"concat", Op::Concat},
  };
  return table;
}

bool is_chainable(Op op) {
  return op == Op::Eq || op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge;
}

bool is_left_assoc_binary(Op op) {
  return op == Op::BvAdd || op == Op::BvMul || op == Op::BvAnd || op == Op::BvOr ||
         op == Op::BvXor || op == Op::Concat;
}

class Parser {
 public:
  ChcSystem run(std::string_view text) {
    for (const auto& cmd : detail::read_all(text)) {
      if (done_) break;
      command(cmd);
    }
    system_.theory = detect_theory(system_);
    validate(system_);
    return std::move(system_);
  }

 private:
  using Scope = std::unordered_map<std::string, Term>;

  void command(const SExpr& cmd) {
    if (!cmd.is_list() || cmd.items.empty() || cmd.items[0].kind != SExpr::Kind::Symbol) {
      fail(ErrorKind::SyntaxError, "expected a command", cmd);
    }
    const std::string& name = cmd.items[0].text;
    if (name == "set-logic") {
      if (cmd.items.size() != 2 || cmd.items[1].kind != SExpr::Kind::Symbol) {
        fail(ErrorKind::SyntaxError, "malformed set-logic", cmd);
      }
      if (cmd.items[1].text != "HORN") {
        fail(ErrorKind::UnsupportedFeature, "logic " + cmd.items[1].text, cmd);
      }
    } else if (name == "set-info" || name == "set-option") {
      // metadata only
    } else if (name == "declare-fun") {
      declare_fun(cmd);
    } else if (name == "assert") {
      if (cmd.items.size() != 2) fail(ErrorKind::SyntaxError, "assert takes one term", cmd);
      add_clause(cmd.items[1]);
    } else if (name == "check-sat") {
    } else if (name == "exit") {
      done_ = true;
    } else if (name == "declare-datatypes" || name == "declare-datatype" ||
               name == "declare-sort") {
      fail(ErrorKind::UnsupportedFeature, "algebraic data types", cmd);
    } else {
      fail(ErrorKind::UnsupportedFeature, "command " + name, cmd);
    }
  }

  Sort parse_sort(const SExpr& e) {
    if (e.is_symbol("Bool")) return Sort::boolean();
    if (e.is_symbol("Int")) return Sort::integer();
    if (e.is_symbol("Real")) fail(ErrorKind::UnsupportedFeature, "real arithmetic", e);
    if (e.is_app("Array")) fail(ErrorKind::UnsupportedFeature, "arrays", e);
    if (e.is_app("_") && e.items.size() == 3 && e.items[1].is_symbol("BitVec")) {
      const unsigned width = parse_index(e.items[2]);
      if (width == 0) fail(ErrorKind::SortError, "zero-width bitvector sort", e);
      return Sort::bitvec(width);
    }
    if (e.kind == SExpr::Kind::Symbol) {
      fail(ErrorKind::UnsupportedFeature, "algebraic data types (sort " + e.text + ")", e);
    }
    fail(ErrorKind::UnsupportedFeature, "sort expression", e);
  }

  void declare_fun(const SExpr& cmd) {
    if (cmd.items.size() != 4 || cmd.items[1].kind != SExpr::Kind::Symbol ||
        !cmd.items[2].is_list()) {
      fail(ErrorKind::SyntaxError, "malformed declare-fun", cmd);
    }
    PredicateDecl decl;
    decl.name = cmd.items[1].text;
    for (const auto& s : cmd.items[2].items) decl.arg_sorts.push_back(parse_sort(s));
    if (parse_sort(cmd.items[3]) != Sort::boolean()) {
      fail(ErrorKind::UnsupportedFeature, "declare-fun " + decl.name + " with non-Bool result",
           cmd);
    }
    if (system_.find_decl(decl.name)) {
      fail(ErrorKind::SortError, "predicate " + decl.name + " declared twice", cmd);
    }
    system_.decls.push_back(std::move(decl));
  }

  // --- clauses -------------------------------------------------------------

  void add_clause(const SExpr& raw) {
    SExpr e = expand_lets(raw, {});
    Rule rule;
    Scope scope;
    while (e.is_app("forall")) {
      for (const auto& binder : e.items[1].items) {
        if (!binder.is_list() || binder.items.size() != 2 ||
            binder.items[0].kind != SExpr::Kind::Symbol) {
          fail(ErrorKind::SyntaxError, "malformed binder", binder);
        }
        const std::string& name = binder.items[0].text;
        if (scope.count(name)) fail(ErrorKind::SortError, "variable " + name + " bound twice", binder);
        Sort sort = parse_sort(binder.items[1]);
        rule.vars.push_back({name, sort});
        scope.emplace(name, var(name, sort));
      }
      SExpr body = e.items[2];
      e = std::move(body);
    }
    if (e.is_app("exists")) fail(ErrorKind::UnsupportedFeature, "quantifier alternation", e);

    std::optional<SExpr> body;
    SExpr head = e;
    if (e.is_app("=>")) {
      if (e.items.size() < 3) fail(ErrorKind::ArityError, "=> expects at least 2 operands", e);
      head = e.items.back();
      if (e.items.size() == 3) {
        body = e.items[1];
      } else {
        SExpr conj;
        conj.kind = SExpr::Kind::List;
        conj.line = e.line;
        conj.column = e.column;
        SExpr and_symbol;
        and_symbol.kind = SExpr::Kind::Symbol;
        and_symbol.text = "and";
        conj.items.push_back(and_symbol);
        conj.items.insert(conj.items.end(), e.items.begin() + 1, e.items.end() - 1);
        body = std::move(conj);
      }
    } else if (e.is_app("not") && e.items.size() == 2) {
      body = e.items[1];
      head = SExpr{SExpr::Kind::Symbol, "false", {}, e.line, e.column};
    }

    if (head.is_symbol("false") && !scope.count("false")) {
      rule.head.reset();
    } else if (auto app = as_predicate_app(head, scope)) {
      rule.head = std::move(*app);
    } else {
      fail(ErrorKind::UnsupportedFeature,
           "non-Horn shape: head must be a predicate application or false", head);
    }

    std::vector<Term> constraint;
    if (body) split_body(*body, scope, constraint, rule.premise);
    rule.constraint = conjoin(std::move(constraint));
    system_.rules.push_back(std::move(rule));
  }

  void split_body(const SExpr& e, const Scope& scope, std::vector<Term>& constraint,
                  std::vector<PredicateApp>& premise) {
    if (e.is_app("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        split_body(e.items[i], scope, constraint, premise);
      }
      return;
    }
    if (auto app = as_predicate_app(e, scope)) {
      premise.push_back(std::move(*app));
      return;
    }
    Term t = to_term(e, scope);
    if (!t->sort.is_bool()) fail(ErrorKind::SortError, "body conjunct is not Bool", e);
    constraint.push_back(std::move(t));
  }

  std::optional<std::size_t> predicate_named(const SExpr& e, const Scope& scope) const {
    if (e.kind != SExpr::Kind::Symbol || scope.count(e.text)) return std::nullopt;
    return system_.find_decl(e.text);
  }

  std::optional<PredicateApp> as_predicate_app(const SExpr& e, const Scope& scope) {
    std::optional<std::size_t> pred;
    std::vector<SExpr> arg_exprs;
    if (e.kind == SExpr::Kind::Symbol) {
      pred = predicate_named(e, scope);
    } else if (e.is_list() && !e.items.empty()) {
      pred = predicate_named(e.items[0], scope);
      if (pred) arg_exprs.assign(e.items.begin() + 1, e.items.end());
    }
    if (!pred) return std::nullopt;
    const PredicateDecl& decl = system_.decls[*pred];
    if (arg_exprs.size() != decl.arg_sorts.size()) {
      fail(ErrorKind::ArityError,
           decl.name + " expects " + std::to_string(decl.arg_sorts.size()) + " arguments, got " +
               std::to_string(arg_exprs.size()),
           e);
    }
    PredicateApp app;
    app.pred = *pred;
    for (std::size_t i = 0; i < arg_exprs.size(); ++i) {
      Term t = to_term(arg_exprs[i], scope);
      if (t->sort != decl.arg_sorts[i]) {
        fail(ErrorKind::SortError,
             decl.name + " argument " + std::to_string(i) + " has sort " + to_string(t->sort) +
                 ", expected " + to_string(decl.arg_sorts[i]),
             arg_exprs[i]);
      }
      app.args.push_back(std::move(t));
    }
    return app;
  }

  // --- terms ---------------------------------------------------------------

  Term to_term(const SExpr& e, const Scope& scope) {
    try {
      return to_term_unchecked(e, scope);
    } catch (const Error& err) {
      // attach the innermost position once
      if (err.message().find(" at ") != std::string::npos) throw;
      throw Error(err.kind(), err.message() + " at " + e.where());
    }
  }

  Term to_term_unchecked(const SExpr& e, const Scope& scope) {
    switch (e.kind) {
      case SExpr::Kind::Symbol: {
        if (auto it = scope.find(e.text); it != scope.end()) return it->second;
        if (e.text == "true") return bool_lit(true);
        if (e.text == "false") return bool_lit(false);
        if (system_.find_decl(e.text)) {
          fail(ErrorKind::UnsupportedFeature,
               "non-Horn shape: predicate " + e.text + " inside a constraint", e);
        }
        fail(ErrorKind::SortError, "unknown symbol " + e.text, e);
      }
      case SExpr::Kind::Numeral:
        return int_lit(parse_numeral(e.text));
      case SExpr::Kind::Decimal:
        fail(ErrorKind::UnsupportedFeature, "real arithmetic", e);
      case SExpr::Kind::Binary: {
        BigInt v = 0;
        for (char d : e.text) v = v * 2 + (d - '0');
        return bv_lit(v, static_cast<unsigned>(e.text.size()));
      }
      case SExpr::Kind::Hex:
        return bv_lit(BigInt("0x" + e.text), static_cast<unsigned>(4 * e.text.size()));
      case SExpr::Kind::Keyword:
      case SExpr::Kind::String:
        fail(ErrorKind::SyntaxError, "unexpected token in term", e);
      case SExpr::Kind::List:
        break;
    }
    if (e.items.empty()) fail(ErrorKind::SyntaxError, "empty application", e);
    const SExpr& head = e.items[0];

    if (head.is_symbol("_")) {
      // (_ bvN w)
      if (e.items.size() == 3 && e.items[1].kind == SExpr::Kind::Symbol &&
          e.items[1].text.rfind("bv", 0) == 0 && e.items[1].text.size() > 2) {
        const std::string digits = e.items[1].text.substr(2);
        for (char d : digits) {
          if (!std::isdigit(static_cast<unsigned char>(d))) {
            fail(ErrorKind::SyntaxError, "malformed bitvector literal", e);
          }
        }
        const unsigned width = parse_index(e.items[2]);
        if (width == 0) fail(ErrorKind::SortError, "zero-width bitvector literal", e);
        BigInt value(digits);
        if (value >= (BigInt(1) << width)) {
          fail(ErrorKind::SortError, "bitvector literal does not fit its width", e);
        }
        return bv_lit(value, width);
      }
      fail(ErrorKind::UnsupportedFeature, "indexed identifier", e);
    }
    if (head.is_symbol("!")) {
      if (e.items.size() < 2) fail(ErrorKind::SyntaxError, "malformed annotation", e);
      return to_term(e.items[1], scope);
    }
    if (head.is_symbol("forall") || head.is_symbol("exists")) {
      fail(ErrorKind::UnsupportedFeature, "quantifier alternation", e);
    }
    if (head.is_symbol("let")) fail(ErrorKind::SyntaxError, "unexpanded let", e);

    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(to_term(e.items[i], scope));

    if (head.is_app("_")) {
      const auto& idx = head.items;
      if (idx.size() == 4 && idx[1].is_symbol("extract")) {
        return make_app(Op::Extract, std::move(args), parse_index(idx[2]), parse_index(idx[3]));
      }
      if (idx.size() == 3 && idx[1].is_symbol("zero_extend")) {
        return make_app(Op::ZeroExtend, std::move(args), parse_index(idx[2]));
      }
      if (idx.size() == 3 && idx[1].is_symbol("sign_extend")) {
        return make_app(Op::SignExtend, std::move(args), parse_index(idx[2]));
      }
      fail(ErrorKind::UnsupportedFeature, "unsupported indexed operator", head);
    }
    if (head.kind != SExpr::Kind::Symbol) fail(ErrorKind::SyntaxError, "malformed application", e);

    const std::string& name = head.text;
    if (system_.find_decl(name) && !scope.count(name)) {
      fail(ErrorKind::UnsupportedFeature,
           "non-Horn shape: predicate " + name + " inside a constraint", e);
    }
    if (name == "select" || name == "store" || name == "const") {
      fail(ErrorKind::UnsupportedFeature, "arrays", e);
    }
    const auto& table = operator_table();
    auto it = table.find(name);
    if (it == table.end()) fail(ErrorKind::UnsupportedFeature, "operator " + name, e);
    Op op = it->second;

    if (op == Op::And || op == Op::Or) {
      if (args.empty()) return bool_lit(op == Op::And);
      if (args.size() == 1) return args.front();
    }
    if (op == Op::Sub && args.size() == 1) {
      if (args[0]->op == Op::IntLit) return int_lit(-args[0]->value);
      return make_app(Op::Neg, std::move(args));
    }
    if (op == Op::Implies && args.size() > 2) {
      // right associative
      Term acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = make_app(Op::Implies, {args[i], acc});
      return acc;
    }
    if (is_chainable(op) && args.size() > 2) {
      std::vector<Term> links;
      for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        links.push_back(make_app(op, {args[i], args[i + 1]}));
      }
      return make_app(Op::And, std::move(links));
    }
    if (is_left_assoc_binary(op) && args.size() > 2) {
      Term acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = make_app(op, {acc, args[i]});
      return acc;
    }
    return make_app(op, std::move(args));
  }

  ChcSystem system_;
  bool done_ = false;
};

}  // namespace

ChcSystem parse_chc(std::string_view text) { return Parser().run(text); }

}  // namespace hornfolio::chc
