#include "hornfolio/codegen/c_ast.hpp"

#include <set>
#include <sstream>

namespace hornfolio::codegen {

namespace {

CExprPtr make(CExpr::Kind kind, std::string text, std::vector<CExprPtr> args = {}) {
  auto e = std::make_shared<CExpr>();
  e->kind = kind;
  e->text = std::move(text);
  e->args = std::move(args);
  return e;
}

CStmtPtr stmt(CStmt::Kind kind) {
  auto s = std::make_shared<CStmt>();
  s->kind = kind;
  return s;
}

}  // namespace

CExprPtr ident(std::string name) { return make(CExpr::Kind::Ident, std::move(name)); }
CExprPtr literal(std::string text) { return make(CExpr::Kind::Literal, std::move(text)); }
CExprPtr unary(std::string op, CExprPtr a) { return make(CExpr::Kind::Unary, std::move(op), {std::move(a)}); }
CExprPtr binary(std::string op, CExprPtr a, CExprPtr b) {
  return make(CExpr::Kind::Binary, std::move(op), {std::move(a), std::move(b)});
}
CExprPtr nary(std::string op, std::vector<CExprPtr> operands) {
  if (operands.size() == 1) return operands.front();
  return make(CExpr::Kind::Binary, std::move(op), std::move(operands));
}
CExprPtr ternary(CExprPtr c, CExprPtr a, CExprPtr b) {
  return make(CExpr::Kind::Ternary, "?", {std::move(c), std::move(a), std::move(b)});
}
CExprPtr call(std::string callee, std::vector<CExprPtr> args) {
  return make(CExpr::Kind::Call, std::move(callee), std::move(args));
}
CExprPtr cast(std::string type, CExprPtr a) { return make(CExpr::Kind::Cast, std::move(type), {std::move(a)}); }

CStmtPtr decl(std::string type, std::string name, CExprPtr init) {
  auto s = stmt(CStmt::Kind::Decl);
  s->type = std::move(type);
  s->name = std::move(name);
  s->expr = std::move(init);
  return s;
}
CStmtPtr assign(std::string target, CExprPtr rhs) {
  auto s = stmt(CStmt::Kind::Assign);
  s->name = std::move(target);
  s->expr = std::move(rhs);
  return s;
}
CStmtPtr expr_stmt(CExprPtr e) {
  auto s = stmt(CStmt::Kind::Expr);
  s->expr = std::move(e);
  return s;
}
CStmtPtr if_stmt(CExprPtr cond, CBlock then) {
  auto s = stmt(CStmt::Kind::If);
  s->expr = std::move(cond);
  s->body = std::move(then);
  return s;
}
CStmtPtr while_stmt(CExprPtr cond, CBlock body) {
  auto s = stmt(CStmt::Kind::While);
  s->expr = std::move(cond);
  s->body = std::move(body);
  return s;
}
CStmtPtr switch_stmt(CExprPtr scrutinee, CBlock cases) {
  auto s = stmt(CStmt::Kind::Switch);
  s->expr = std::move(scrutinee);
  s->body = std::move(cases);
  return s;
}
CStmtPtr case_stmt(long long value, CBlock body) {
  auto s = stmt(CStmt::Kind::Case);
  s->value = value;
  s->body = std::move(body);
  return s;
}
CStmtPtr default_stmt(CBlock body) {
  auto s = stmt(CStmt::Kind::Default);
  s->body = std::move(body);
  return s;
}
CStmtPtr block(CBlock body) {
  auto s = stmt(CStmt::Kind::Block);
  s->body = std::move(body);
  return s;
}
CStmtPtr return_stmt(CExprPtr value) {
  auto s = stmt(CStmt::Kind::Return);
  s->expr = std::move(value);
  return s;
}
CStmtPtr goto_stmt(std::string label) {
  auto s = stmt(CStmt::Kind::Goto);
  s->name = std::move(label);
  return s;
}
CStmtPtr label_stmt(std::string label) {
  auto s = stmt(CStmt::Kind::Label);
  s->name = std::move(label);
  return s;
}
CStmtPtr break_stmt() { return stmt(CStmt::Kind::Break); }
CStmtPtr comment(std::string text) {
  auto s = stmt(CStmt::Kind::Comment);
  s->name = std::move(text);
  return s;
}

namespace {

void print(std::ostream& os, const CExpr& e, bool top) {
  switch (e.kind) {
    case CExpr::Kind::Ident:
    case CExpr::Kind::Literal:
      os << e.text;
      return;
    case CExpr::Kind::Unary:
      os << "(" << e.text;
      print(os, *e.args[0], false);
      os << ")";
      return;
    case CExpr::Kind::Binary:
      if (!top) os << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << " " << e.text << " ";
        print(os, *e.args[i], false);
      }
      if (!top) os << ")";
      return;
    case CExpr::Kind::Ternary:
      if (!top) os << "(";
      print(os, *e.args[0], false);
      os << " ? ";
      print(os, *e.args[1], false);
      os << " : ";
      print(os, *e.args[2], false);
      if (!top) os << ")";
      return;
    case CExpr::Kind::Call:
      os << e.text << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.args[i], true);
      }
      os << ")";
      return;
    case CExpr::Kind::Cast:
      os << "((" << e.text << ")";
      print(os, *e.args[0], false);
      os << ")";
      return;
  }
}

std::string top_expr(const CExprPtr& e) {
  std::ostringstream os;
  print(os, *e, true);
  return os.str();
}

void print_block(std::ostream& os, const CBlock& stmts, int depth);

void print_stmt(std::ostream& os, const CStmt& s, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (s.kind) {
    case CStmt::Kind::Decl:
      os << pad << s.type << " " << s.name;
      if (s.expr) os << " = " << top_expr(s.expr);
      os << ";\n";
      return;
    case CStmt::Kind::Assign:
      os << pad << s.name << " = " << top_expr(s.expr) << ";\n";
      return;
    case CStmt::Kind::Expr:
      os << pad << top_expr(s.expr) << ";\n";
      return;
    case CStmt::Kind::If:
      os << pad << "if (" << top_expr(s.expr) << ")";
      if (s.body.size() == 1 && (s.body[0]->kind == CStmt::Kind::Goto ||
                                 s.body[0]->kind == CStmt::Kind::Return)) {
        os << " ";
        std::ostringstream inner;
        print_stmt(inner, *s.body[0], 0);
        os << inner.str();
        return;
      }
      os << " {\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::While:
      os << pad << "while (" << top_expr(s.expr) << ") {\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::Switch:
      os << pad << "switch (" << top_expr(s.expr) << ") {\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::Case:
      os << pad << "case " << s.value << ": {\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::Default:
      os << pad << "default: {\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::Block:
      os << pad << "{\n";
      print_block(os, s.body, depth + 1);
      os << pad << "}\n";
      return;
    case CStmt::Kind::Return:
      os << pad << "return";
      if (s.expr) os << " " << top_expr(s.expr);
      os << ";\n";
      return;
    case CStmt::Kind::Goto:
      os << pad << "goto " << s.name << ";\n";
      return;
    case CStmt::Kind::Label:
      os << s.name << ":\n";
      return;
    case CStmt::Kind::Break:
      os << pad << "break;\n";
      return;
    case CStmt::Kind::Comment:
      os << pad << "/* " << s.name << " */\n";
      return;
  }
}

void print_block(std::ostream& os, const CBlock& stmts, int depth) {
  for (const auto& s : stmts) print_stmt(os, *s, depth);
}

std::string signature(const CFunction& fn) {
  std::string out = fn.return_type + " " + fn.name + "(";
  if (fn.params.empty()) out += "void";
  for (std::size_t i = 0; i < fn.params.size(); ++i) {
    if (i) out += ", ";
    out += fn.params[i].first + " " + fn.params[i].second;
  }
  return out + ")";
}

void collect_reads(const CBlock& stmts, std::set<std::string>& reads) {
  walk(stmts, [&](const CStmt& s) {
    walk(s.expr, [&](const CExpr& e) {
      if (e.kind == CExpr::Kind::Ident) reads.insert(e.text);
    });
  });
}

void silence_block(CBlock& stmts, const std::set<std::string>& reads) {
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    silence_block(stmts[i]->body, reads);
    if (stmts[i]->kind == CStmt::Kind::Decl && !reads.count(stmts[i]->name)) {
      stmts.insert(stmts.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   expr_stmt(cast("void", ident(stmts[i]->name))));
      ++i;
    }
  }
}

}  // namespace

std::string print_expr(const CExprPtr& e) {
  std::ostringstream os;
  print(os, *e, false);
  return os.str();
}

void silence_unused(CFunction& fn) {
  std::set<std::string> reads;
  collect_reads(fn.body, reads);
  silence_block(fn.body, reads);
  CBlock prefix;
  for (const auto& [type, name] : fn.params) {
    if (!reads.count(name)) prefix.push_back(expr_stmt(cast("void", ident(name))));
  }
  fn.body.insert(fn.body.begin(), prefix.begin(), prefix.end());
}

std::string print_unit(const CUnit& unit) {
  std::ostringstream os;
  if (!unit.header.empty()) {
    os << "/*";
    for (std::size_t i = 0; i < unit.header.size(); ++i) {
      os << (i ? " * " : " ") << unit.header[i] << (i + 1 == unit.header.size() ? " */\n" : "\n");
    }
    os << "\n";
  }
  for (const auto& e : unit.externs) os << e << "\n";
  if (!unit.externs.empty()) os << "\n";
  for (const auto& p : unit.prototypes) os << signature(p) << ";\n";
  if (!unit.prototypes.empty()) os << "\n";
  for (std::size_t i = 0; i < unit.functions.size(); ++i) {
    if (i) os << "\n";
    os << signature(unit.functions[i]) << " {\n";
    print_block(os, unit.functions[i].body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace hornfolio::codegen
