#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hornfolio::codegen {

struct CExpr;
using CExprPtr = std::shared_ptr<const CExpr>;

/// Side-effect-free C expression tree. Binary nodes are n-ary and print as
/// `(a op b op c)`.
struct CExpr {
  enum class Kind { Ident, Literal, Unary, Binary, Ternary, Call, Cast };
  Kind kind = Kind::Literal;
  std::string text;  // identifier, literal spelling, operator, callee or cast type
  std::vector<CExprPtr> args;
};

CExprPtr ident(std::string name);
CExprPtr literal(std::string text);
CExprPtr unary(std::string op, CExprPtr a);
CExprPtr binary(std::string op, CExprPtr a, CExprPtr b);
CExprPtr nary(std::string op, std::vector<CExprPtr> operands);
CExprPtr ternary(CExprPtr c, CExprPtr a, CExprPtr b);
CExprPtr call(std::string callee, std::vector<CExprPtr> args = {});
CExprPtr cast(std::string type, CExprPtr a);

struct CStmt;
using CStmtPtr = std::shared_ptr<CStmt>;
using CBlock = std::vector<CStmtPtr>;

struct CStmt {
  enum class Kind { Decl, Assign, Expr, If, While, Switch, Case, Default, Block, Return, Goto, Label, Break, Comment };
  Kind kind = Kind::Expr;
  std::string type;  // Decl
  std::string name;  // Decl/Assign target, Goto/Label target, Comment text
  CExprPtr expr;     // initializer, rhs, condition, scrutinee, return value
  long long value = 0;  // Case label
  CBlock body;          // If-then, While, Switch, Case, Block
};

CStmtPtr decl(std::string type, std::string name, CExprPtr init = nullptr);
CStmtPtr assign(std::string target, CExprPtr rhs);
CStmtPtr expr_stmt(CExprPtr e);
CStmtPtr if_stmt(CExprPtr cond, CBlock then);
CStmtPtr while_stmt(CExprPtr cond, CBlock body);
CStmtPtr switch_stmt(CExprPtr scrutinee, CBlock cases);
CStmtPtr case_stmt(long long value, CBlock body);
CStmtPtr default_stmt(CBlock body);
CStmtPtr block(CBlock body);
CStmtPtr return_stmt(CExprPtr value = nullptr);
CStmtPtr goto_stmt(std::string label);
CStmtPtr label_stmt(std::string label);
CStmtPtr break_stmt();
CStmtPtr comment(std::string text);

struct CFunction {
  std::string return_type;
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;  // (type, name)
  CBlock body;
};

struct CUnit {
  std::vector<std::string> header;       // comment lines
  std::vector<std::string> externs;      // full declarations
  std::vector<CFunction> prototypes;     // bodies ignored
  std::vector<CFunction> functions;
};

std::string print_expr(const CExprPtr& e);
std::string print_unit(const CUnit& unit);

/// Inserts `(void)name;` after every declaration and at the top of every
/// function for parameters that are never read, so output stays clean under
/// -Wall -Wextra.
void silence_unused(CFunction& fn);

/// Pre-order walk over every statement, including nested ones.
template <typename F>
void walk(const CBlock& stmts, F&& f) {
  for (const auto& s : stmts) {
    f(*s);
    walk(s->body, f);
  }
}

/// Pre-order walk over an expression tree.
template <typename F>
void walk(const CExprPtr& e, F&& f) {
  if (!e) return;
  f(*e);
  for (const auto& a : e->args) walk(a, f);
}

}  // namespace hornfolio::codegen
