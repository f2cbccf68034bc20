#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hornfolio::chc {

using BigInt = boost::multiprecision::cpp_int;

enum class SortKind : std::uint8_t { Bool, Int, BitVec };

struct Sort {
  SortKind kind = SortKind::Bool;
  unsigned width = 0;  // only meaningful for BitVec

  static constexpr Sort boolean() { return {SortKind::Bool, 0}; }
  static constexpr Sort integer() { return {SortKind::Int, 0}; }
  static Sort bitvec(unsigned width);

  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_int() const { return kind == SortKind::Int; }
  bool is_bv() const { return kind == SortKind::BitVec; }

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;
};

/// SMT-LIB spelling: Bool, Int, (_ BitVec w).
std::string to_string(const Sort& sort);

enum class Op : std::uint8_t {
  Var, IntLit, BvLit, BoolLit,
  // core
  And, Or, Not, Implies, Ite, Eq,
  // linear integer arithmetic
  Add, Sub, Neg, Mul, Lt, Le, Gt, Ge,
  // bitvectors
  BvAdd, BvSub, BvMul, BvNeg, BvAnd, BvOr, BvXor, BvNot, BvShl, BvLshr, BvAshr,
  BvUlt, BvUle, BvUgt, BvUge, BvSlt, BvSle, BvSgt, BvSge,
  Concat, Extract, ZeroExtend, SignExtend,
};

/// SMT-LIB operator symbol ("bvadd", "=", "extract", ...). Leaves return "".
std::string_view op_symbol(Op op);

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Op op = Op::BoolLit;
  Sort sort;
  std::string name;       // Var
  BigInt value;           // IntLit, BvLit, BoolLit (0/1)
  std::vector<Term> args;
  unsigned index0 = 0;    // Extract: high bit; Zero/SignExtend: amount
  unsigned index1 = 0;    // Extract: low bit
};

// Leaf constructors never fail except bv_lit on an out-of-range value.
Term var(std::string name, Sort sort);
Term int_lit(BigInt value);
Term bv_lit(BigInt value, unsigned width);
Term bool_lit(bool value);

/// Builds an application and checks it against the operator signature.
/// Throws Error{SortError} on ill-typed operands and Error{ArityError} on a
/// wrong operand count.
Term make_app(Op op, std::vector<Term> args, unsigned index0 = 0, unsigned index1 = 0);

/// Conjunction that drops `true` operands and collapses 0/1-ary results.
Term conjoin(std::vector<Term> conjuncts);

/// Recursively re-checks every node. Throws like make_app.
void check_well_sorted(const Term& term);

bool structurally_equal(const Term& a, const Term& b);

void collect_vars(const Term& term, std::set<std::string>& out);

/// True when the term contains a node of the given sort kind anywhere.
bool mentions_sort(const Term& term, SortKind kind);
void collect_bv_widths(const Term& term, std::set<unsigned>& out);

bool is_true_literal(const Term& term);

}  // namespace hornfolio::chc
