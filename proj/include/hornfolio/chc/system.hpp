#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hornfolio/chc/term.hpp"

namespace hornfolio::chc {

struct PredicateDecl {
  std::string name;
  std::vector<Sort> arg_sorts;

  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

/// Occurrence of an uninterpreted predicate; `pred` indexes ChcSystem::decls.
struct PredicateApp {
  std::size_t pred = 0;
  std::vector<Term> args;
};

struct VarDecl {
  std::string name;
  Sort sort;

  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

/// forall vars. constraint /\ premise... => head   (no head: query, head is `false`)
struct Rule {
  std::vector<VarDecl> vars;
  Term constraint = bool_lit(true);
  std::vector<PredicateApp> premise;
  std::optional<PredicateApp> head;

  bool is_query() const { return !head.has_value(); }
  bool is_atom() const { return premise.empty(); }
  std::optional<std::size_t> var_index(std::string_view name) const;
};

struct TheoryClass {
  enum class Kind { Core, LIA, BV };
  Kind kind = Kind::Core;
  std::set<unsigned> widths;  // non-empty iff kind == BV

  static TheoryClass core() { return {Kind::Core, {}}; }
  static TheoryClass lia() { return {Kind::LIA, {}}; }
  static TheoryClass bv(std::set<unsigned> widths);

  friend bool operator==(const TheoryClass&, const TheoryClass&) = default;
};

/// "Core", "LIA", "BV(4)" or "BV(4,8)".
std::string to_string(const TheoryClass& theory);

struct ChcSystem {
  std::vector<PredicateDecl> decls;
  std::vector<Rule> rules;
  TheoryClass theory;

  std::optional<std::size_t> find_decl(std::string_view name) const;
  std::size_t query_count() const;
};

enum class Linearity { Linear, NonLinear };
std::string_view to_string(Linearity linearity);

/// NonLinear iff some rule has two or more premise applications.
Linearity classify_linearity(const ChcSystem& system);

/// BV if any bitvector sort occurs, else LIA if any Int occurs, else Core.
/// Throws Error{MixedTheory} when Int and BitVec meet in one system.
TheoryClass detect_theory(const ChcSystem& system);

/// Rewrites every rule so its head arguments are pairwise-distinct variables.
/// Replaced head terms t become fresh variables v with `v = t` conjoined to the
/// constraint. Rule order, query count and linearity are preserved.
ChcSystem normalize(const ChcSystem& system);
bool is_normalized(const ChcSystem& system);

/// Checks every structural invariant: decl names unique, applications match
/// their declaration, constraint is Bool, free variables are declared, all
/// terms well-sorted. Throws Error on the first violation.
void validate(const ChcSystem& system);

bool structurally_equal(const ChcSystem& a, const ChcSystem& b);

}  // namespace hornfolio::chc
