#pragma once

#include <string>
#include <string_view>

#include "hornfolio/chc/system.hpp"

namespace hornfolio::chc {

/// Parses the SMT-LIBv2 HORN fragment into a validated, well-sorted system.
///
/// Accepted commands: set-logic HORN, set-info, set-option, declare-fun with a
/// Bool result, assert, check-sat, exit. An assertion is either
/// `(forall (binders) (=> body head))`, `(forall (binders) head)`, the same
/// without the quantifier for ground clauses, or `(not body)` for queries.
/// Let-bindings are inlined; `and` trees in the body are flattened and split
/// into constraint conjuncts and premise applications.
///
/// Errors: SyntaxError (with line:column), UnsupportedFeature, SortError,
/// ArityError, MixedTheory.
ChcSystem parse_chc(std::string_view text);

/// Term printer shared with print_chc: SMT-LIB concrete syntax.
std::string print_term(const Term& term);

/// Emits text that parse_chc maps back to a structurally equal system.
std::string print_chc(const ChcSystem& system);

/// Symbols that are not simple SMT-LIB symbols are printed as |quoted|.
std::string print_symbol(std::string_view name);

}  // namespace hornfolio::chc
