#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hornfolio/chc/system.hpp"
#include "hornfolio/codegen/c_ast.hpp"

namespace hornfolio::codegen {

enum class Encoding { Forward, Backward };
std::string_view to_string(Encoding encoding);

enum class ErrorStyle {
  ReachError,      // extern reach_error() followed by abort()
  ReturnMinusOne,  // `return -1;` from main, as in the hand-written listings
};

struct EmitOptions {
  ErrorStyle error_style = ErrorStyle::ReachError;
  std::string int_c_type = "int";  // int, long or long long
  std::string source_digest;       // header comment; empty means hash of print_chc(system)
};

/// C representation of a sort. `bits` is the logical width; `mask` is set
/// whenever bits is not a native width.
struct CTypeSpec {
  std::string c_name;
  unsigned bits = 0;
  bool is_signed = false;
  std::optional<std::uint64_t> mask;

  friend bool operator==(const CTypeSpec&, const CTypeSpec&) = default;
};

/// Throws Error{UnsupportedWidth} for bitvectors wider than 64 bits and
/// Error{UnsupportedFeature} for an int_c_type other than int/long/long long.
CTypeSpec map_sort(const chc::Sort& sort, const EmitOptions& opts = {});

/// SV-COMP nondet function returning values of the sort's carrier type.
std::string nondet_function(const chc::Sort& sort, const EmitOptions& opts = {});

struct CProgram {
  std::string source;
  Encoding encoding = Encoding::Forward;
  bool recursive = false;
  chc::TheoryClass theory;
  std::string error_symbol;
  std::vector<std::string> nondet_symbols;  // extern declarations actually used
  CUnit unit;                               // the tree `source` was printed from
};

/// Variable name -> C identifier.
using Env = std::map<std::string, std::string>;

/// Lowers a well-sorted term. Int terms have the C type opts.int_c_type, Bool
/// terms are int truth values, BitVec(w) terms have the promoted type of their
/// carrier (int for w <= 16, unsigned int up to 32, unsigned long long above)
/// and always hold a value below 2^w.
CExprPtr lower_term(const chc::Term& term, const Env& env, const EmitOptions& opts = {});
std::string emit_term(const chc::Term& term, const Env& env, const EmitOptions& opts = {});

/// Nonrecursive encoding: a single loop in main that applies one rule per
/// iteration to a one-fact state. Throws Error{ForwardRequiresLinear}.
CProgram transform_forward(const chc::ChcSystem& system, const EmitOptions& opts = {});

/// Recursive encoding: one int-returning function per predicate.
CProgram transform_backward(const chc::ChcSystem& system, const EmitOptions& opts = {});

CProgram transform(const chc::ChcSystem& system, Encoding encoding, const EmitOptions& opts = {});

/// Injective C identifier for a source symbol: alphanumerics kept, every other
/// byte (including '_') written as _XX.
std::string sanitize(std::string_view prefix, std::string_view name);

/// Naming used by the forward encoding, exposed for replay and tests.
std::string predicate_function(std::string_view pred_name);
std::string variable_name(std::string_view var_name);
inline constexpr std::string_view kErrorLabel = "chc_error";
inline constexpr std::string_view kSelectorVar = "sel";
inline constexpr std::string_view kPredicateVar = "pred_sel";

std::uint64_t fnv1a64(std::string_view data);

}  // namespace hornfolio::codegen
