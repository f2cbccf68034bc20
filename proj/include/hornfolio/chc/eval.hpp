#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "hornfolio/chc/system.hpp"

namespace hornfolio::chc {

/// Ground value: Bool as 0/1, Int as a signed 64-bit number, BitVec(w) as its
/// unsigned bit pattern (w <= 64).
using Value = std::int64_t;

/// Records whether any Int-sorted subterm left [lo, hi] during evaluation.
struct IntRangeMonitor {
  Value lo = std::numeric_limits<int>::min();
  Value hi = std::numeric_limits<int>::max();
  bool violated = false;
};

/// Straightforward recursive evaluator over a rule's variable assignment.
/// Returns nullopt when the value is not representable (Int arithmetic leaving
/// the 64-bit range, bitvectors wider than 64 bits) or a variable is unbound.
std::optional<Value> evaluate(const Term& term, std::span<const VarDecl> vars,
                              std::span<const Value> assignment,
                              IntRangeMonitor* monitor = nullptr);

/// Mask for a w-bit value, w in [1, 64].
constexpr std::uint64_t bv_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

}  // namespace hornfolio::chc
