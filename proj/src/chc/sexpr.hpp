#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hornfolio::chc::detail {

struct SExpr {
  enum class Kind { Symbol, Keyword, Numeral, Decimal, Binary, Hex, String, List };

  Kind kind = Kind::List;
  std::string text;  // symbol name (unquoted), literal digits, string contents
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_symbol(std::string_view name) const { return kind == Kind::Symbol && text == name; }
  bool is_list() const { return kind == Kind::List; }
  /// List whose first element is the given symbol.
  bool is_app(std::string_view head) const {
    return kind == Kind::List && !items.empty() && items.front().is_symbol(head);
  }
  std::string where() const;
};

/// Splits the whole input into top-level s-expressions. Throws SyntaxError.
std::vector<SExpr> read_all(std::string_view text);

}  // namespace hornfolio::chc::detail
