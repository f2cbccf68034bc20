#include "sexpr.hpp"

#include <cctype>

#include "hornfolio/error.hpp"

namespace hornfolio::chc::detail {

std::string SExpr::where() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip_blank();
    while (pos_ < text_.size()) {
      out.push_back(next());
      skip_blank();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t line, std::size_t column) const {
    throw Error(ErrorKind::SyntaxError,
                what + " at " + std::to_string(line) + ":" + std::to_string(column));
  }

  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = peek();
      if (c == ';') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool is_symbol_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';' &&
           c != '"' && c != '|';
  }

  SExpr next() {
    SExpr node;
    node.line = line_;
    node.column = column_;
    const char c = peek();
    if (c == '(') {
      advance();
      node.kind = SExpr::Kind::List;
      for (;;) {
        skip_blank();
        if (pos_ >= text_.size()) fail("unbalanced '('", node.line, node.column);
        if (peek() == ')') {
          advance();
          break;
        }
        node.items.push_back(next());
      }
      return node;
    }
    if (c == ')') fail("unexpected ')'", line_, column_);
    if (c == '|') {
      advance();
      node.kind = SExpr::Kind::Symbol;
      while (pos_ < text_.size() && peek() != '|') {
        if (peek() == '\\') fail("backslash in quoted symbol", line_, column_);
        node.text += peek();
        advance();
      }
      if (pos_ >= text_.size()) fail("unterminated quoted symbol", node.line, node.column);
      advance();
      return node;
    }
    if (c == '"') {
      advance();
      node.kind = SExpr::Kind::String;
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated string literal", node.line, node.column);
        if (peek() == '"') {
          advance();
          if (pos_ < text_.size() && peek() == '"') {
            node.text += '"';
            advance();
            continue;
          }
          break;
        }
        node.text += peek();
        advance();
      }
      return node;
    }
    std::string token;
    while (pos_ < text_.size() && is_symbol_char(peek())) {
      token += peek();
      advance();
    }
    if (token.empty()) fail("unexpected character", line_, column_);
    node.text = token;
    if (token[0] == ':') {
      node.kind = SExpr::Kind::Keyword;
    } else if (token.size() > 2 && token[0] == '#' && token[1] == 'b') {
      node.kind = SExpr::Kind::Binary;
      node.text = token.substr(2);
      for (char d : node.text) {
        if (d != '0' && d != '1') fail("malformed binary literal " + token, node.line, node.column);
      }
    } else if (token.size() > 2 && token[0] == '#' && token[1] == 'x') {
      node.kind = SExpr::Kind::Hex;
      node.text = token.substr(2);
      for (char d : node.text) {
        if (!std::isxdigit(static_cast<unsigned char>(d))) {
          fail("malformed hexadecimal literal " + token, node.line, node.column);
        }
      }
    } else if (std::isdigit(static_cast<unsigned char>(token[0]))) {
      bool seen_dot = false;
      for (char d : token) {
        if (d == '.' && !seen_dot) {
          seen_dot = true;
        } else if (!std::isdigit(static_cast<unsigned char>(d))) {
          fail("malformed numeral " + token, node.line, node.column);
        }
      }
      if (!seen_dot && token.size() > 1 && token[0] == '0') {
        fail("numeral with leading zero " + token, node.line, node.column);
      }
      node.kind = seen_dot ? SExpr::Kind::Decimal : SExpr::Kind::Numeral;
    } else if (token[0] == '#') {
      fail("malformed literal " + token, node.line, node.column);
    } else {
      node.kind = SExpr::Kind::Symbol;
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<SExpr> read_all(std::string_view text) { return Reader(text).all(); }

}  // namespace hornfolio::chc::detail
