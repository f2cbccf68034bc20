#include <cstdio>

#include "hornfolio/chc/eval.hpp"
#include "hornfolio/codegen/codegen.hpp"
#include "hornfolio/error.hpp"

namespace hornfolio::codegen {

using chc::Op;
using chc::Sort;
using chc::Term;

CTypeSpec map_sort(const Sort& sort, const EmitOptions& opts) {
  switch (sort.kind) {
    case chc::SortKind::Bool:
      return {"unsigned char", 1, false, 1};
    case chc::SortKind::Int:
      if (opts.int_c_type == "int") return {"int", 32, true, std::nullopt};
      if (opts.int_c_type == "long" || opts.int_c_type == "long long") {
        return {opts.int_c_type, 64, true, std::nullopt};
      }
      throw Error(ErrorKind::UnsupportedFeature, "C integer type " + opts.int_c_type);
    case chc::SortKind::BitVec:
      break;
  }
  const unsigned w = sort.width;
  if (w > 64) throw Error(ErrorKind::UnsupportedWidth, "bitvector width " + std::to_string(w) + " exceeds 64");
  const char* carrier = w <= 8 ? "unsigned char" : w <= 16 ? "unsigned short" : w <= 32 ? "unsigned int" : "unsigned long long";
  std::optional<std::uint64_t> mask;
  if (w != 8 && w != 16 && w != 32 && w != 64) mask = chc::bv_mask(w);
  return {carrier, w, false, mask};
}

std::string nondet_function(const Sort& sort, const EmitOptions& opts) {
  if (sort.is_bool()) return "__VERIFIER_nondet_uchar";
  if (sort.is_int()) {
    map_sort(sort, opts);
    if (opts.int_c_type == "int") return "__VERIFIER_nondet_int";
    if (opts.int_c_type == "long") return "__VERIFIER_nondet_long";
    return "__VERIFIER_nondet_longlong";
  }
  const unsigned w = map_sort(sort, opts).bits;
  if (w <= 8) return "__VERIFIER_nondet_uchar";
  if (w <= 16) return "__VERIFIER_nondet_ushort";
  if (w <= 32) return "__VERIFIER_nondet_uint";
  return "__VERIFIER_nondet_ulonglong";
}

namespace {

// Promoted C type of a BitVec(w) value.
std::string ptype(unsigned w) {
  return w <= 16 ? "int" : w <= 32 ? "unsigned int" : "unsigned long long";
}

std::string suffix(unsigned w) { return w <= 16 ? "" : w <= 32 ? "u" : "ull"; }

CExprPtr dec(std::uint64_t v, unsigned w) { return literal(std::to_string(v) + suffix(w)); }

CExprPtr hex(std::uint64_t v, unsigned w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(v));
  return literal(buf + suffix(w));
}

CExprPtr conv(CExprPtr e, unsigned from, unsigned to) {
  if (ptype(from) == ptype(to)) return e;
  return cast(ptype(to), std::move(e));
}

// Reduces an arithmetic result to w bits and restores the promoted type.
// `wide` marks results computed in unsigned int for w <= 16.
CExprPtr wrap(CExprPtr e, unsigned w, bool wide = false) {
  if (w == 8) return cast("unsigned char", std::move(e));
  if (w == 16) return cast("unsigned short", std::move(e));
  if (w == 32 || w == 64) return e;
  auto masked = binary("&", std::move(e), hex(chc::bv_mask(w), wide ? 17 : w));
  return wide ? cast("int", masked) : masked;
}

CExprPtr int_literal(const chc::BigInt& value) {
  constexpr long long imax = 2147483647LL;
  const chc::BigInt mag = value < 0 ? chc::BigInt(-value) : value;
  if (mag > chc::BigInt(std::numeric_limits<long long>::max()) + (value < 0 ? 1 : 0)) {
    throw Error(ErrorKind::UnsupportedWidth, "integer literal " + value.str() + " exceeds 64 bits");
  }
  if (value == chc::BigInt(std::numeric_limits<long long>::min())) {
    return binary("-", literal("-9223372036854775807LL"), literal("1"));
  }
  if (value == -imax - 1) return binary("-", literal("-2147483647"), literal("1"));
  std::string text = mag.str();
  if (mag > imax) text += "LL";
  if (value < 0) return unary("-", literal(text));
  return literal(text);
}

struct Lowerer {
  const Env& env;
  const EmitOptions& opts;

  CExprPtr bv_sign(unsigned w) { return hex(std::uint64_t{1} << (w - 1), w); }

  CExprPtr lower(const Term& t) {
    switch (t->op) {
      case Op::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw std::out_of_range("unbound variable " + t->name);
        return ident(it->second);
      }
      case Op::IntLit: return int_literal(t->value);
      case Op::BvLit: return dec(static_cast<std::uint64_t>(t->value), t->sort.width);
      case Op::BoolLit: return literal(t->value != 0 ? "1" : "0");
      default: break;
    }
    if (t->sort.is_bv()) map_sort(t->sort, opts);
    std::vector<CExprPtr> a;
    for (const auto& arg : t->args) {
      if (arg->sort.is_bv()) map_sort(arg->sort, opts);
      a.push_back(lower(arg));
    }
    const unsigned w = t->sort.is_bv() ? t->sort.width : 0;
    const unsigned aw = !t->args.empty() && t->args[0]->sort.is_bv() ? t->args[0]->sort.width : 0;
    switch (t->op) {
      case Op::And: return nary("&&", a);
      case Op::Or: return nary("||", a);
      case Op::Not: return unary("!", a[0]);
      case Op::Implies: return binary("||", unary("!", a[0]), a[1]);
      case Op::Ite: return ternary(a[0], a[1], a[2]);
      case Op::Eq: return binary("==", a[0], a[1]);
      case Op::Add: return nary("+", a);
      case Op::Sub: return nary("-", a);
      case Op::Neg: return unary("-", a[0]);
      case Op::Mul: return nary("*", a);
      case Op::Lt: return binary("<", a[0], a[1]);
      case Op::Le: return binary("<=", a[0], a[1]);
      case Op::Gt: return binary(">", a[0], a[1]);
      case Op::Ge: return binary(">=", a[0], a[1]);
      case Op::BvAdd: return wrap(binary("+", a[0], a[1]), w);
      case Op::BvSub: return wrap(binary("-", a[0], a[1]), w);
      case Op::BvMul:
        if (w > 8 && w <= 16) return wrap(binary("*", cast("unsigned int", a[0]), a[1]), w, true);
        return wrap(binary("*", a[0], a[1]), w);
      case Op::BvNeg: return wrap(unary("-", a[0]), w);
      case Op::BvNot: return wrap(unary("~", a[0]), w);
      case Op::BvAnd: return binary("&", a[0], a[1]);
      case Op::BvOr: return binary("|", a[0], a[1]);
      case Op::BvXor: return binary("^", a[0], a[1]);
      case Op::BvShl: {
        CExprPtr shifted = w <= 16 ? wrap(binary("<<", cast("unsigned int", a[0]), a[1]), w, true)
                                   : wrap(binary("<<", a[0], a[1]), w);
        return ternary(binary(">=", a[1], dec(w, w)), dec(0, w), shifted);
      }
      case Op::BvLshr:
        return ternary(binary(">=", a[1], dec(w, w)), dec(0, w), binary(">>", a[0], a[1]));
      case Op::BvAshr: {
        const std::uint64_t m = chc::bv_mask(w);
        auto neg = binary("&", a[0], bv_sign(w));
        auto fill = binary("^", hex(m, w), binary(">>", hex(m, w), a[1]));
        auto in_range = ternary(neg, binary("|", binary(">>", a[0], a[1]), fill), binary(">>", a[0], a[1]));
        return ternary(binary(">=", a[1], dec(w, w)), ternary(neg, hex(m, w), dec(0, w)), in_range);
      }
      case Op::BvUlt: return binary("<", a[0], a[1]);
      case Op::BvUle: return binary("<=", a[0], a[1]);
      case Op::BvUgt: return binary(">", a[0], a[1]);
      case Op::BvUge: return binary(">=", a[0], a[1]);
      case Op::BvSlt:
      case Op::BvSle:
      case Op::BvSgt:
      case Op::BvSge: {
        const char* op = t->op == Op::BvSlt ? "<" : t->op == Op::BvSle ? "<=" : t->op == Op::BvSgt ? ">" : ">=";
        return binary(op, binary("^", a[0], bv_sign(aw)), binary("^", a[1], bv_sign(aw)));
      }
      case Op::Concat: {
        const unsigned lo = t->args[1]->sort.width;
        return binary("|", binary("<<", conv(a[0], aw, w), literal(std::to_string(lo))), conv(a[1], lo, w));
      }
      case Op::Extract: {
        CExprPtr e = a[0];
        if (t->index1 > 0) e = binary(">>", e, literal(std::to_string(t->index1)));
        if (t->index0 + 1 < aw) e = binary("&", e, hex(chc::bv_mask(w), aw));
        return conv(e, aw, w);
      }
      case Op::ZeroExtend: return conv(a[0], aw, w);
      case Op::SignExtend: {
        if (t->index0 == 0) return a[0];
        auto widened = conv(a[0], aw, w);
        auto ext = hex(chc::bv_mask(w) ^ chc::bv_mask(aw), w);
        return ternary(binary("&", a[0], bv_sign(aw)), binary("|", widened, ext), widened);
      }
      default:
        throw std::logic_error("unhandled operator in lower_term");
    }
  }
};

}  // namespace

CExprPtr lower_term(const Term& term, const Env& env, const EmitOptions& opts) {
  Lowerer l{env, opts};
  return l.lower(term);
}

std::string emit_term(const Term& term, const Env& env, const EmitOptions& opts) {
  return print_expr(lower_term(term, env, opts));
}

std::string sanitize(std::string_view prefix, std::string_view name) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out(prefix);
  for (unsigned char c : name) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
      out += static_cast<char>(c);
    } else {
      out += '_';
      out += digits[c >> 4];
      out += digits[c & 0xF];
    }
  }
  return out;
}

std::string predicate_function(std::string_view pred_name) { return sanitize("p_", pred_name); }
std::string variable_name(std::string_view var_name) { return sanitize("v_", var_name); }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string_view to_string(Encoding encoding) {
  return encoding == Encoding::Forward ? "forward" : "backward";
}

}  // namespace hornfolio::codegen
