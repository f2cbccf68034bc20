#include "compiled.hpp"

#include <stdexcept>

namespace hornfolio::oracle::detail {

using chc::Op;
using U = std::uint64_t;

namespace {

Value to_signed(U v, unsigned w) {
  if (w >= 64) return static_cast<Value>(v);
  return (v >> (w - 1)) & 1 ? static_cast<Value>(v | ~chc::bv_mask(w)) : static_cast<Value>(v);
}

}  // namespace

Node compile(const chc::Term& term, const std::vector<chc::VarDecl>& vars) {
  Node n;
  n.op = term->op;
  n.width = term->sort.is_bv() ? term->sort.width : 0;
  n.index0 = term->index0;
  n.index1 = term->index1;
  switch (term->op) {
    case Op::Var:
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == term->name) n.var = static_cast<int>(i);
      }
      if (n.var < 0) throw std::invalid_argument("unbound variable " + term->name);
      return n;
    case Op::IntLit:
      if (term->value > std::numeric_limits<Value>::max() || term->value < std::numeric_limits<Value>::min()) {
        n.op = Op::Var;  // evaluates to failure
        n.var = -1;
        return n;
      }
      n.lit = static_cast<Value>(term->value);
      return n;
    case Op::BvLit:
      n.lit = static_cast<Value>(static_cast<U>(term->value));
      return n;
    case Op::BoolLit:
      n.lit = term->value != 0 ? 1 : 0;
      return n;
    default:
      break;
  }
  if (!term->args.empty() && term->args[0]->sort.is_bv()) n.arg_width = term->args[0]->sort.width;
  for (const auto& a : term->args) n.kids.push_back(compile(a, vars));
  return n;
}

bool eval(const Node& n, const Value* vals, Value& out) {
  switch (n.op) {
    case Op::Var:
      if (n.var < 0) return false;
      out = vals[n.var];
      return true;
    case Op::IntLit:
    case Op::BvLit:
    case Op::BoolLit:
      out = n.lit;
      return true;
    case Op::And:
      for (const auto& k : n.kids) {
        Value v;
        if (!eval(k, vals, v)) return false;
        if (!v) {
          out = 0;
          return true;
        }
      }
      out = 1;
      return true;
    case Op::Or:
      for (const auto& k : n.kids) {
        Value v;
        if (!eval(k, vals, v)) return false;
        if (v) {
          out = 1;
          return true;
        }
      }
      out = 0;
      return true;
    case Op::Ite: {
      Value c;
      if (!eval(n.kids[0], vals, c)) return false;
      return eval(n.kids[c ? 1 : 2], vals, out);
    }
    default:
      break;
  }

  Value a = 0;
  Value b = 0;
  if (!eval(n.kids[0], vals, a)) return false;
  if (n.kids.size() > 1 && !eval(n.kids[1], vals, b)) return false;
  const U ua = static_cast<U>(a);
  const U ub = static_cast<U>(b);
  const U m = n.width ? chc::bv_mask(n.width) : 0;
  const unsigned aw = n.arg_width;

  switch (n.op) {
    case Op::Not: out = !a; return true;
    case Op::Implies: out = !a || b; return true;
    case Op::Eq: out = a == b; return true;
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
      Value acc = a;
      for (std::size_t i = 1; i < n.kids.size(); ++i) {
        Value v = b;
        if (i > 1 && !eval(n.kids[i], vals, v)) return false;
        const bool overflow = n.op == Op::Add   ? __builtin_add_overflow(acc, v, &acc)
                              : n.op == Op::Sub ? __builtin_sub_overflow(acc, v, &acc)
                                                : __builtin_mul_overflow(acc, v, &acc);
        if (overflow) return false;
      }
      out = acc;
      return true;
    }
    case Op::Neg: return !__builtin_sub_overflow(Value{0}, a, &out);
    case Op::Lt: out = a < b; return true;
    case Op::Le: out = a <= b; return true;
    case Op::Gt: out = a > b; return true;
    case Op::Ge: out = a >= b; return true;
    case Op::BvAdd: out = static_cast<Value>((ua + ub) & m); return true;
    case Op::BvSub: out = static_cast<Value>((ua - ub) & m); return true;
    case Op::BvMul: out = static_cast<Value>((ua * ub) & m); return true;
    case Op::BvNeg: out = static_cast<Value>((0 - ua) & m); return true;
    case Op::BvAnd: out = static_cast<Value>(ua & ub); return true;
    case Op::BvOr: out = static_cast<Value>(ua | ub); return true;
    case Op::BvXor: out = static_cast<Value>(ua ^ ub); return true;
    case Op::BvNot: out = static_cast<Value>(~ua & m); return true;
    case Op::BvShl: out = ub >= n.width ? 0 : static_cast<Value>((ua << ub) & m); return true;
    case Op::BvLshr: out = ub >= n.width ? 0 : static_cast<Value>(ua >> ub); return true;
    case Op::BvAshr: {
      const Value s = to_signed(ua, n.width);
      const Value shifted = ub >= n.width ? (s < 0 ? -1 : 0) : (s >> ub);
      out = static_cast<Value>(static_cast<U>(shifted) & m);
      return true;
    }
    case Op::BvUlt: out = ua < ub; return true;
    case Op::BvUle: out = ua <= ub; return true;
    case Op::BvUgt: out = ua > ub; return true;
    case Op::BvUge: out = ua >= ub; return true;
    case Op::BvSlt: out = to_signed(ua, aw) < to_signed(ub, aw); return true;
    case Op::BvSle: out = to_signed(ua, aw) <= to_signed(ub, aw); return true;
    case Op::BvSgt: out = to_signed(ua, aw) > to_signed(ub, aw); return true;
    case Op::BvSge: out = to_signed(ua, aw) >= to_signed(ub, aw); return true;
    case Op::Concat: out = static_cast<Value>(((ua << (n.width - aw)) | ub) & m); return true;
    case Op::Extract: out = static_cast<Value>((ua >> n.index1) & m); return true;
    case Op::ZeroExtend: out = a; return true;
    case Op::SignExtend: out = static_cast<Value>(static_cast<U>(to_signed(ua, aw)) & m); return true;
    default: return false;
  }
}

void collect_vars(const Node& n, std::vector<int>& out) {
  if (n.op == chc::Op::Var && n.var >= 0) out.push_back(n.var);
  for (const auto& k : n.kids) collect_vars(k, out);
}

}  // namespace hornfolio::oracle::detail
