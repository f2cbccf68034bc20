#include "hornfolio/chc/eval.hpp"

namespace hornfolio::chc {

namespace {

using U = std::uint64_t;

std::int64_t as_signed(U v, unsigned w) {
  if (w >= 64) return static_cast<std::int64_t>(v);
  const U sign = U{1} << (w - 1);
  return (v & sign) ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(U{1} << w)
                    : static_cast<std::int64_t>(v);
}

U ashr(U a, U s, unsigned w) {
  const U m = bv_mask(w);
  const bool neg = (a >> (w - 1)) & 1;
  if (s >= w) return neg ? m : 0;
  const U shifted = a >> s;
  return neg ? (shifted | (m ^ (m >> s))) : shifted;
}

struct Evaluator {
  std::span<const VarDecl> vars;
  std::span<const Value> values;
  IntRangeMonitor* monitor;

  std::optional<Value> run(const Term& t) {
    auto v = eval(t);
    if (v && monitor && t->sort.is_int() && (*v < monitor->lo || *v > monitor->hi)) {
      monitor->violated = true;
    }
    return v;
  }

  std::optional<Value> eval(const Term& t) {
    if (t->sort.is_bv() && t->sort.width > 64) return std::nullopt;
    const unsigned w = t->sort.is_bv() ? t->sort.width : 0;
    switch (t->op) {
      case Op::Var:
        for (std::size_t i = 0; i < vars.size() && i < values.size(); ++i) {
          if (vars[i].name == t->name) return values[i];
        }
        return std::nullopt;
      case Op::IntLit:
        if (t->value > std::numeric_limits<Value>::max() ||
            t->value < std::numeric_limits<Value>::min()) {
          return std::nullopt;
        }
        return static_cast<Value>(t->value);
      case Op::BvLit:
        return static_cast<Value>(static_cast<U>(t->value));
      case Op::BoolLit:
        return t->value != 0 ? 1 : 0;
      default:
        break;
    }

    std::vector<Value> a;
    a.reserve(t->args.size());
    for (const auto& arg : t->args) {
      auto v = run(arg);
      if (!v) return std::nullopt;
      a.push_back(*v);
    }
    auto u = [&](std::size_t i) { return static_cast<U>(a[i]); };
    auto bv = [&](U v) { return static_cast<Value>(v & bv_mask(w)); };
    const unsigned aw = t->args.empty() || !t->args[0]->sort.is_bv() ? 0 : t->args[0]->sort.width;

    switch (t->op) {
      case Op::And: {
        for (Value v : a) if (!v) return 0;
        return 1;
      }
      case Op::Or: {
        for (Value v : a) if (v) return 1;
        return 0;
      }
      case Op::Not: return a[0] ? 0 : 1;
      case Op::Implies: return (!a[0] || a[1]) ? 1 : 0;
      case Op::Ite: return a[0] ? a[1] : a[2];
      case Op::Eq: return a[0] == a[1] ? 1 : 0;
      case Op::Add: {
        Value acc = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (__builtin_add_overflow(acc, a[i], &acc)) return std::nullopt;
        }
        return acc;
      }
      case Op::Sub: {
        Value acc = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (__builtin_sub_overflow(acc, a[i], &acc)) return std::nullopt;
        }
        return acc;
      }
      case Op::Neg: {
        Value r;
        if (__builtin_sub_overflow(Value{0}, a[0], &r)) return std::nullopt;
        return r;
      }
      case Op::Mul: {
        Value acc = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) {
          if (__builtin_mul_overflow(acc, a[i], &acc)) return std::nullopt;
        }
        return acc;
      }
      case Op::Lt: return a[0] < a[1] ? 1 : 0;
      case Op::Le: return a[0] <= a[1] ? 1 : 0;
      case Op::Gt: return a[0] > a[1] ? 1 : 0;
      case Op::Ge: return a[0] >= a[1] ? 1 : 0;
      case Op::BvAdd: return bv(u(0) + u(1));
      case Op::BvSub: return bv(u(0) - u(1));
      case Op::BvMul: return bv(u(0) * u(1));
      case Op::BvNeg: return bv(U{0} - u(0));
      case Op::BvAnd: return bv(u(0) & u(1));
      case Op::BvOr: return bv(u(0) | u(1));
      case Op::BvXor: return bv(u(0) ^ u(1));
      case Op::BvNot: return bv(~u(0));
      case Op::BvShl: return u(1) >= w ? 0 : bv(u(0) << u(1));
      case Op::BvLshr: return u(1) >= w ? 0 : bv(u(0) >> u(1));
      case Op::BvAshr: return bv(ashr(u(0), u(1), w));
      case Op::BvUlt: return u(0) < u(1) ? 1 : 0;
      case Op::BvUle: return u(0) <= u(1) ? 1 : 0;
      case Op::BvUgt: return u(0) > u(1) ? 1 : 0;
      case Op::BvUge: return u(0) >= u(1) ? 1 : 0;
      case Op::BvSlt: return as_signed(u(0), aw) < as_signed(u(1), aw) ? 1 : 0;
      case Op::BvSle: return as_signed(u(0), aw) <= as_signed(u(1), aw) ? 1 : 0;
      case Op::BvSgt: return as_signed(u(0), aw) > as_signed(u(1), aw) ? 1 : 0;
      case Op::BvSge: return as_signed(u(0), aw) >= as_signed(u(1), aw) ? 1 : 0;
      case Op::Concat: return bv((u(0) << t->args[1]->sort.width) | u(1));
      case Op::Extract: return bv(u(0) >> t->index1);
      case Op::ZeroExtend: return a[0];
      case Op::SignExtend: {
        const bool neg = (u(0) >> (aw - 1)) & 1;
        return neg ? bv(u(0) | (bv_mask(w) ^ bv_mask(aw))) : a[0];
      }
      default:
        return std::nullopt;
    }
  }
};

}  // namespace

std::optional<Value> evaluate(const Term& term, std::span<const VarDecl> vars,
                              std::span<const Value> assignment, IntRangeMonitor* monitor) {
  Evaluator e{vars, assignment, monitor};
  return e.run(term);
}

}  // namespace hornfolio::chc
