#include "hornfolio/chc/term.hpp"

#include "hornfolio/error.hpp"

namespace hornfolio::chc {

Sort Sort::bitvec(unsigned width) {
  if (width == 0) {
    throw Error(ErrorKind::SortError, "bitvector width must be positive");
  }
  return {SortKind::BitVec, width};
}

std::string to_string(const Sort& sort) {
  switch (sort.kind) {
    case SortKind::Bool: return "Bool";
    case SortKind::Int: return "Int";
    case SortKind::BitVec: return "(_ BitVec " + std::to_string(sort.width) + ")";
  }
  return "?";
}

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Var: case Op::IntLit: case Op::BvLit: case Op::BoolLit: return "";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    case Op::Eq: return "=";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Neg: return "-";
    case Op::Mul: return "*";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::BvAdd: return "bvadd";
    case Op::BvSub: return "bvsub";
    case Op::BvMul: return "bvmul";
    case Op::BvNeg: return "bvneg";
    case Op::BvAnd: return "bvand";
    case Op::BvOr: return "bvor";
    case Op::BvXor: return "bvxor";
    case Op::BvNot: return "bvnot";
    case Op::BvShl: return "bvshl";
    case Op::BvLshr: return "bvlshr";
    case Op::BvAshr: return "bvashr";
    case Op::BvUlt: return "bvult";
    case Op::BvUle: return "bvule";
    case Op::BvUgt: return "bvugt";
    case Op::BvUge: return "bvuge";
    case Op::BvSlt: return "bvslt";
    case Op::BvSle: return "bvsle";
    case Op::BvSgt: return "bvsgt";
    case Op::BvSge: return "bvsge";
    case Op::Concat: return "concat";
    case Op::Extract: return "extract";
    case Op::ZeroExtend: return "zero_extend";
    case Op::SignExtend: return "sign_extend";
  }
  return "";
}

Term var(std::string name, Sort sort) {
  auto node = std::make_shared<TermNode>();
  node->op = Op::Var;
  node->sort = sort;
  node->name = std::move(name);
  return node;
}

Term int_lit(BigInt value) {
  auto node = std::make_shared<TermNode>();
  node->op = Op::IntLit;
  node->sort = Sort::integer();
  node->value = std::move(value);
  return node;
}

Term bv_lit(BigInt value, unsigned width) {
  const Sort sort = Sort::bitvec(width);
  if (value < 0 || value >= (BigInt(1) << width)) {
    throw Error(ErrorKind::SortError, "bitvector literal out of range for width " +
                                          std::to_string(width));
  }
  auto node = std::make_shared<TermNode>();
  node->op = Op::BvLit;
  node->sort = sort;
  node->value = std::move(value);
  return node;
}

Term bool_lit(bool value) {
  auto node = std::make_shared<TermNode>();
  node->op = Op::BoolLit;
  node->sort = Sort::boolean();
  node->value = value ? 1 : 0;
  return node;
}

namespace {

[[noreturn]] void sort_error(Op op, const std::string& what) {
  throw Error(ErrorKind::SortError, std::string(op_symbol(op)) + ": " + what);
}

void require_arity(Op op, const std::vector<Term>& args, std::size_t min, std::size_t max) {
  if (args.size() < min || args.size() > max) {
    throw Error(ErrorKind::ArityError, std::string(op_symbol(op)) + " expects " +
                                           (min == max ? std::to_string(min)
                                                       : std::to_string(min) + ".." +
                                                             (max == SIZE_MAX ? "n" : std::to_string(max))) +
                                           " operands, got " + std::to_string(args.size()));
  }
}

void require_all(Op op, const std::vector<Term>& args, SortKind kind) {
  for (const auto& a : args) {
    if (a->sort.kind != kind) {
      sort_error(op, "operand of sort " + to_string(a->sort) + " not allowed");
    }
  }
}

void require_same(Op op, const std::vector<Term>& args) {
  for (const auto& a : args) {
    if (a->sort != args.front()->sort) {
      sort_error(op, "operands of different sorts " + to_string(args.front()->sort) + " and " +
                         to_string(a->sort));
    }
  }
}

Sort infer_sort(Op op, const std::vector<Term>& args, unsigned index0, unsigned index1) {
  constexpr auto many = SIZE_MAX;
  switch (op) {
    case Op::Var: case Op::IntLit: case Op::BvLit: case Op::BoolLit:
      sort_error(op, "leaf passed to make_app");
    case Op::And: case Op::Or:
      require_arity(op, args, 2, many);
      require_all(op, args, SortKind::Bool);
      return Sort::boolean();
    case Op::Not:
      require_arity(op, args, 1, 1);
      require_all(op, args, SortKind::Bool);
      return Sort::boolean();
    case Op::Implies:
      require_arity(op, args, 2, 2);
      require_all(op, args, SortKind::Bool);
      return Sort::boolean();
    case Op::Ite:
      require_arity(op, args, 3, 3);
      if (!args[0]->sort.is_bool()) sort_error(op, "condition must be Bool");
      if (args[1]->sort != args[2]->sort) sort_error(op, "branches of different sorts");
      return args[1]->sort;
    case Op::Eq:
      require_arity(op, args, 2, 2);
      require_same(op, args);
      return Sort::boolean();
    case Op::Add: case Op::Sub:
      require_arity(op, args, 2, many);
      require_all(op, args, SortKind::Int);
      return Sort::integer();
    case Op::Neg:
      require_arity(op, args, 1, 1);
      require_all(op, args, SortKind::Int);
      return Sort::integer();
    case Op::Mul: {
      require_arity(op, args, 2, many);
      require_all(op, args, SortKind::Int);
      std::size_t non_literal = 0;
      for (const auto& a : args) non_literal += a->op == Op::IntLit ? 0 : 1;
      if (non_literal > 1) {
        sort_error(op, "non-linear multiplication (at most one non-literal operand)");
      }
      return Sort::integer();
    }
    case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
      require_arity(op, args, 2, 2);
      require_all(op, args, SortKind::Int);
      return Sort::boolean();
    case Op::BvAdd: case Op::BvSub: case Op::BvMul: case Op::BvAnd: case Op::BvOr:
    case Op::BvXor: case Op::BvShl: case Op::BvLshr: case Op::BvAshr:
      require_arity(op, args, 2, 2);
      require_all(op, args, SortKind::BitVec);
      require_same(op, args);
      return args[0]->sort;
    case Op::BvNeg: case Op::BvNot:
      require_arity(op, args, 1, 1);
      require_all(op, args, SortKind::BitVec);
      return args[0]->sort;
    case Op::BvUlt: case Op::BvUle: case Op::BvUgt: case Op::BvUge:
    case Op::BvSlt: case Op::BvSle: case Op::BvSgt: case Op::BvSge:
      require_arity(op, args, 2, 2);
      require_all(op, args, SortKind::BitVec);
      require_same(op, args);
      return Sort::boolean();
    case Op::Concat:
      require_arity(op, args, 2, 2);
      require_all(op, args, SortKind::BitVec);
      return Sort::bitvec(args[0]->sort.width + args[1]->sort.width);
    case Op::Extract:
      require_arity(op, args, 1, 1);
      require_all(op, args, SortKind::BitVec);
      if (index0 < index1 || index0 >= args[0]->sort.width) {
        sort_error(op, "indices " + std::to_string(index0) + " " + std::to_string(index1) +
                           " invalid for width " + std::to_string(args[0]->sort.width));
      }
      return Sort::bitvec(index0 - index1 + 1);
    case Op::ZeroExtend: case Op::SignExtend:
      require_arity(op, args, 1, 1);
      require_all(op, args, SortKind::BitVec);
      return Sort::bitvec(args[0]->sort.width + index0);
  }
  sort_error(op, "unknown operator");
}

}  // namespace

Term make_app(Op op, std::vector<Term> args, unsigned index0, unsigned index1) {
  for (const auto& a : args) {
    if (!a) throw Error(ErrorKind::SortError, "null operand");
  }
  auto node = std::make_shared<TermNode>();
  node->sort = infer_sort(op, args, index0, index1);
  node->op = op;
  node->args = std::move(args);
  if (op == Op::Extract || op == Op::ZeroExtend || op == Op::SignExtend) {
    node->index0 = index0;
    node->index1 = index1;
  }
  return node;
}

bool is_true_literal(const Term& term) {
  return term->op == Op::BoolLit && term->value != 0;
}

Term conjoin(std::vector<Term> conjuncts) {
  std::vector<Term> kept;
  for (auto& c : conjuncts) {
    if (!is_true_literal(c)) kept.push_back(std::move(c));
  }
  if (kept.empty()) return bool_lit(true);
  if (kept.size() == 1) return kept.front();
  return make_app(Op::And, std::move(kept));
}

void check_well_sorted(const Term& term) {
  switch (term->op) {
    case Op::Var:
      if (term->sort.is_bv() && term->sort.width == 0) {
        throw Error(ErrorKind::SortError, "zero-width variable " + term->name);
      }
      return;
    case Op::IntLit:
      if (!term->sort.is_int()) throw Error(ErrorKind::SortError, "integer literal not Int");
      return;
    case Op::BvLit:
      if (!term->sort.is_bv() || term->value < 0 ||
          term->value >= (BigInt(1) << term->sort.width)) {
        throw Error(ErrorKind::SortError, "bitvector literal out of range");
      }
      return;
    case Op::BoolLit:
      if (!term->sort.is_bool()) throw Error(ErrorKind::SortError, "Bool literal not Bool");
      return;
    default:
      break;
  }
  for (const auto& a : term->args) check_well_sorted(a);
  if (infer_sort(term->op, term->args, term->index0, term->index1) != term->sort) {
    throw Error(ErrorKind::SortError,
                std::string(op_symbol(term->op)) + ": recorded sort does not match operands");
  }
}

bool structurally_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->sort != b->sort || a->name != b->name || a->value != b->value ||
      a->index0 != b->index0 || a->index1 != b->index1 || a->args.size() != b->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

void collect_vars(const Term& term, std::set<std::string>& out) {
  if (term->op == Op::Var) {
    out.insert(term->name);
    return;
  }
  for (const auto& a : term->args) collect_vars(a, out);
}

bool mentions_sort(const Term& term, SortKind kind) {
  if (term->sort.kind == kind) return true;
  for (const auto& a : term->args) {
    if (mentions_sort(a, kind)) return true;
  }
  return false;
}

void collect_bv_widths(const Term& term, std::set<unsigned>& out) {
  if (term->sort.is_bv()) out.insert(term->sort.width);
  for (const auto& a : term->args) collect_bv_widths(a, out);
}

}  // namespace hornfolio::chc
