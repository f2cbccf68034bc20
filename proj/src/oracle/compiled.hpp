#pragma once

#include <vector>

#include "hornfolio/chc/eval.hpp"

namespace hornfolio::oracle::detail {

using chc::Value;

/// Term with variables resolved to indices into a rule's assignment array.
struct Node {
  chc::Op op = chc::Op::BoolLit;
  int var = -1;
  Value lit = 0;
  unsigned width = 0;      // result width for bitvector nodes
  unsigned arg_width = 0;  // width of the first bitvector operand
  unsigned index0 = 0;
  unsigned index1 = 0;
  std::vector<Node> kids;
};

/// `index_of` maps a variable name to its slot. Int literals outside the
/// 64-bit range compile to a node that never evaluates.
Node compile(const chc::Term& term, const std::vector<chc::VarDecl>& vars);

/// False when evaluation is undefined (Int overflow).
bool eval(const Node& n, const Value* vals, Value& out);

void collect_vars(const Node& n, std::vector<int>& out);

}  // namespace hornfolio::oracle::detail
