#include <cctype>
#include <sstream>
#include <unordered_set>

#include "hornfolio/chc/parser.hpp"

namespace hornfolio::chc {

std::string print_symbol(std::string_view name) {
  static const std::unordered_set<std::string_view> reserved = {
      "!", "_", "as", "let", "exists", "forall", "match", "par", "true", "false",
      "BINARY", "DECIMAL", "HEXADECIMAL", "NUMERAL", "STRING"};
  static constexpr std::string_view extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) &&
                !reserved.count(name);
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string_view::npos) {
      simple = false;
    }
  }
  if (simple) return std::string(name);
  return "|" + std::string(name) + "|";
}

namespace {

void print(std::ostream& os, const Term& t) {
  switch (t->op) {
    case Op::Var:
      os << print_symbol(t->name);
      return;
    case Op::IntLit:
      if (t->value < 0) {
        os << "(- " << BigInt(-t->value) << ")";
      } else {
        os << t->value;
      }
      return;
    case Op::BvLit:
      os << "(_ bv" << t->value << " " << t->sort.width << ")";
      return;
    case Op::BoolLit:
      os << (t->value != 0 ? "true" : "false");
      return;
    case Op::Extract:
      os << "((_ extract " << t->index0 << " " << t->index1 << ") ";
      print(os, t->args[0]);
      os << ")";
      return;
    case Op::ZeroExtend:
    case Op::SignExtend:
      os << "((_ " << op_symbol(t->op) << " " << t->index0 << ") ";
      print(os, t->args[0]);
      os << ")";
      return;
    default:
      break;
  }
  os << "(" << op_symbol(t->op);
  for (const auto& a : t->args) {
    os << " ";
    print(os, a);
  }
  os << ")";
}

void print_app(std::ostream& os, const ChcSystem& system, const PredicateApp& app) {
  const std::string name = print_symbol(system.decls[app.pred].name);
  if (app.args.empty()) {
    os << name;
    return;
  }
  os << "(" << name;
  for (const auto& a : app.args) {
    os << " ";
    print(os, a);
  }
  os << ")";
}

}  // namespace

std::string print_term(const Term& term) {
  std::ostringstream os;
  print(os, term);
  return os.str();
}

std::string print_chc(const ChcSystem& system) {
  std::ostringstream os;
  os << "(set-logic HORN)\n";
  for (const auto& decl : system.decls) {
    os << "(declare-fun " << print_symbol(decl.name) << " (";
    for (std::size_t i = 0; i < decl.arg_sorts.size(); ++i) {
      os << (i ? " " : "") << to_string(decl.arg_sorts[i]);
    }
    os << ") Bool)\n";
  }
  for (const auto& rule : system.rules) {
    std::vector<std::string> body;
    if (rule.constraint->op == Op::And) {
      for (const auto& c : rule.constraint->args) body.push_back(print_term(c));
    } else if (!is_true_literal(rule.constraint)) {
      body.push_back(print_term(rule.constraint));
    }
    for (const auto& app : rule.premise) {
      std::ostringstream a;
      print_app(a, system, app);
      body.push_back(a.str());
    }
    std::ostringstream head;
    if (rule.head) {
      print_app(head, system, *rule.head);
    } else {
      head << "false";
    }

    std::string clause;
    if (body.empty()) {
      clause = head.str();
    } else {
      std::string lhs;
      if (body.size() == 1) {
        lhs = body.front();
      } else {
        lhs = "(and";
        for (const auto& b : body) lhs += " " + b;
        lhs += ")";
      }
      clause = "(=> " + lhs + " " + head.str() + ")";
    }
    os << "(assert ";
    if (!rule.vars.empty()) {
      os << "(forall (";
      for (std::size_t i = 0; i < rule.vars.size(); ++i) {
        os << (i ? " " : "") << "(" << print_symbol(rule.vars[i].name) << " "
           << to_string(rule.vars[i].sort) << ")";
      }
      os << ") " << clause << ")";
    } else {
      os << clause;
    }
    os << ")\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace hornfolio::chc
