#include <doctest.h>

#include <algorithm>
#include <random>

#include "hornfolio/chc/parser.hpp"
#include "hornfolio/error.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

using namespace hornfolio;
using namespace hornfolio::chc;
using testsupport::load_fixture;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_chc(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::ConfigError;
}

const char* const kCorpus[] = {
    "running_example.smt2", "running_example_bv4.smt2", "running_example_query0.smt2", "even_bv4.smt2",
    "empty.smt2",         "nonlinear.smt2",         "query_constraint.smt2",     "core_bool.smt2",
    "counter_bv8.smt2",   "shifts_bv32.smt2",       "mixed_widths.smt2",         "let_ite.smt2",
};

}  // namespace

TEST_CASE("running example parses to one predicate and three rules") {
  const ChcSystem s = load_fixture("running_example.smt2");
  CHECK(s.decls.size() == 1);
  CHECK(s.decls[0].name == "A");
  CHECK(s.rules.size() == 3);
  CHECK(s.query_count() == 1);
  CHECK(s.rules[0].is_atom());
  CHECK(s.rules[1].premise.size() == 1);
  CHECK(s.rules[2].is_query());
  CHECK(s.rules[2].vars.empty());
  CHECK(classify_linearity(s) == Linearity::Linear);
  CHECK(s.theory == TheoryClass::lia());
}

TEST_CASE("empty system") {
  const ChcSystem s = parse_chc("(set-logic HORN)(check-sat)");
  CHECK(s.decls.empty());
  CHECK(s.rules.empty());
  CHECK(classify_linearity(s) == Linearity::Linear);
  CHECK(s.theory == TheoryClass::core());
  CHECK(print_chc(s) == "(set-logic HORN)\n(check-sat)\n");
}

TEST_CASE("two premise applications make a non-linear rule") {
  const ChcSystem s = parse_chc(R"(
    (set-logic HORN)
    (declare-fun A (Int) Bool)
    (declare-fun B (Int) Bool)
    (assert (forall ((x Int)) (=> (and (A x) (A (+ x 1))) (B x))))
    (check-sat))");
  REQUIRE(s.rules.size() == 1);
  CHECK(s.rules[0].premise.size() == 2);
  CHECK(classify_linearity(s) == Linearity::NonLinear);
}

TEST_CASE("linearity ignores rule order") {
  ChcSystem s = load_fixture("nonlinear.smt2");
  CHECK(classify_linearity(s) == Linearity::NonLinear);
  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(s.rules.begin(), s.rules.end(), rng);
    CHECK(classify_linearity(s) == Linearity::NonLinear);
  }
}

TEST_CASE("theory detection") {
  CHECK(load_fixture("running_example.smt2").theory == TheoryClass::lia());
  CHECK(load_fixture("running_example_bv4.smt2").theory == TheoryClass::bv({4}));
  CHECK(load_fixture("core_bool.smt2").theory == TheoryClass::core());
  CHECK(load_fixture("mixed_widths.smt2").theory == TheoryClass::bv({4, 8, 12}));
  CHECK(to_string(TheoryClass::bv({4, 12})) == "BV(4,12)");
  CHECK(parse_error_kind(R"(
    (set-logic HORN)
    (declare-fun A (Int (_ BitVec 4)) Bool)
    (assert (forall ((x Int) (y (_ BitVec 4))) (=> (= x 0) (A x y))))
    (check-sat))") == ErrorKind::MixedTheory);
}

TEST_CASE("query constraints and n-ary implication") {
  const ChcSystem s = load_fixture("query_constraint.smt2");
  REQUIRE(s.rules.size() == 3);
  const Rule& q = s.rules[2];
  CHECK(q.is_query());
  CHECK(q.premise.size() == 1);
  CHECK(print_term(q.constraint) == "(> x 10)");

  const ChcSystem n = parse_chc(R"(
    (set-logic HORN)
    (declare-fun A (Int) Bool)
    (assert (forall ((x Int)) (=> (> x 0) (< x 5) (A x))))
    (assert (forall ((x Int)) (not (and (A x) (= x 3)))))
    (check-sat))");
  CHECK(print_term(n.rules[0].constraint) == "(and (> x 0) (< x 5))");
  CHECK(n.rules[1].is_query());
}

TEST_CASE("let bindings are inlined and quoted symbols kept") {
  const ChcSystem s = load_fixture("let_ite.smt2");
  CHECK(s.decls[0].name == "Inv State");
  CHECK(print_term(s.rules[0].constraint) == "(and (= x 0) (= y 0))");
  CHECK(print_term(s.rules[1].constraint) ==
        "(and (= x1 (+ x 1)) (= y1 (ite (> x 5) (- y 2) (* 2 y))))");
}

TEST_CASE("parse errors") {
  CHECK(parse_error_kind("(set-logic HORN) (assert (forall ((x Int)) (=> (= x 1) (A x)))") ==
        ErrorKind::SyntaxError);
  CHECK(parse_error_kind(testsupport::read_file(testsupport::fixture_path("arrays.smt2"))) ==
        ErrorKind::UnsupportedFeature);
  CHECK(parse_error_kind("(set-logic HORN)(declare-fun A (Int) Bool)"
                         "(assert (forall ((x Int)) (=> (A x) (exists ((y Int)) (A y)))))") ==
        ErrorKind::UnsupportedFeature);
  CHECK(parse_error_kind("(set-logic HORN)(define-fun f ((x Int)) Int x)") == ErrorKind::UnsupportedFeature);
  CHECK(parse_error_kind("(set-logic HORN)(declare-fun A (Int) Bool)"
                         "(assert (forall ((x Int)) (=> (= x 1) (A x x))))") == ErrorKind::ArityError);
  CHECK(parse_error_kind("(set-logic HORN)(declare-fun A (Int) Bool)"
                         "(assert (forall ((x Int)) (=> (= x true) (A x))))") == ErrorKind::SortError);
  CHECK(parse_error_kind("(set-logic HORN)(declare-fun A (Int) Bool)"
                         "(assert (forall ((x Int)) (=> (= (* x x) 1) (A x))))") == ErrorKind::SortError);
  CHECK(parse_error_kind("(set-logic HORN)(declare-fun A (Int) Bool)"
                         "(assert (forall ((x Int)) (=> (or (A x) (= x 1)) (A x))))") ==
        ErrorKind::UnsupportedFeature);

  try {
    parse_chc("(set-logic HORN)\n(assert (forall ((x Int))\n  (=> (= x 1) (A x)))");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.message().find("2:") != std::string::npos);
  }
}

TEST_CASE("normalize rewrites head terms into equalities") {
  const ChcSystem s = parse_chc(R"(
    (set-logic HORN)
    (declare-fun A (Int) Bool)
    (declare-fun B (Int Int) Bool)
    (assert (forall ((x Int)) (=> (> x 0) (A (+ x 1)))))
    (assert (forall ((x Int)) (=> (A x) (B x x))))
    (check-sat))");
  CHECK_FALSE(is_normalized(s));
  const ChcSystem n = normalize(s);
  CHECK(is_normalized(n));
  CHECK(print_term(n.rules[0].head->args[0]) == "v!0");
  CHECK(print_term(n.rules[0].constraint) == "(and (> x 0) (= v!0 (+ x 1)))");
  CHECK(print_term(n.rules[1].constraint) == "(and (= v!0 x) (= v!1 x))");
  CHECK(n.rules[1].head->args[0]->name == "v!0");
  CHECK(n.rules[1].head->args[1]->name == "v!1");
  CHECK(n.rules[1].vars.size() == 3);
}

TEST_CASE("normalize leaves a normal system unchanged") {
  const ChcSystem s = load_fixture("running_example.smt2");
  CHECK(is_normalized(s));
  CHECK(structurally_equal(normalize(s), s));
}

TEST_CASE("normalize invariants over the corpus") {
  for (const char* name : kCorpus) {
    CAPTURE(name);
    const ChcSystem s = load_fixture(name);
    const ChcSystem n = normalize(s);
    CHECK(is_normalized(n));
    CHECK(structurally_equal(normalize(n), n));
    CHECK(n.rules.size() == s.rules.size());
    CHECK(n.query_count() == s.query_count());
    CHECK(classify_linearity(n) == classify_linearity(s));
    CHECK(detect_theory(n) == detect_theory(s));
    CHECK_NOTHROW(validate(n));
  }
}

TEST_CASE("print and parse round-trip over the corpus") {
  for (const char* name : kCorpus) {
    CAPTURE(name);
    const ChcSystem s = load_fixture(name);
    const std::string text = print_chc(s);
    const ChcSystem back = parse_chc(text);
    CHECK(structurally_equal(back, s));
    CHECK(print_chc(back) == text);
  }
  const ChcSystem bv = parse_chc(print_chc(load_fixture("running_example_bv4.smt2")));
  CHECK(bv.decls[0].arg_sorts[0] == Sort::bitvec(4));
  CHECK(bv.theory == TheoryClass::bv({4}));
}

TEST_CASE("round-trip over random bitvector systems") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const ChcSystem s = testsupport::random_bv4_system(rng);
    const ChcSystem back = parse_chc(print_chc(s));
    REQUIRE(structurally_equal(back, s));
  }
}

namespace {

// Random term text with correct operator arity and arbitrary operand sorts.
std::string fuzz_term(std::mt19937& rng, int depth, bool bv) {
  static const char* const int_ops[] = {"+", "-", "<", "<=", "=", "and", "not", "ite", "*", ">="};
  static const char* const bv_ops[] = {"bvadd", "bvult", "bvslt", "=", "and", "not", "ite", "bvnot", "concat", "bvshl"};
  static const char* const leaves_int[] = {"x", "b", "1", "true", "(- 3)"};
  static const char* const leaves_bv[] = {"x", "b", "#x3", "true", "#b1"};
  if (depth == 0 || rng() % 3 == 0) return (bv ? leaves_bv : leaves_int)[rng() % 5];
  const std::string op = (bv ? bv_ops : int_ops)[rng() % 10];
  int arity = 2;
  if (op == "not" || op == "bvnot") arity = 1;
  if (op == "ite") arity = 3;
  std::string out = "(" + op;
  for (int i = 0; i < arity; ++i) out += " " + fuzz_term(rng, depth - 1, bv);
  return out + ")";
}

}  // namespace

TEST_CASE("fuzzed terms are either well-sorted or rejected with SortError") {
  std::mt19937 rng(3);
  int rejected = 0;
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    const bool bv = i % 2 == 1;
    const std::string sort = bv ? "(_ BitVec 4)" : "Int";
    const std::string text = "(set-logic HORN)(declare-fun P (" + sort + ") Bool)(assert (forall ((x " + sort +
                             ") (b Bool)) (=> " + fuzz_term(rng, 4, bv) + " (P x))))(check-sat)";
    try {
      const ChcSystem s = parse_chc(text);
      for (const auto& r : s.rules) check_well_sorted(r.constraint);
      ++accepted;
    } catch (const Error& e) {
      CAPTURE(text);
      CHECK(e.kind() == ErrorKind::SortError);
      ++rejected;
    }
  }
  CHECK(rejected > 100);
  CHECK(accepted > 10);
}
