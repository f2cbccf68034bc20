#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "hornfolio/chc/parser.hpp"
#include "hornfolio/codegen/codegen.hpp"
#include "hornfolio/error.hpp"
#include "hornfolio/oracle/oracle.hpp"
#include "support/brute_force.hpp"
#include "support/c_harness.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

using namespace hornfolio;
using namespace hornfolio::oracle;
using testsupport::load_fixture;
using Kind = OracleVerdict::Kind;

namespace {

DomainSpec int_domain(Value lo, Value hi) {
  DomainSpec d;
  d.int_lo = lo;
  d.int_hi = hi;
  return d;
}

std::vector<Fact> unary_facts(std::size_t pred, Value from, Value to, Value step = 1) {
  std::vector<Fact> out;
  for (Value v = from; v <= to; v += step) out.push_back({pred, {v}});
  return out;
}

}  // namespace

TEST_CASE("running example is refuted after exactly eleven facts") {
  const auto s = load_fixture("running_example.smt2");
  const auto v = saturate(s, int_domain(0, 20));
  REQUIRE(v.kind == Kind::Unsat);
  CHECK(v.facts == unary_facts(0, 1, 11));
  REQUIRE(v.derivation);
  const Derivation& d = *v.derivation;
  REQUIRE(d.steps.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(d.steps[i].fact == Fact{0, {static_cast<Value>(i + 1)}});
  CHECK(d.steps[0].rule == 0);
  CHECK(d.final_query.rule == 2);
  CHECK(check_derivation(s, d, int_domain(0, 20)));
  CHECK(format_derivation(s, d).find("rule 1 {x=11} => A(11)\n") != std::string::npos);
}

TEST_CASE("even numbers in BV(4) never reach 3") {
  const auto v = saturate(load_fixture("even_bv4.smt2"));
  REQUIRE(v.kind == Kind::Sat);
  CHECK(v.facts == unary_facts(0, 0, 14, 2));
}

TEST_CASE("fixpoint over an incomplete Int domain is not a Sat claim") {
  const auto v = saturate(load_fixture("running_example_query0.smt2"), int_domain(0, 20));
  REQUIRE(v.kind == Kind::Unknown);
  CHECK(v.reason == UnknownReason::IntDomainIncomplete);
  CHECK(v.facts == unary_facts(0, 1, 20));
}

TEST_CASE("check_derivation rejects tampered derivations") {
  const auto s = load_fixture("running_example.smt2");
  const auto dom = int_domain(0, 20);
  const auto v = saturate(s, dom);
  REQUIRE(v.derivation);

  Derivation perturbed = *v.derivation;
  perturbed.steps[4].assignment[0] += 1;
  CHECK_FALSE(check_derivation(s, perturbed, dom));

  Derivation bad_fact = *v.derivation;
  bad_fact.steps[3].fact.args[0] = 7;
  CHECK_FALSE(check_derivation(s, bad_fact, dom));

  Derivation dropped = *v.derivation;
  dropped.steps.erase(dropped.steps.begin() + 5);
  CHECK_FALSE(check_derivation(s, dropped, dom));

  Derivation empty;
  empty.final_query = {2, {}};
  CHECK_FALSE(check_derivation(s, empty, dom));

  Derivation out_of_domain = *v.derivation;
  CHECK_FALSE(check_derivation(s, out_of_domain, int_domain(0, 5)));
}

TEST_CASE("queries with constraints and non-linear rules") {
  const auto q = saturate(load_fixture("query_constraint.smt2"));
  REQUIRE(q.kind == Kind::Unsat);
  CHECK(q.derivation->steps.back().fact == Fact{0, {12}});

  const auto n = saturate(load_fixture("nonlinear.smt2"), int_domain(-8, 8));
  REQUIRE(n.kind == Kind::Unsat);
  CHECK(check_derivation(load_fixture("nonlinear.smt2"), *n.derivation, int_domain(-8, 8)));
  CHECK(n.derivation->steps.size() == 3);
}

TEST_CASE("core theory is enumerated completely") {
  const auto v = saturate(chc::normalize(load_fixture("core_bool.smt2")));
  REQUIRE(v.kind == Kind::Sat);
  CHECK(v.facts == std::vector<Fact>{{0, {0, 1}}, {0, {1, 0}}});
}

TEST_CASE("wide bitvectors make the domain incomplete") {
  const auto s = chc::normalize(load_fixture("counter_bv8.smt2"));
  DomainSpec small;
  small.bv_cap = 4;
  CHECK_FALSE(small.complete_for(s));
  const auto v = saturate(s, small);
  CHECK(v.kind == Kind::Unknown);
  CHECK(v.reason == UnknownReason::IntDomainIncomplete);
  CHECK(DomainSpec{}.complete_for(s));
}

TEST_CASE("zero queries are satisfiable immediately") {
  const auto s = chc::parse_chc(
      "(set-logic HORN)(declare-fun A (Int) Bool)(assert (forall ((x Int)) (=> (A x) (A (+ x 1)))))(check-sat)");
  const auto v = saturate(chc::normalize(s));
  CHECK(v.kind == Kind::Sat);
  CHECK(v.facts.empty());
}

TEST_CASE("preconditions and limits") {
  const auto raw = chc::parse_chc(
      "(set-logic HORN)(declare-fun A (Int) Bool)(assert (A 0))"
      "(assert (forall ((x Int)) (=> (A x) (A (+ x 1)))))(assert (=> (A 30) false))(check-sat)");
  CHECK_THROWS_AS(saturate(raw), std::invalid_argument);
  CHECK_THROWS_AS(saturate(chc::normalize(raw), int_domain(3, 2)), std::invalid_argument);
  DomainSpec cap;
  cap.bv_cap = 17;
  CHECK_THROWS_AS(saturate(chc::normalize(raw), cap), std::invalid_argument);

  const auto s = chc::normalize(raw);
  Limits few_facts;
  few_facts.max_facts = 10;
  auto v = saturate(s, {}, few_facts);
  CHECK(v.kind == Kind::Unknown);
  CHECK(v.reason == UnknownReason::BoundExhausted);

  Limits few_steps;
  few_steps.max_steps = 50;
  v = saturate(s, {}, few_steps);
  CHECK(v.kind == Kind::Unknown);
  CHECK(v.reason == UnknownReason::BoundExhausted);

  Limits stopped;
  stopped.should_stop = [] { return true; };
  v = saturate(s, {}, stopped);
  CHECK(v.reason == UnknownReason::BoundExhausted);

  CHECK(saturate(s).kind == Kind::Unsat);
}

TEST_CASE("monotone in the limits") {
  const auto s = load_fixture("running_example.smt2");
  std::size_t first_unsat = 0;
  for (std::size_t facts = 1; facts <= 20; ++facts) {
    Limits l;
    l.max_facts = facts;
    const auto v = saturate(s, int_domain(0, 20), l);
    if (v.kind == Kind::Unsat && !first_unsat) first_unsat = facts;
    if (first_unsat) CHECK(v.kind == Kind::Unsat);
  }
  CHECK(first_unsat == 11);
}

TEST_CASE("verdict and fact count do not depend on rule order") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const auto s = chc::normalize(testsupport::random_bv4_system(rng));
    const auto base = saturate(s);
    auto shuffled = s;
    std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), rng);
    const auto other = saturate(shuffled);
    CHECK(other.kind == base.kind);
    CHECK(other.facts.size() == base.facts.size());
  }
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    const auto s = chc::normalize(testsupport::random_bv4_system(rng));
    const auto a = saturate(s, {}, {}, ExecutionPolicy::Serial);
    const auto b = saturate(s, {}, {}, ExecutionPolicy::Parallel);
    CHECK(a.kind == b.kind);
    CHECK(a.facts == b.facts);
    CHECK(a.steps == b.steps);
    if (a.derivation) CHECK(derivation_to_json(s, *a.derivation) == derivation_to_json(s, *b.derivation));
  }
}

TEST_CASE("random BV(4) systems agree with brute force") {
  std::mt19937_64 rng(2024);
  int sat = 0;
  int unsat = 0;
  for (int i = 0; i < 100; ++i) {
    const auto raw = testsupport::random_bv4_system(rng);
    const auto s = chc::normalize(raw);
    const auto v = saturate(s);
    const auto b = testsupport::brute_force(raw);
    CAPTURE(chc::print_chc(raw));
    REQUIRE(v.kind != Kind::Unknown);
    CHECK((v.kind == Kind::Unsat) == b.unsat);
    if (v.kind == Kind::Unsat) {
      ++unsat;
      CHECK(check_derivation(s, *v.derivation));
    } else {
      ++sat;
      std::set<std::pair<std::size_t, std::vector<std::int64_t>>> got;
      for (const auto& f : v.facts) got.insert({f.pred, f.args});
      CHECK(got == b.facts);
    }
  }
  MESSAGE("sat=" << sat << " unsat=" << unsat);
  CHECK(sat > 10);
  CHECK(unsat > 10);
}

TEST_CASE("derivations survive a JSON round trip") {
  const auto s = load_fixture("running_example.smt2");
  const auto v = saturate(s, int_domain(0, 20));
  const auto json = derivation_to_json(s, *v.derivation);
  const auto back = derivation_from_json(s, json);
  CHECK(derivation_to_json(s, back) == json);
  CHECK(check_derivation(s, back, int_domain(0, 20)));
  CHECK_THROWS_AS(derivation_from_json(s, "{\"steps\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(derivation_from_json(s, "not json"), std::invalid_argument);
}

TEST_CASE("replay inputs for the running example") {
  const auto s = load_fixture("running_example.smt2");
  const auto v = saturate(s, int_domain(0, 20));
  const auto in = replay_inputs(s, *v.derivation);
  // 1 atom group + 10 step groups of (selector, x), then the bare query selector
  REQUIRE(in.size() == 23);
  CHECK(in[0] == 0);
  CHECK(in[1] == 1);
  CHECK(in[20] == 1);
  CHECK(in[21] == 11);
  CHECK(in[22] == 2);

  const auto n = load_fixture("nonlinear.smt2");
  const auto nv = saturate(n, int_domain(-8, 8));
  try {
    replay_inputs(n, *nv.derivation);
    FAIL("expected ReplayUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReplayUnsupported);
  }
}

TEST_CASE("replay drives the compiled forward program to the error") {
  const std::string dir = testsupport::make_temp_dir("oracle-replay");
  for (const char* name : {"running_example.smt2", "query_constraint.smt2", "running_example_bv4.smt2"}) {
    CAPTURE(name);
    const auto s = chc::normalize(load_fixture(name));
    const auto v = saturate(s, int_domain(0, 20));
    REQUIRE(v.kind == Kind::Unsat);
    const auto bin = testsupport::compile_with_stubs(codegen::transform_forward(s).source, dir);
    REQUIRE_MESSAGE(bin.ok, bin.diagnostics);
    auto inputs = replay_inputs(s, *v.derivation);
    CHECK(testsupport::run_scripted(bin.binary, inputs, dir) == testsupport::kErrorExit);
    inputs.pop_back();  // without the final query selector the program runs dry
    CHECK(testsupport::run_scripted(bin.binary, inputs, dir) == testsupport::kExhaustedExit);
  }
  std::filesystem::remove_all(dir);
}
