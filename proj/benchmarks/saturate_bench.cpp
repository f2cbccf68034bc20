// Serial against OpenMP saturation on workloads whose rounds have many work
// items. Both kernels must return the same fact count; the benchmark aborts
// otherwise.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <iostream>

#include "hornfolio/chc/parser.hpp"
#include "hornfolio/oracle/oracle.hpp"

using namespace hornfolio;

namespace {

// Every pair y < x over BV(8), then a chain through C: about 32k + 256 facts.
constexpr const char* kPairs = R"(
(set-logic HORN)
(declare-fun B ((_ BitVec 8)) Bool)
(declare-fun A ((_ BitVec 8) (_ BitVec 8)) Bool)
(declare-fun C ((_ BitVec 8)) Bool)
(assert (forall ((x (_ BitVec 8))) (B x)))
(assert (forall ((x (_ BitVec 8)) (y (_ BitVec 8))) (=> (and (B x) (bvult y x)) (A x y))))
(assert (forall ((x (_ BitVec 8)) (y (_ BitVec 8))) (=> (and (A x y) (= (bvand x y) #x00)) (C (bvxor x y)))))
(assert (forall ((x (_ BitVec 8)) (y (_ BitVec 8))) (=> (and (A x y) (bvult x y)) false)))
)";

// Counter over a wide Int range: many short rounds.
constexpr const char* kCounter = R"(
(set-logic HORN)
(declare-fun P (Int Int) Bool)
(assert (forall ((x Int) (y Int)) (=> (and (= x 0) (>= y 0) (<= y 40)) (P x y))))
(assert (forall ((x Int) (y Int) (z Int)) (=> (and (P x y) (= z (+ x 1)) (<= z 200)) (P z y))))
(assert (forall ((x Int) (y Int)) (=> (and (P x y) (> y 100)) false)))
)";

chc::ChcSystem load(const char* text) { return chc::normalize(chc::parse_chc(text)); }

void run(benchmark::State& state, const char* text, oracle::DomainSpec dom) {
  const auto system = load(text);
  const auto policy = state.range(0) ? oracle::ExecutionPolicy::Parallel : oracle::ExecutionPolicy::Serial;
  const auto reference = oracle::saturate(system, dom, {}, oracle::ExecutionPolicy::Serial).facts.size();
  std::size_t facts = 0;
  for (auto _ : state) {
    const auto v = oracle::saturate(system, dom, {}, policy);
    facts = v.facts.size();
    benchmark::DoNotOptimize(facts);
  }
  if (facts != reference) {
    std::cerr << "serial and parallel kernels disagree: " << reference << " vs " << facts << " facts\n";
    std::abort();
  }
  state.counters["facts"] = static_cast<double>(facts);
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Pairs(benchmark::State& state) { run(state, kPairs, {}); }

void BM_Counter(benchmark::State& state) {
  oracle::DomainSpec dom;
  dom.int_lo = 0;
  dom.int_hi = 200;
  run(state, kCounter, dom);
}

}  // namespace

BENCHMARK(BM_Pairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Counter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
