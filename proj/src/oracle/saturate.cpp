#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <unordered_map>

#ifdef HORNFOLIO_HAVE_OPENMP
#include <omp.h>
#endif

#include "compiled.hpp"
#include "hornfolio/oracle/oracle.hpp"

namespace hornfolio::oracle {

using chc::ChcSystem;
using chc::Rule;
using detail::Node;

void DomainSpec::validate() const {
  if (int_lo > int_hi) throw std::invalid_argument("integer domain is empty");
  if (bv_cap < 1 || bv_cap > 16) throw std::invalid_argument("bitvector cap must lie in [1, 16]");
}

bool DomainSpec::complete_for(const ChcSystem& system) const {
  switch (system.theory.kind) {
    case chc::TheoryClass::Kind::Core: return true;
    case chc::TheoryClass::Kind::LIA: return false;
    case chc::TheoryClass::Kind::BV:
      return std::all_of(system.theory.widths.begin(), system.theory.widths.end(),
                         [&](unsigned w) { return w <= bv_cap; });
  }
  return false;
}

bool DomainSpec::contains(const chc::Sort& sort, Value v) const {
  if (sort.is_bool()) return v == 0 || v == 1;
  if (sort.is_int()) return v >= int_lo && v <= int_hi;
  const unsigned w = std::min(sort.width, bv_cap);
  return v >= 0 && static_cast<std::uint64_t>(v) <= chc::bv_mask(w);
}

std::string_view to_string(UnknownReason reason) {
  return reason == UnknownReason::BoundExhausted ? "BoundExhausted" : "IntDomainIncomplete";
}

std::string_view to_string(OracleVerdict::Kind kind) {
  switch (kind) {
    case OracleVerdict::Kind::Sat: return "sat";
    case OracleVerdict::Kind::Unsat: return "unsat";
    case OracleVerdict::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

struct Check {
  const Node* term;    // Bool conjunct, or premise argument term
  int premise = -1;    // >= 0: compare term value with this premise's fact argument
  std::size_t arg = 0;
};

struct Level {
  int var;
  const Node* solve = nullptr;  // null: enumerate the domain
  std::vector<Check> checks;
};

struct ArgPattern {
  int var = -1;  // plain variable argument
  Node term;
};

struct RulePlan {
  const Rule* rule = nullptr;
  std::size_t index = 0;
  std::vector<std::pair<Value, Value>> range;  // per variable
  std::vector<std::size_t> premise_preds;
  std::vector<std::vector<ArgPattern>> premise;
  std::vector<Node> conjuncts;
  std::vector<Node> solve_rhs;
  std::vector<Check> initial;
  std::vector<Level> levels;
  std::vector<int> head_vars;
};

std::pair<Value, Value> range_of(const chc::Sort& s, const DomainSpec& dom) {
  if (s.is_bool()) return {0, 1};
  if (s.is_int()) return {dom.int_lo, dom.int_hi};
  return {0, static_cast<Value>(chc::bv_mask(std::min(s.width, dom.bv_cap)))};
}

bool subset(const std::vector<int>& vars, const std::vector<char>& bound) {
  return std::all_of(vars.begin(), vars.end(), [&](int v) { return bound[static_cast<std::size_t>(v)]; });
}

// Variables bound directly by premise arguments come first, then equalities
// `v = e` with e already bound, then enumeration in declaration order. Each
// check runs at the first level where all its variables are bound.
RulePlan make_plan(const ChcSystem& system, std::size_t index, const DomainSpec& dom) {
  RulePlan p;
  const Rule& r = system.rules[index];
  p.rule = &r;
  p.index = index;
  const std::size_t n = r.vars.size();
  for (const auto& v : r.vars) p.range.push_back(range_of(v.sort, dom));

  std::vector<std::pair<Check, std::vector<int>>> pending;
  std::vector<char> bound(n, 0);
  p.premise.resize(r.premise.size());
  for (std::size_t j = 0; j < r.premise.size(); ++j) {
    p.premise_preds.push_back(r.premise[j].pred);
    for (const auto& arg : r.premise[j].args) {
      ArgPattern pat;
      pat.term = detail::compile(arg, r.vars);
      if (pat.term.op == chc::Op::Var && pat.term.var >= 0) pat.var = pat.term.var;
      p.premise[j].push_back(std::move(pat));
    }
  }
  if (r.constraint->op == chc::Op::And) {
    for (const auto& c : r.constraint->args) p.conjuncts.push_back(detail::compile(c, r.vars));
  } else if (!chc::is_true_literal(r.constraint)) {
    p.conjuncts.push_back(detail::compile(r.constraint, r.vars));
  }
  // Pointers into p.premise / p.conjuncts stay valid: both are complete now.
  for (std::size_t j = 0; j < p.premise.size(); ++j) {
    for (std::size_t k = 0; k < p.premise[j].size(); ++k) {
      const ArgPattern& pat = p.premise[j][k];
      if (pat.var >= 0 && !bound[static_cast<std::size_t>(pat.var)]) {
        bound[static_cast<std::size_t>(pat.var)] = 1;
        continue;
      }
      std::vector<int> vs;
      detail::collect_vars(pat.term, vs);
      pending.push_back({Check{&pat.term, static_cast<int>(j), k}, vs});
    }
  }
  // Candidate equalities v = e usable for solving.
  std::vector<std::pair<int, const Node*>> equalities;
  for (const auto& c : p.conjuncts) {
    std::vector<int> vs;
    detail::collect_vars(c, vs);
    pending.push_back({Check{&c, -1, 0}, vs});
    if (c.op == chc::Op::Eq) {
      if (c.kids[0].op == chc::Op::Var && c.kids[0].var >= 0) equalities.push_back({c.kids[0].var, &c.kids[1]});
      if (c.kids[1].op == chc::Op::Var && c.kids[1].var >= 0) equalities.push_back({c.kids[1].var, &c.kids[0]});
    }
  }

  auto take_ready = [&](std::vector<Check>& into) {
    for (auto it = pending.begin(); it != pending.end();) {
      if (subset(it->second, bound)) {
        into.push_back(it->first);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
  };
  take_ready(p.initial);
  for (;;) {
    Level level{-1, nullptr, {}};
    for (const auto& [v, rhs] : equalities) {
      if (bound[static_cast<std::size_t>(v)]) continue;
      std::vector<int> vs;
      detail::collect_vars(*rhs, vs);
      if (subset(vs, bound)) {
        level.var = v;
        level.solve = rhs;
        break;
      }
    }
    if (level.var < 0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!bound[i]) {
          level.var = static_cast<int>(i);
          break;
        }
      }
    }
    if (level.var < 0) break;
    bound[static_cast<std::size_t>(level.var)] = 1;
    take_ready(level.checks);
    p.levels.push_back(std::move(level));
  }
  if (r.head) {
    for (const auto& a : r.head->args) p.head_vars.push_back(*r.var_index(a->name));
  }
  return p;
}

struct Justification {
  std::size_t rule;
  std::vector<Value> assignment;
  std::vector<std::size_t> premises;
};

struct Candidate {
  Fact fact;
  Justification why;
};

struct ItemResult {
  std::vector<Candidate> derived;
  std::optional<Justification> hit;
  std::size_t steps = 0;
  std::size_t polls = 0;
  bool exhausted = false;
};

struct FactHash {
  std::size_t operator()(const Fact& f) const {
    std::size_t h = f.pred * 0x9e3779b97f4a7c15ull;
    for (Value v : f.args) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
    return h;
  }
};

// One unit of work: a rule with a fixed choice of premise facts per position.
// `delta_pos` picks the position restricted to new facts; the others range over
// everything known at the start of the round.
struct WorkItem {
  const RulePlan* plan;
  int delta_pos;
  std::size_t delta_fact;
};

class Engine {
 public:
  Engine(const ChcSystem& system, const DomainSpec& dom, const Limits& limits)
      : system_(system), limits_(limits), by_pred_(system.decls.size()) {
    for (std::size_t i = 0; i < system.rules.size(); ++i) plans_.push_back(make_plan(system, i, dom));
  }

  OracleVerdict run(ExecutionPolicy policy, bool complete) {
    OracleVerdict out;
    std::size_t delta_begin = 0;
    for (std::size_t round = 0;; ++round) {
      if (limits_.should_stop && limits_.should_stop()) return exhausted(out);
      const std::size_t known = facts_.size();
      std::vector<WorkItem> query_items;
      std::vector<WorkItem> rule_items;
      for (const auto& plan : plans_) {
        auto& bucket = plan.rule->is_query() ? query_items : rule_items;
        if (plan.rule->premise.empty()) {
          if (round == 0) bucket.push_back({&plan, -1, 0});
          continue;
        }
        for (std::size_t pos = 0; pos < plan.premise_preds.size(); ++pos) {
          for (std::size_t id : by_pred_[plan.premise_preds[pos]]) {
            if (id >= delta_begin && id < known) bucket.push_back({&plan, static_cast<int>(pos), id});
          }
        }
      }
      if (query_items.empty() && rule_items.empty()) break;

      auto qres = run_items(query_items, known, policy, true);
      std::size_t hit_at = qres.size();
      for (std::size_t i = 0; i < qres.size(); ++i) {
        steps_ += qres[i].steps;
        if (qres[i].exhausted) return exhausted(out);
        if (qres[i].hit) {
          hit_at = i;
          break;
        }
      }
      if (hit_at < qres.size()) {
        out.kind = OracleVerdict::Kind::Unsat;
        out.derivation = build_derivation(*qres[hit_at].hit);
        return finish(out);
      }
      if (steps_ > limits_.max_steps) return exhausted(out);

      auto rres = run_items(rule_items, known, policy, false);
      for (auto& r : rres) {
        steps_ += r.steps;
        if (r.exhausted) return exhausted(out);
        for (auto& c : r.derived) {
          if (index_.count(c.fact)) continue;
          index_.emplace(c.fact, facts_.size());
          by_pred_[c.fact.pred].push_back(facts_.size());
          facts_.push_back(std::move(c.fact));
          why_.push_back(std::move(c.why));
          if (facts_.size() > limits_.max_facts) return exhausted(out);
        }
      }
      if (steps_ > limits_.max_steps) return exhausted(out);
      if (facts_.size() == known) break;
      delta_begin = known;
    }
    if (complete) {
      out.kind = OracleVerdict::Kind::Sat;
    } else {
      out.kind = OracleVerdict::Kind::Unknown;
      out.reason = UnknownReason::IntDomainIncomplete;
    }
    return finish(out);
  }

 private:
  OracleVerdict exhausted(OracleVerdict& out) {
    out.kind = OracleVerdict::Kind::Unknown;
    out.reason = UnknownReason::BoundExhausted;
    return finish(out);
  }

  OracleVerdict finish(OracleVerdict& out) {
    out.facts = facts_;
    std::sort(out.facts.begin(), out.facts.end());
    out.steps = steps_;
    return out;
  }

  std::vector<ItemResult> run_items(const std::vector<WorkItem>& items, std::size_t known,
                                    ExecutionPolicy policy, bool queries) {
    std::vector<ItemResult> results(items.size());
    const auto count = static_cast<long>(items.size());
    if (policy == ExecutionPolicy::Parallel) {
      std::atomic<long> first_hit{count};
#ifdef HORNFOLIO_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
      for (long i = 0; i < count; ++i) {
        if (queries && i > first_hit.load(std::memory_order_relaxed)) continue;
        results[static_cast<std::size_t>(i)] = run_item(items[static_cast<std::size_t>(i)], known);
        if (results[static_cast<std::size_t>(i)].hit || results[static_cast<std::size_t>(i)].exhausted) {
          long cur = first_hit.load();
          while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
          }
        }
      }
    } else {
      for (long i = 0; i < count; ++i) {
        auto& r = results[static_cast<std::size_t>(i)];
        r = run_item(items[static_cast<std::size_t>(i)], known);
        if (queries && (r.hit || r.exhausted)) break;
      }
    }
    return results;
  }

  ItemResult run_item(const WorkItem& item, std::size_t known) const {
    ItemResult res;
    const RulePlan& plan = *item.plan;
    std::vector<Value> vals(plan.range.size(), 0);
    std::vector<std::size_t> chosen(plan.premise_preds.size(), 0);
    choose(plan, item, known, 0, chosen, vals, res);
    return res;
  }

  bool stop_requested(ItemResult& res) const {
    if (res.exhausted) return true;
    if (res.steps > limits_.max_steps) res.exhausted = true;
    return res.exhausted;
  }

  void choose(const RulePlan& plan, const WorkItem& item, std::size_t known, std::size_t pos,
              std::vector<std::size_t>& chosen, std::vector<Value>& vals, ItemResult& res) const {
    if (res.hit || stop_requested(res)) return;
    if (pos == chosen.size()) {
      bind_and_search(plan, chosen, vals, res);
      return;
    }
    if (static_cast<int>(pos) == item.delta_pos) {
      chosen[pos] = item.delta_fact;
      choose(plan, item, known, pos + 1, chosen, vals, res);
      return;
    }
    for (std::size_t id : by_pred_[plan.premise_preds[pos]]) {
      if (id >= known) break;
      chosen[pos] = id;
      choose(plan, item, known, pos + 1, chosen, vals, res);
      if (res.hit || res.exhausted) return;
    }
  }

  void bind_and_search(const RulePlan& plan, const std::vector<std::size_t>& chosen, std::vector<Value>& vals,
                       ItemResult& res) const {
    std::vector<char> set(vals.size(), 0);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      const Fact& f = facts_[chosen[j]];
      for (std::size_t k = 0; k < f.args.size(); ++k) {
        const int v = plan.premise[j][k].var;
        if (v < 0) continue;
        const auto vi = static_cast<std::size_t>(v);
        if (set[vi] && vals[vi] != f.args[k]) return;
        if (!set[vi]) {
          const auto [lo, hi] = plan.range[vi];
          if (f.args[k] < lo || f.args[k] > hi) return;
        }
        vals[vi] = f.args[k];
        set[vi] = 1;
      }
    }
    if (!run_checks(plan.initial, chosen, vals, res)) return;
    search(plan, 0, chosen, vals, res);
  }

  bool run_checks(const std::vector<Check>& checks, const std::vector<std::size_t>& chosen,
                  const std::vector<Value>& vals, ItemResult& res) const {
    for (const Check& c : checks) {
      ++res.steps;
      Value v;
      if (!detail::eval(*c.term, vals.data(), v)) return false;
      if (c.premise >= 0) {
        if (v != facts_[chosen[static_cast<std::size_t>(c.premise)]].args[c.arg]) return false;
      } else if (!v) {
        return false;
      }
    }
    return true;
  }

  void search(const RulePlan& plan, std::size_t level, const std::vector<std::size_t>& chosen,
              std::vector<Value>& vals, ItemResult& res) const {
    if (level == plan.levels.size()) {
      emit(plan, chosen, vals, res);
      return;
    }
    const Level& l = plan.levels[level];
    const auto vi = static_cast<std::size_t>(l.var);
    const auto [lo, hi] = plan.range[vi];
    if (l.solve) {
      ++res.steps;
      Value v;
      if (!detail::eval(*l.solve, vals.data(), v) || v < lo || v > hi) return;
      vals[vi] = v;
      if (run_checks(l.checks, chosen, vals, res)) search(plan, level + 1, chosen, vals, res);
      return;
    }
    for (Value v = lo;; ++v) {
      ++res.steps;
      vals[vi] = v;
      if (run_checks(l.checks, chosen, vals, res)) search(plan, level + 1, chosen, vals, res);
      if (res.hit || stop_requested(res) || v == hi) return;
      if ((++res.polls & 0xFFF) == 0 && limits_.should_stop && limits_.should_stop()) {
        res.exhausted = true;
        return;
      }
    }
  }

  void emit(const RulePlan& plan, const std::vector<std::size_t>& chosen, const std::vector<Value>& vals,
            ItemResult& res) const {
    Justification why{plan.index, vals, chosen};
    if (!plan.rule->head) {
      res.hit = std::move(why);
      return;
    }
    Fact f{plan.rule->head->pred, {}};
    for (int v : plan.head_vars) f.args.push_back(vals[static_cast<std::size_t>(v)]);
    if (index_.count(f)) return;
    res.derived.push_back({std::move(f), std::move(why)});
  }

  Derivation build_derivation(const Justification& query) const {
    std::vector<char> needed(facts_.size(), 0);
    std::vector<std::size_t> stack(query.premises.begin(), query.premises.end());
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (needed[id]) continue;
      needed[id] = 1;
      for (std::size_t p : why_[id].premises) stack.push_back(p);
    }
    Derivation d;
    for (std::size_t id = 0; id < facts_.size(); ++id) {
      if (!needed[id]) continue;
      d.steps.push_back({why_[id].rule, why_[id].assignment, facts_[id]});
    }
    d.final_query = {query.rule, query.assignment};
    return d;
  }

  const ChcSystem& system_;
  const Limits& limits_;
  std::vector<RulePlan> plans_;
  std::vector<Fact> facts_;
  std::vector<Justification> why_;
  std::unordered_map<Fact, std::size_t, FactHash> index_;
  std::vector<std::vector<std::size_t>> by_pred_;
  std::size_t steps_ = 0;
};

}  // namespace

OracleVerdict saturate(const ChcSystem& system, const DomainSpec& dom, const Limits& limits,
                       ExecutionPolicy policy) {
  dom.validate();
  if (!chc::is_normalized(system)) throw std::invalid_argument("saturate requires a normalized system");
  if (system.query_count() == 0) {
    OracleVerdict out;
    out.kind = OracleVerdict::Kind::Sat;
    return out;
  }
  Engine engine(system, dom, limits);
  return engine.run(policy, dom.complete_for(system));
}

}  // namespace hornfolio::oracle
