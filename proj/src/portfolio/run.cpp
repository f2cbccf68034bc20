#include <filesystem>
#include <fstream>

#include "hornfolio/error.hpp"
#include "hornfolio/portfolio/portfolio.hpp"

namespace hornfolio::portfolio {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

Duration until(Clock::time_point t) {
  return std::max(Duration(0), std::chrono::duration_cast<Duration>(t - Clock::now()));
}

}  // namespace

FinalResult run_portfolio(const chc::ChcSystem& input, const PortfolioPlan& plan, Duration total_budget,
                          const RunOptions& options) {
  const auto start = Clock::now();
  const auto overall_deadline = start + total_budget;
  const chc::ChcSystem system = chc::normalize(input);
  const chc::TheoryClass theory = chc::detect_theory(system);
  const bool linear = chc::classify_linearity(system) == chc::Linearity::Linear;

  std::vector<const Stage*> stages;
  for (const auto& st : plan.stages) {
    if (route_accepts(st.route, theory)) stages.push_back(&st);
  }
  if (stages.empty()) {
    throw Error(ErrorKind::PlanTheoryMismatch, "no stage routes theory " + chc::to_string(theory));
  }

  const fs::path scratch = options.scratch.empty() ? fs::temp_directory_path() / "hornfolio" : fs::path(options.scratch);
  fs::create_directories(scratch);
  std::ofstream provenance(scratch / "provenance.log", std::ios::trunc);

  FinalResult result;
  auto finish_stage = [&](StageRecord rec, const Stage& st) {
    rec.stage = st.name;
    rec.encoding = st.encoding;
    rec.route = st.route;
    provenance << rec.to_line() << "\n" << std::flush;
    result.provenance.push_back(std::move(rec));
    return result.provenance.back().verdict;
  };

  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Stage& st = *stages[i];
    if (st.encoding == codegen::Encoding::Forward && !linear) {
      StageRecord rec;
      rec.skipped = true;
      rec.note = "stage skipped: forward requires linear";
      finish_stage(std::move(rec), st);
      continue;
    }
    const auto stage_start = Clock::now();
    const auto share = std::chrono::duration_cast<Duration>(total_budget * st.budget_fraction);
    const auto deadline = std::min(stage_start + share, overall_deadline);
    const fs::path dir = scratch / ("stage" + std::to_string(i) + "-" + std::string(codegen::to_string(st.encoding)));
    fs::create_directories(dir);
    const std::string task = (dir / "task.c").string();

    try {
      codegen::EmitOptions emit;
      emit.int_c_type = options.int_c_type;
      std::ofstream(task) << codegen::transform(system, st.encoding, emit).source;
    } catch (const Error& e) {
      StageRecord rec;
      rec.note = std::string("transform failed: ") + e.what();
      finish_stage(std::move(rec), st);
      continue;
    }

    auto ctx_for = [&](const std::string& group) {
      return [&, group](const Actor& a) {
        RunContext ctx;
        ctx.witness_dir = (dir / (group + "-" + a.name)).string();
        ctx.log_path = (dir / (group + "-" + a.name + ".log")).string();
        ctx.system = &system;
        ctx.builtins = options.builtins;
        ctx.int_c_type = options.int_c_type;
        ctx.domain = options.domain;
        ctx.grace = options.grace;
        return ctx;
      };
    };

    const RunResult reach = run_parallel(st.reach, task, until(deadline), ctx_for("reach"), options.jobs, options.stop);
    FinalResult gated;
    if (st.route == Route::BV) {
      gated = gate_bv(reach);
    } else {
      gated = gate_lia(
          reach,
          [&] {
            return overflow_outcome(
                run_parallel(st.overflow, task, until(deadline), ctx_for("overflow"), options.jobs, options.stop));
          },
          [&](const std::string& witness) {
            RunContext ctx = ctx_for("validator")(*st.validator);
            ctx.witness_file = witness;
            ctx.stop = options.stop;
            return validation_outcome(run_actor(*st.validator, task, until(deadline), ctx));
          });
    }
    StageRecord rec = gated.provenance.front();
    rec.wall_ms = std::chrono::duration_cast<Duration>(Clock::now() - stage_start).count();
    const ChcVerdict v = finish_stage(std::move(rec), st);
    if (v != ChcVerdict::Unknown) {
      result.verdict = v;
      return result;
    }
  }
  return result;
}

FinalResult solve(const chc::ChcSystem& system, const SolveOptions& options) {
  const chc::TheoryClass theory = chc::detect_theory(system);
  PortfolioPlan plan;
  if (options.builtin_oracle) {
    plan = builtin_plan(theory);
  } else if (options.config_path) {
    plan = plan_for(load_config_file(*options.config_path), theory);
  } else {
    plan = default_plan(theory);
  }
  if (options.encoding) plan = restrict_encoding(plan, *options.encoding);
  RunOptions run;
  run.scratch = options.scratch;
  run.jobs = options.jobs;
  run.domain = options.domain;
  return run_portfolio(system, plan, options.timeout, run);
}

}  // namespace hornfolio::portfolio
