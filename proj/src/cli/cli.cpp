#include "hornfolio/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hornfolio/bench/bench.hpp"
#include "hornfolio/chc/parser.hpp"
#include "hornfolio/error.hpp"
#include "hornfolio/portfolio/portfolio.hpp"

namespace hornfolio::cli {

namespace {

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_scratch() {
  if (const char* env = std::getenv("HORNFOLIO_SCRATCH"); env && *env) return env;
  return (std::filesystem::temp_directory_path() / "hornfolio").string();
}

const std::map<std::string, codegen::Encoding> kEncodings = {
    {"forward", codegen::Encoding::Forward}, {"backward", codegen::Encoding::Backward}};

struct DomainFlags {
  oracle::Value int_lo = -64;
  oracle::Value int_hi = 64;
  unsigned bv_cap = 8;

  void add(CLI::App* app) {
    app->add_option("--int-lo", int_lo, "Smallest Int value the oracle enumerates");
    app->add_option("--int-hi", int_hi, "Largest Int value the oracle enumerates");
    app->add_option("--bv-cap", bv_cap, "Widest bitvector the oracle enumerates in full")->check(CLI::Range(1, 16));
  }
  oracle::DomainSpec spec() const {
    oracle::DomainSpec d{int_lo, int_hi, bv_cap};
    if (int_lo > int_hi) throw CLI::ValidationError("--int-lo", "must not exceed --int-hi");
    return d;
  }
};

struct SolveFlags {
  std::string portfolio;
  bool builtin = false;
  double timeout_s = 60;
  std::string encoding = "auto";
  unsigned jobs = 0;
  std::string scratch = default_scratch();
  DomainFlags domain;

  void add(CLI::App* app, const std::string& timeout_name) {
    auto* cfg = app->add_option("--portfolio", portfolio, "Portfolio config file")->check(CLI::ExistingFile);
    app->add_flag("--builtin-oracle", builtin, "Use the builtin oracle actors")->excludes(cfg);
    app->add_option(timeout_name, timeout_s, "Wall budget in seconds")->check(CLI::PositiveNumber);
    app->add_option("--encoding", encoding, "forward, backward or auto (staged)")
        ->check(CLI::IsMember({"forward", "backward", "auto"}));
    app->add_option("--jobs", jobs, "Actors per group run at once (0: all)");
    app->add_option("--scratch", scratch, "Scratch directory");
    domain.add(app);
  }
  portfolio::SolveOptions options() const {
    portfolio::SolveOptions o;
    if (!portfolio.empty()) o.config_path = portfolio;
    o.builtin_oracle = builtin;
    o.timeout = portfolio::Duration(static_cast<std::int64_t>(timeout_s * 1000));
    if (encoding != "auto") o.encoding = kEncodings.at(encoding);
    o.jobs = jobs;
    o.scratch = scratch;
    o.domain = domain.spec();
    return o;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained Horn clause solving through C verifiers", "hornfolio"};
  app.set_version_flag("--version", HORNFOLIO_VERSION);
  app.require_subcommand(1);

  std::string file;

  auto* solve = app.add_subcommand("solve", "Print sat, unsat or unknown for a CHC file");
  solve->add_option("file", file, "SMT-LIB HORN file")->required();
  SolveFlags solve_flags;
  solve_flags.add(solve, "--timeout");

  auto* emit = app.add_subcommand("emit-c", "Translate a CHC file into a C program");
  emit->add_option("file", file, "SMT-LIB HORN file")->required();
  std::string emit_encoding = "forward";
  std::string emit_out;
  std::string error_style = "reach-error";
  std::string int_type = "int";
  emit->add_option("--encoding", emit_encoding, "forward or backward")->check(CLI::IsMember({"forward", "backward"}));
  emit->add_option("--out", emit_out, "Output path (default: standard output)");
  emit->add_option("--error-style", error_style, "reach-error or return-minus-one")
      ->check(CLI::IsMember({"reach-error", "return-minus-one"}));
  emit->add_option("--int-type", int_type, "C type for Int: int, long or long long")
      ->check(CLI::IsMember({"int", "long", "long long"}));

  auto* classify = app.add_subcommand("classify", "Print theory and linearity");
  classify->add_option("file", file, "SMT-LIB HORN file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Run the bounded saturation oracle");
  oracle_cmd->add_option("file", file, "SMT-LIB HORN file")->required();
  DomainFlags oracle_domain;
  oracle_domain.add(oracle_cmd);
  std::size_t max_facts = oracle::Limits{}.max_facts;
  std::size_t max_steps = oracle::Limits{}.max_steps;
  bool dump = false;
  bool parallel = false;
  oracle_cmd->add_option("--max-facts", max_facts, "Stop after this many derived facts");
  oracle_cmd->add_option("--max-steps", max_steps, "Stop after this many evaluation steps");
  oracle_cmd->add_flag("--dump-derivation", dump, "Print the refuting derivation");
  oracle_cmd->add_flag("--parallel", parallel, "Spread each round over OpenMP threads");

  auto* bench_cmd = app.add_subcommand("bench", "Run a task directory and score it against expected verdicts");
  std::string tasks_dir;
  std::string expected_file;
  std::string report_out;
  unsigned task_jobs = 1;
  bool no_timing = false;
  bench_cmd->add_option("tasks", tasks_dir, "Directory of .smt2 tasks")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--expected", expected_file, "task,verdict file")->required()->check(CLI::ExistingFile);
  SolveFlags bench_flags;
  bench_flags.add(bench_cmd, "--per-task-timeout");
  bench_cmd->add_option("--task-jobs", task_jobs, "Tasks solved at once")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", report_out, "Report path (default: standard output)");
  bench_cmd->add_flag("--no-timing", no_timing, "Omit wall times so reruns are byte-identical");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kDone;
  } catch (const CLI::CallForVersion&) {
    out << HORNFOLIO_VERSION << "\n";
    return kDone;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kDone;
    }
    err << "hornfolio: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*solve) {
      const auto system = chc::parse_chc(read_input(file));
      const auto result = portfolio::solve(system, solve_flags.options());
      for (const auto& rec : result.provenance) err << "provenance: " << rec.to_line() << "\n";
      out << portfolio::to_string(result.verdict) << "\n";
    } else if (*emit) {
      const auto system = chc::parse_chc(read_input(file));
      codegen::EmitOptions opts;
      opts.error_style = error_style == "reach-error" ? codegen::ErrorStyle::ReachError : codegen::ErrorStyle::ReturnMinusOne;
      opts.int_c_type = int_type;
      const auto program = codegen::transform(system, kEncodings.at(emit_encoding), opts);
      if (emit_out.empty()) {
        out << program.source;
      } else {
        std::ofstream f(emit_out, std::ios::binary);
        if (!(f << program.source)) throw Error(ErrorKind::SyntaxError, "cannot write " + emit_out);
      }
    } else if (*classify) {
      const auto system = chc::parse_chc(read_input(file));
      out << chc::to_string(system.theory) << " "
          << (chc::classify_linearity(system) == chc::Linearity::Linear ? "linear" : "nonlinear") << "\n";
    } else if (*oracle_cmd) {
      const auto system = chc::normalize(chc::parse_chc(read_input(file)));
      oracle::Limits limits;
      limits.max_facts = max_facts;
      limits.max_steps = max_steps;
      const auto v = oracle::saturate(system, oracle_domain.spec(), limits,
                                      parallel ? oracle::ExecutionPolicy::Parallel : oracle::ExecutionPolicy::Serial);
      out << oracle::to_string(v.kind) << "\n";
      if (v.kind == oracle::OracleVerdict::Kind::Unknown) err << "reason: " << oracle::to_string(v.reason) << "\n";
      if (dump && v.derivation) out << oracle::format_derivation(system, *v.derivation);
    } else if (*bench_cmd) {
      bench::SuiteOptions opts;
      opts.solve = bench_flags.options();
      opts.jobs = task_jobs;
      const auto report = bench::run_suite(tasks_dir, bench::load_expected(expected_file), opts);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      const std::string text = bench::format_report(report, !no_timing);
      if (report_out.empty()) {
        out << text;
      } else {
        std::ofstream f(report_out, std::ios::binary);
        if (!(f << text)) throw Error(ErrorKind::ConfigError, "cannot write " + report_out);
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "hornfolio: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "hornfolio: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "hornfolio: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kDone;
}

}  // namespace hornfolio::cli
