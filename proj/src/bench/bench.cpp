#include "hornfolio/bench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "hornfolio/chc/parser.hpp"
#include "hornfolio/error.hpp"

namespace hornfolio::bench {

namespace fs = std::filesystem;

std::string_view to_string(Category category) {
  switch (category) {
    case Category::Confirmed: return "Confirmed";
    case Category::Unconfirmed: return "Unconfirmed";
    case Category::Wrong: return "Wrong";
    case Category::NoVerdict: return "NoVerdict";
  }
  return "?";
}

Category categorize(ChcVerdict produced, ChcVerdict expected) {
  if (produced == ChcVerdict::Unknown) return Category::NoVerdict;
  if (expected == ChcVerdict::Unknown) return Category::Unconfirmed;
  return produced == expected ? Category::Confirmed : Category::Wrong;
}

ChcVerdict parse_verdict(std::string_view text) {
  if (text == "sat") return ChcVerdict::Sat;
  if (text == "unsat") return ChcVerdict::Unsat;
  if (text == "unknown") return ChcVerdict::Unknown;
  throw Error(ErrorKind::ConfigError, "bad verdict '" + std::string(text) + "'");
}

std::map<std::string, ChcVerdict> parse_expected(std::string_view text) {
  std::map<std::string, ChcVerdict> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line == "task,verdict") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected task,verdict");
    }
    const std::string task = line.substr(0, comma);
    if (!out.emplace(task, parse_verdict(line.substr(comma + 1))).second) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": duplicate task " + task);
    }
  }
  return out;
}

std::map<std::string, ChcVerdict> load_expected(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_expected(ss.str());
}

SuiteReport run_suite(const std::string& tasks_dir, const std::map<std::string, ChcVerdict>& expected,
                      const SuiteOptions& options) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(tasks_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".smt2") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorKind::ConfigError, "no .smt2 tasks in " + tasks_dir);

  const fs::path scratch =
      options.solve.scratch.empty() ? fs::temp_directory_path() / "hornfolio-bench" : fs::path(options.solve.scratch);
  std::vector<TaskResult> rows(files.size());
  std::vector<std::string> notes(files.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      TaskResult& row = rows[i];
      row.task = files[i].stem().string();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        std::ifstream in(files[i], std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const auto system = chc::parse_chc(ss.str());
        portfolio::SolveOptions solve = options.solve;
        solve.scratch = (scratch / row.task).string();
        row.verdict = portfolio::solve(system, solve).verdict;
      } catch (const std::exception& e) {
        notes[i] = row.task + ": " + e.what();
      }
      row.wall_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::max(1u, options.jobs); ++t) pool.emplace_back(worker);
  }

  SuiteReport report;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!notes[i].empty()) report.warnings.push_back(notes[i]);
    const auto it = expected.find(rows[i].task);
    if (it == expected.end()) {
      rows[i].category = Category::NoVerdict;
      report.warnings.push_back(rows[i].task + ": no expected verdict");
    } else {
      rows[i].category = categorize(rows[i].verdict, it->second);
    }
  }
  report.rows = std::move(rows);
  return report;
}

std::string format_report(const SuiteReport& report, bool timing) {
  std::ostringstream os;
  os << "task,verdict,category,wall_ms\n";
  std::map<std::pair<ChcVerdict, Category>, std::size_t> counts;
  for (const auto& r : report.rows) {
    os << r.task << "," << portfolio::to_string(r.verdict) << "," << to_string(r.category) << ",";
    if (timing) {
      os << r.wall_ms;
    } else {
      os << "-";
    }
    os << "\n";
    ++counts[{r.verdict, r.category}];
  }
  os << "\nverdict,category,count\n";
  for (auto v : {ChcVerdict::Sat, ChcVerdict::Unsat}) {
    for (auto c : {Category::Confirmed, Category::Unconfirmed, Category::Wrong}) {
      os << portfolio::to_string(v) << "," << to_string(c) << "," << counts[{v, c}] << "\n";
    }
  }
  os << "unknown,NoVerdict," << counts[{ChcVerdict::Unknown, Category::NoVerdict}] << "\n";
  // Produced verdicts without an expected entry.
  for (auto v : {ChcVerdict::Sat, ChcVerdict::Unsat}) {
    if (const auto n = counts[{v, Category::NoVerdict}]) {
      os << portfolio::to_string(v) << ",NoVerdict," << n << "\n";
    }
  }
  os << "Out of," << report.rows.size() << "\n";
  return os.str();
}

}  // namespace hornfolio::bench
