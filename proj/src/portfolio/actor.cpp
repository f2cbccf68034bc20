#include "hornfolio/portfolio/actor.hpp"

#include "regex_util.hpp"

#include <algorithm>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <semaphore>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hornfolio::portfolio {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string_view to_string(ActorKind kind) {
  switch (kind) {
    case ActorKind::Reachability: return "reach";
    case ActorKind::Overflow: return "overflow";
    case ActorKind::WitnessValidator: return "validator";
    case ActorKind::Builtin: return "builtin";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Safe: return "Safe";
    case Verdict::Unsafe: return "Unsafe";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(UnknownReason reason) {
  switch (reason) {
    case UnknownReason::Timeout: return "Timeout";
    case UnknownReason::ToolError: return "ToolError";
    case UnknownReason::AmbiguousOutput: return "AmbiguousOutput";
    case UnknownReason::NoMatch: return "NoMatch";
  }
  return "?";
}

RunResult RunResult::unknown(std::string actor, UnknownReason reason) {
  RunResult r;
  r.actor = std::move(actor);
  r.reasons.insert(reason);
  return r;
}

std::string expand_command(const std::string& tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        const auto it = values.find(tmpl.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += '\'';
          for (char c : it->second) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
          out += '\'';
          i = close + 1;
          replaced = true;
        }
      }
    }
    if (!replaced) out += tmpl[i++];
  }
  return out;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool matches(const std::string& pattern, const std::string& text) {
  if (pattern.empty()) return false;
  return std::regex_search(text, detail::compile_pattern(pattern));
}

std::optional<std::string> first_witness(const std::string& dir) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (e.is_regular_file()) files.push_back(e.path().string());
  }
  if (files.empty()) return std::nullopt;
  std::sort(files.begin(), files.end());
  return files.front();
}

Duration effective_budget(const Actor& actor, Duration budget) {
  if (actor.wall_s > 0) {
    budget = std::min(budget, Duration(static_cast<std::int64_t>(actor.wall_s * 1000)));
  }
  return std::max(budget, Duration(0));
}

RunResult run_process(const Actor& actor, const std::string& input_file, Duration budget, const RunContext& ctx) {
  const auto start = Clock::now();
  const auto deadline = start + budget;
  auto elapsed = [&] { return std::chrono::duration_cast<Duration>(Clock::now() - start).count(); };

  std::map<std::string, std::string> values = {
      {"input_file", input_file},
      {"witness_dir", ctx.witness_dir},
      {"timeout_s", std::to_string(std::max<std::int64_t>(1, (budget.count() + 999) / 1000))},
      {"witness_file", ctx.witness_file.value_or("")},
  };
  const std::string cmd = expand_command(actor.command, values);
  const std::string log = ctx.log_path;

  const pid_t pid = ::fork();
  if (pid < 0) {
    auto r = RunResult::unknown(actor.name, UnknownReason::ToolError);
    r.log_path = log;
    return r;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    const int out = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int in = ::open("/dev/null", O_RDONLY);
    if (out >= 0) {
      ::dup2(out, STDOUT_FILENO);
      ::dup2(out, STDERR_FILENO);
    }
    if (in >= 0) ::dup2(in, STDIN_FILENO);
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  int status = 0;
  bool timed_out = false;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline || ctx.stop.stop_requested()) {
      timed_out = true;
      ::kill(-pid, SIGTERM);
      const auto hard = Clock::now() + ctx.grace;
      bool exited = false;
      while (Clock::now() < hard) {
        if (::waitpid(pid, &status, WNOHANG) == pid) {
          exited = true;
          break;
        }
        std::this_thread::sleep_for(Duration(2));
      }
      if (!exited) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
      }
      break;
    }
    std::this_thread::sleep_for(Duration(2));
  }
  ::kill(-pid, SIGKILL);  // stray children of the shell

  RunResult r;
  r.actor = actor.name;
  r.log_path = log;
  r.wall_ms = elapsed();
  if (timed_out) {
    r.reasons.insert(UnknownReason::Timeout);
    return r;
  }
  const std::string output = slurp(log);
  bool safe = false;
  bool unsafe = false;
  try {
    safe = matches(actor.safe_pattern, output);
    unsafe = matches(actor.unsafe_pattern, output);
    r.overflow_seen = matches(actor.overflow_pattern, output);
  } catch (const std::regex_error&) {
    r.reasons.insert(UnknownReason::ToolError);
    return r;
  }
  if (safe && unsafe) {
    r.reasons.insert(UnknownReason::AmbiguousOutput);
  } else if (safe) {
    r.verdict = Verdict::Safe;
  } else if (unsafe) {
    r.verdict = Verdict::Unsafe;
    r.witness = first_witness(ctx.witness_dir);
  } else if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    r.reasons.insert(UnknownReason::ToolError);
  } else {
    r.reasons.insert(UnknownReason::NoMatch);
  }
  return r;
}

}  // namespace

RunResult run_actor(const Actor& actor, const std::string& input_file, Duration budget, const RunContext& ctx) {
  budget = effective_budget(actor, budget);
  std::error_code ec;
  if (!ctx.witness_dir.empty()) fs::create_directories(ctx.witness_dir, ec);
  if (!ctx.log_path.empty()) fs::create_directories(fs::path(ctx.log_path).parent_path(), ec);

  if (!actor.builtin.empty()) {
    const auto start = Clock::now();
    const BuiltinRegistry& reg = ctx.builtins ? *ctx.builtins : default_builtins();
    const auto it = reg.find(actor.builtin);
    if (it == reg.end() || !ctx.system) return RunResult::unknown(actor.name, UnknownReason::ToolError);
    BuiltinRequest req;
    req.system = ctx.system;
    req.input_file = input_file;
    req.witness_dir = ctx.witness_dir;
    req.witness_file = ctx.witness_file;
    req.int_c_type = ctx.int_c_type;
    req.domain = ctx.domain;
    req.deadline = start + budget;
    req.stop = ctx.stop;
    RunResult r;
    try {
      r = it->second(actor, req);
    } catch (const std::exception&) {
      r = RunResult::unknown(actor.name, UnknownReason::ToolError);
    }
    r.actor = actor.name;
    r.wall_ms = std::chrono::duration_cast<Duration>(Clock::now() - start).count();
    if (!ctx.log_path.empty()) {
      std::ofstream(ctx.log_path) << "builtin " << actor.builtin << ": " << to_string(r.verdict) << "\n";
      r.log_path = ctx.log_path;
    }
    return r;
  }
  if (actor.command.empty()) return RunResult::unknown(actor.name, UnknownReason::ToolError);
  return run_process(actor, input_file, budget, ctx);
}

RunResult run_parallel(const std::vector<Actor>& group, const std::string& input_file, Duration budget,
                       const std::function<RunContext(const Actor&)>& ctx_for, unsigned jobs,
                       std::stop_token stop) {
  if (group.empty()) return RunResult::unknown("", UnknownReason::NoMatch);
  const auto start = Clock::now();
  const auto deadline = start + budget;
  const std::size_t n = group.size();

  std::stop_source cancel;
  std::stop_callback forward(stop, [&] { cancel.request_stop(); });
  std::mutex m;
  std::condition_variable cv;
  std::vector<std::optional<RunResult>> results(n);
  std::size_t done = 0;
  std::optional<std::size_t> winner;
  std::counting_semaphore<> slots(static_cast<std::ptrdiff_t>(jobs == 0 ? n : std::min<std::size_t>(jobs, n)));

  auto post = [&](std::size_t i, RunResult r) {
    std::lock_guard lk(m);
    const bool definitive = r.verdict != Verdict::Unknown;
    results[i] = std::move(r);
    ++done;
    if (definitive && !winner) {
      winner = i;
      cancel.request_stop();
    }
    cv.notify_all();
  };

  {
    std::vector<std::jthread> workers;
    workers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      workers.emplace_back([&, i] {
        const Actor& actor = group[i];
        while (!slots.try_acquire_for(Duration(5))) {
          if (cancel.stop_requested() || Clock::now() >= deadline) {
            post(i, RunResult::unknown(actor.name, UnknownReason::Timeout));
            return;
          }
        }
        RunResult r;
        if (cancel.stop_requested() || Clock::now() >= deadline) {
          r = RunResult::unknown(actor.name, UnknownReason::Timeout);
        } else {
          RunContext ctx = ctx_for(actor);
          ctx.stop = cancel.get_token();
          r = run_actor(actor, input_file, std::chrono::duration_cast<Duration>(deadline - Clock::now()), ctx);
        }
        slots.release();
        post(i, std::move(r));
      });
    }
    std::unique_lock lk(m);
    cv.wait(lk, [&] { return winner.has_value() || done == n; });
    lk.unlock();
    cancel.request_stop();
  }  // joins every worker; cancelled ones exit within the grace period

  RunResult out;
  if (winner) {
    out = *results[*winner];
  } else {
    out.actor = group.front().name;
    for (const auto& r : results) {
      if (r) out.reasons.insert(r->reasons.begin(), r->reasons.end());
    }
  }
  out.wall_ms = std::chrono::duration_cast<Duration>(Clock::now() - start).count();
  return out;
}

}  // namespace hornfolio::portfolio
