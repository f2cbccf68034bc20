#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "hornfolio/error.hpp"
#include "hornfolio/portfolio/portfolio.hpp"
#include "regex_util.hpp"

namespace hornfolio::portfolio {

namespace {

constexpr double kFractionSlack = 1e-9;

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(std::size_t line, const std::string& value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(d) || d < 0) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    config_error(line, "expected a non-negative number, got '" + value + "'");
  }
}

struct Section {
  std::string type;
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> entries;
};

std::vector<Section> read_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(lineno, "unterminated section header");
      std::istringstream hs(line.substr(1, line.size() - 2));
      Section s;
      s.line = lineno;
      std::string extra;
      if (!(hs >> s.type >> s.name) || (hs >> extra)) config_error(lineno, "expected [TYPE NAME]");
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(lineno, "expected key = value");
    if (sections.empty()) config_error(lineno, "entry outside a section");
    sections.back().entries.push_back({trim(line.substr(0, eq)), {trim(line.substr(eq + 1)), lineno}});
  }
  return sections;
}

void check_regex(std::size_t line, const std::string& pattern) {
  if (pattern.empty()) return;
  try {
    detail::compile_pattern(pattern);
  } catch (const std::regex_error&) {
    config_error(line, "invalid pattern '" + pattern + "'");
  }
}

Actor read_actor(const Section& s, ActorKind kind) {
  Actor a;
  a.name = s.name;
  a.kind = kind;
  for (const auto& [key, vl] : s.entries) {
    const auto& [value, line] = vl;
    if (key == "command") {
      a.command = value;
    } else if (key == "builtin") {
      a.builtin = value;
    } else if (key == "safe_pattern") {
      check_regex(line, value);
      a.safe_pattern = value;
    } else if (key == "unsafe_pattern") {
      check_regex(line, value);
      a.unsafe_pattern = value;
    } else if (key == "overflow_pattern") {
      check_regex(line, value);
      a.overflow_pattern = value;
    } else if (key == "wall_s") {
      a.wall_s = parse_number(line, value);
    } else if (key == "memory_mb") {
      a.memory_mb = static_cast<std::uint64_t>(parse_number(line, value));
    } else {
      config_error(line, "unknown actor key '" + key + "'");
    }
  }
  if (a.command.empty() == a.builtin.empty()) {
    config_error(s.line, "actor " + a.name + " needs exactly one of command and builtin");
  }
  if (a.command.size() && a.safe_pattern.empty() && a.unsafe_pattern.empty()) {
    config_error(s.line, "actor " + a.name + " has no verdict pattern");
  }
  return a;
}

}  // namespace

void PortfolioPlan::validate() const {
  double total = 0;
  for (const auto& st : stages) {
    if (st.reach.empty()) throw Error(ErrorKind::ConfigError, "stage " + st.name + " has no reach actors");
    if (!(st.budget_fraction > 0 && st.budget_fraction <= 1 + kFractionSlack)) {
      throw Error(ErrorKind::ConfigError, "stage " + st.name + " budget fraction outside (0, 1]");
    }
    const bool gated = st.route != Route::BV;
    if (gated && (st.overflow.empty() || !st.validator)) {
      throw Error(ErrorKind::ConfigError, "stage " + st.name + " needs an overflow group and a validator");
    }
    if (!gated && (!st.overflow.empty() || st.validator)) {
      throw Error(ErrorKind::ConfigError, "BV stage " + st.name + " takes no overflow group or validator");
    }
    total += st.budget_fraction;
  }
  if (total > 1 + kFractionSlack) throw Error(ErrorKind::ConfigError, "stage budget fractions sum above 1");
}

PortfolioPlan load_config(std::string_view text) {
  const auto sections = read_sections(text);
  std::map<std::string, Actor> reach, overflow, validator;
  for (const auto& s : sections) {
    std::map<std::string, Actor>* into = nullptr;
    ActorKind kind = ActorKind::Reachability;
    if (s.type == "reach") {
      into = &reach;
    } else if (s.type == "overflow") {
      into = &overflow;
      kind = ActorKind::Overflow;
    } else if (s.type == "validator") {
      into = &validator;
      kind = ActorKind::WitnessValidator;
    } else if (s.type != "stage") {
      config_error(s.line, "unknown section type '" + s.type + "'");
    }
    if (!into) continue;
    if (into->count(s.name)) config_error(s.line, "duplicate " + s.type + " actor " + s.name);
    (*into)[s.name] = read_actor(s, kind);
  }

  auto lookup = [](const std::map<std::string, Actor>& pool, const std::string& what, const std::string& name,
                   std::size_t line) {
    const auto it = pool.find(name);
    if (it == pool.end()) config_error(line, "unknown " + what + " actor '" + name + "'");
    return it->second;
  };

  PortfolioPlan plan;
  std::map<Route, double> per_route;
  for (const auto& s : sections) {
    if (s.type != "stage") continue;
    Stage st;
    st.name = s.name;
    bool have_route = false;
    bool have_encoding = false;
    for (const auto& [key, vl] : s.entries) {
      const auto& [value, line] = vl;
      if (key == "route") {
        if (value == "LIA") st.route = Route::LIA;
        else if (value == "BV") st.route = Route::BV;
        else if (value == "Core") st.route = Route::Core;
        else config_error(line, "route must be LIA, BV or Core");
        have_route = true;
      } else if (key == "encoding") {
        if (value == "forward") st.encoding = codegen::Encoding::Forward;
        else if (value == "backward") st.encoding = codegen::Encoding::Backward;
        else config_error(line, "encoding must be forward or backward");
        have_encoding = true;
      } else if (key == "reach") {
        for (const auto& n : split_list(value)) st.reach.push_back(lookup(reach, "reach", n, line));
      } else if (key == "overflow") {
        for (const auto& n : split_list(value)) st.overflow.push_back(lookup(overflow, "overflow", n, line));
      } else if (key == "validator") {
        st.validator = lookup(validator, "validator", value, line);
      } else if (key == "budget") {
        st.budget_fraction = parse_number(line, value);
      } else {
        config_error(line, "unknown stage key '" + key + "'");
      }
    }
    if (!have_route || !have_encoding) config_error(s.line, "stage " + st.name + " needs route and encoding");
    per_route[st.route] += st.budget_fraction;
    plan.stages.push_back(std::move(st));
  }
  if (plan.stages.empty()) throw Error(ErrorKind::ConfigError, "no stages");

  // Fractions are per route: a run only ever sees the stages of one theory.
  for (const auto& [route, sum] : per_route) {
    PortfolioPlan part;
    for (const auto& st : plan.stages) {
      if (st.route == route) part.stages.push_back(st);
    }
    part.validate();
  }
  return plan;
}

PortfolioPlan load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

PortfolioPlan plan_for(const PortfolioPlan& plan, const chc::TheoryClass& theory) {
  PortfolioPlan out;
  for (const auto& st : plan.stages) {
    if (route_accepts(st.route, theory)) out.stages.push_back(st);
  }
  return out;
}

PortfolioPlan default_plan(const chc::TheoryClass& theory) {
  static const PortfolioPlan all = load_config(default_config_text());
  return plan_for(all, theory);
}

PortfolioPlan builtin_plan(const chc::TheoryClass& theory) {
  auto builtin = [](const std::string& name) {
    Actor a;
    a.name = name;
    a.kind = ActorKind::Builtin;
    a.builtin = name;
    return a;
  };
  const Actor oracle = builtin("oracle");
  const Actor bool_only = builtin("bool-only");
  const Actor replay = builtin("replay-monitor");
  PortfolioPlan plan;
  const bool bv = theory.kind == chc::TheoryClass::Kind::BV;
  for (auto enc : {codegen::Encoding::Forward, codegen::Encoding::Backward}) {
    Stage st;
    st.name = std::string(bv ? "bv-" : "lia-") + std::string(codegen::to_string(enc));
    st.encoding = enc;
    st.route = bv ? Route::BV : Route::LIA;
    st.reach = {oracle};
    if (!bv) {
      st.overflow = {bool_only};
      st.validator = replay;
    }
    st.budget_fraction = 0.5;
    plan.stages.push_back(std::move(st));
  }
  return plan;
}

PortfolioPlan restrict_encoding(const PortfolioPlan& plan, codegen::Encoding encoding) {
  PortfolioPlan out;
  double kept = 0;
  for (const auto& st : plan.stages) {
    if (st.encoding == encoding) {
      out.stages.push_back(st);
      kept += st.budget_fraction;
    }
  }
  double total = 0;
  for (const auto& st : plan.stages) total += st.budget_fraction;
  for (auto& st : out.stages) st.budget_fraction = st.budget_fraction * std::min(total, 1.0) / kept;
  return out;
}

}  // namespace hornfolio::portfolio
