#pragma once

#include <locale>
#include <regex>
#include <string>

namespace hornfolio::portfolio::detail {

// libstdc++ fills the ctype<char>::narrow cache lazily, and std::regex
// construction writes to it. Filling it once before the first regex keeps
// concurrent actor threads from racing on it.
inline void warm_regex_locale() {
  static const bool warmed = [] {
    const auto& ct = std::use_facet<std::ctype<char>>(std::locale());
    for (int c = 0; c < 256; ++c) ct.narrow(static_cast<char>(c), '\0');
    return true;
  }();
  (void)warmed;
}

inline std::regex compile_pattern(const std::string& pattern) {
  warm_regex_locale();
  return std::regex(pattern, std::regex::ECMAScript | std::regex::multiline);
}

}  // namespace hornfolio::portfolio::detail
