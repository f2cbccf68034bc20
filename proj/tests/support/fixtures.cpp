#include "support/fixtures.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "hornfolio/chc/parser.hpp"

namespace testsupport {

std::string fixture_path(const std::string& name) { return std::string(HORNFOLIO_FIXTURES) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hornfolio::chc::ChcSystem load_fixture(const std::string& name) {
  return hornfolio::chc::parse_chc(read_file(fixture_path(name)));
}

std::string make_temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() /
               ("hornfolio-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace testsupport
