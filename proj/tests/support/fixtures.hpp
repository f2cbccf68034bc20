#pragma once

#include <string>

#include "hornfolio/chc/system.hpp"

namespace testsupport {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);
hornfolio::chc::ChcSystem load_fixture(const std::string& name);

/// Fresh directory under the system temp dir, removed by the caller.
std::string make_temp_dir(const std::string& tag);

}  // namespace testsupport
