#pragma once

#include <random>

#include "hornfolio/chc/system.hpp"

namespace testsupport {

/// Linear BV(4) system with 1-3 predicates (arity 1-2), 2-5 rules, at least one
/// atom and one query. Head arguments are sometimes terms, so callers that need
/// normal form must normalize.
hornfolio::chc::ChcSystem random_bv4_system(std::mt19937_64& rng);

}  // namespace testsupport
