#pragma once

#include <string>

#include "pollerr/table.hpp"

namespace pollerr {

// Bundled reference measurements: "exp1" (64 corners at coded +/-1 plus the
// baseline row), "exp2" (64 corners at +/-0.5 plus baseline), "validation"
// (center, 19 mid-space corners, 20 random points).
ExperimentTable load_fixture(const std::string& name);

}  // namespace pollerr
