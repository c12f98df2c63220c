#pragma once

#include <vector>

#include "lanesafe/simulator.hpp"

namespace lanesafe {

/// The three shipped scenarios: (1) adaptive cruise control behind a slower
/// leader, (2) cruise control with a commanded lane switch ahead of a
/// neighbor, (3) a lane switch for which the rear neighbor has to open a
/// gap first. Single source of truth for the scenarios/ JSON files.
std::vector<ScenarioConfig> builtin_scenarios();

ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace lanesafe
