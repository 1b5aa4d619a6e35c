#pragma once

#include <string_view>
#include <vector>

#include "basket/trial.hpp"

namespace basket {

// The 25 six-cohort scenarios of the simulation grid: three homogeneous rows
// (1.A.*) and twenty-two heterogeneous rows (1.B.*, 2.A.*-2.D.*, 3.A.*,
// 3.B.*).
const std::vector<Scenario>& scenario_table();

// Scenario lookup by id; nullptr when the id is unknown.
const Scenario* find_scenario(std::string_view id);

}  // namespace basket
