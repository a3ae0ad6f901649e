#pragma once

// Built-in study grids: the percentile-shift comparison, the shape-stability
// study and the fixed-budget / fixed-m sub-grouping studies.

#include <string>
#include <vector>

#include "wbchart/simulation.hpp"

namespace wbchart {

struct ScenarioGroup {
    std::string name;
    std::vector<ScenarioSpec> scenarios;
};

// Percentile shifts at n = 5, m = 25 (four rows).
ScenarioGroup shift_comparison_scenarios();

// Shape-parameter shifts, individual observations, m = 30, IC ARL 500.
// Each row appears twice: once monitored by the x_R chart, once by the beta chart.
ScenarioGroup shape_stability_scenarios();

// Four out-of-control models with m * n = 50 for n in {5, 2, 1}.
ScenarioGroup fixed_budget_scenarios();

// The same four models with m = 25 for n in {5, 2, 1}.
ScenarioGroup fixed_m_scenarios();

// In-control calibration: ic = ooc at the default reliability and risk.
ScenarioSpec in_control_scenario(std::size_t subgroup_size = 5, std::size_t phase1_samples = 25);

std::vector<ScenarioGroup> builtin_scenario_groups();

// Looks up a group by name; throws RangeError if unknown.
ScenarioGroup builtin_scenario_group(const std::string& name);

}  // namespace wbchart
