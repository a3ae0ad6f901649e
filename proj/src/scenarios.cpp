#include "wbchart/scenarios.hpp"

#include "wbchart/error.hpp"

namespace wbchart {

namespace {

ScenarioSpec make(std::string name, WeibullModel ic, WeibullModel ooc, double reliability, std::size_t n,
                  std::size_t m, double alpha = 0.0027) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.ic = ic;
    s.ooc = ooc;
    s.reliability = reliability;
    s.alpha = alpha;
    s.subgroup_size = n;
    s.phase1_samples = m;
    return s;
}

const WeibullModel kCarbonFibre{3.2, 4.8};

struct OocRow {
    const char* name;
    WeibullModel model;
};

// x_0.99 moved from 1.22 to 0.26 by different parameter combinations.
const OocRow kPercentileRows[] = {
    {"ooc_sigma_beta", WeibullModel{3.3, 1.8}},
    {"ooc_ps", WeibullModel{2.6, 2.0}},
    {"ooc_mu_beta", WeibullModel{1.7, 2.4}},
    {"ooc_mu_sigma", WeibullModel{0.7, 4.8}},
};

ScenarioGroup subgrouping(std::string group, bool fixed_budget) {
    ScenarioGroup g{std::move(group), {}};
    for (const auto& row : kPercentileRows) {
        for (std::size_t n : {5u, 2u, 1u}) {
            const std::size_t m = fixed_budget ? 50 / n : 25;
            g.scenarios.push_back(make(std::string(row.name) + "_n" + std::to_string(n), kCarbonFibre, row.model,
                                       0.99, n, m));
        }
    }
    return g;
}

}  // namespace

ScenarioGroup shift_comparison_scenarios() {
    return {"shift_comparison",
            {
                make("row1", WeibullModel{1.0, 1.0}, WeibullModel{1.5, 1.5}, 0.90, 5, 25),
                make("row2", WeibullModel{1.0, 1.5}, WeibullModel{1.0, 1.0}, 0.99, 5, 25),
                make("row3", WeibullModel{1.0, 3.0}, WeibullModel{1.0, 2.0}, 0.90, 5, 25),
                make("row4", WeibullModel{1.0, 1.0}, WeibullModel{1.0, 1.5}, 0.99, 5, 25),
            }};
}

ScenarioGroup shape_stability_scenarios() {
    ScenarioGroup g{"shape_stability", {}};
    const struct {
        const char* name;
        double beta;
    } rows[] = {{"s0.25", 1.2}, {"s0.5", 2.4}, {"s2", 9.6}, {"s4", 15.2}};
    for (const auto& row : rows) {
        for (MonitoredChart chart : {MonitoredChart::Xr, MonitoredChart::Beta}) {
            ScenarioSpec s = make(std::string(row.name) + (chart == MonitoredChart::Xr ? "_xr" : "_beta"),
                                  kCarbonFibre, WeibullModel{3.2, row.beta}, 0.99, 1, 30, 1.0 / 500.0);
            s.monitored = chart;
            g.scenarios.push_back(s);
        }
    }
    return g;
}

ScenarioGroup fixed_budget_scenarios() { return subgrouping("fixed_budget", true); }

ScenarioGroup fixed_m_scenarios() { return subgrouping("fixed_m", false); }

ScenarioSpec in_control_scenario(std::size_t subgroup_size, std::size_t phase1_samples) {
    ScenarioSpec s = make("in_control", kCarbonFibre, kCarbonFibre, 0.99, subgroup_size, phase1_samples);
    s.max_run = 5000;
    return s;
}

std::vector<ScenarioGroup> builtin_scenario_groups() {
    return {shift_comparison_scenarios(), shape_stability_scenarios(), fixed_budget_scenarios(),
            fixed_m_scenarios(), ScenarioGroup{"in_control", {in_control_scenario()}}};
}

ScenarioGroup builtin_scenario_group(const std::string& name) {
    for (auto& g : builtin_scenario_groups())
        if (g.name == name) return g;
    throw RangeError("unknown scenario group '" + name + "'");
}

}  // namespace wbchart
