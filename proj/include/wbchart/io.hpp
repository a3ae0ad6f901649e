#pragma once

// Text formats used by the command-line tool: subgroup data files, flat
// key = value configuration and scenario files, and the chart-state file
// that carries a trained chart from `phase1` to `monitor`.
//
// Every parse error names the source, the 1-based line and the field.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wbchart/chart.hpp"
#include "wbchart/simulation.hpp"

namespace wbchart {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// One subgroup per line, fields separated by commas and/or whitespace.
// Blank lines and lines starting with '#' are skipped.
std::vector<Sample> parse_samples(std::istream& in, std::size_t subgroup_size, const std::string& source);
std::vector<Sample> ingest_samples(const std::filesystem::path& path, std::size_t subgroup_size);

struct RunSettings {
    ChartConfig chart;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

// Keys: reliability, alpha, subgroup_size, phase1_samples, prior.beta1,
// prior.beta2, prior.x_bar, handoff_window, enable_beta_chart,
// reelicit_in_phase2, seed. Missing keys keep their defaults.
RunSettings parse_config(std::istream& in, const std::string& source);
RunSettings load_config(const std::filesystem::path& path);
std::string serialize_config(const RunSettings& settings);

// A scenario file holds one or more `[name]` sections (a file without
// sections is a single scenario). Inside a section:
//   preset = <builtin group>       expands to that group's scenarios
//   ic.delta, ic.beta, ooc.delta, ooc.beta
//   ooc.x_r, ooc.mean, ooc.stddev  (solve for the shifted model; at most two
//                                   of the ooc.* keys)
//   reliability, alpha, subgroup_size, phase1_samples, replications, seed,
//   max_run, prior_mode (centered | shifted), prior_factor, monitored (xr | beta)
// Keys before the first section are defaults for every section.
std::vector<ScenarioSpec> parse_scenarios(std::istream& in, const std::string& source);
std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path);

inline constexpr int kChartStateVersion = 1;

std::string serialize_chart_state(const ControlChart& chart);
ControlChart parse_chart_state(std::istream& in, const std::string& source);
void save_chart_state(const ControlChart& chart, const std::filesystem::path& path);
ControlChart load_chart_state(const std::filesystem::path& path);

}  // namespace wbchart
