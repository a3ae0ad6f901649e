#pragma once

// Worked example on carbon-fibre breaking stresses: ten in-control subgroups
// of five followed by ten subgroups after a downward percentile shift.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wbchart/chart.hpp"
#include "wbchart/report.hpp"

namespace wbchart {

// Of seeds 1..800, the one whose windowed run gives frozen x_R limits nearest
// the average over all 800 resamples.
inline constexpr std::uint64_t kDemoSeed = 41;

// All twenty subgroups; the first ten are in control.
const std::vector<Sample>& carbon_fibre_samples();

// R = 0.99, alpha = 0.0027, n = 5, m = 10, beta in (2.4, 7.2), x_bar = 1.22,
// beta chart enabled.
ChartConfig carbon_fibre_config();

// Phase I on subgroups 1-10, then subgroups 11-20 monitored without restarts.
ControlChart run_carbon_fibre_chart();

// Forty training subgroups: the ten originals followed by thirty subgroups
// whose values are drawn with replacement from the original fifty.
std::vector<Sample> resampled_training(std::uint64_t seed);

// The same chart trained on resampled_training(seed) with a handoff window of
// ten subgroups, then subgroups 11-20 monitored.
ControlChart run_windowed_carbon_fibre_chart(std::uint64_t seed = kDemoSeed);

struct DemoReports {
    ReportFiles baseline;
    ReportFiles windowed;
};

// Writes output_dir/baseline and output_dir/windowed.
DemoReports demo_padgett(const std::filesystem::path& output_dir, std::uint64_t seed = kDemoSeed);

}  // namespace wbchart
