#pragma once

// Monte Carlo run-length harness. Each replication trains a chart on m
// in-control samples, then draws from the out-of-control model until the
// first point plots outside the frozen limits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wbchart/chart.hpp"
#include "wbchart/distributions.hpp"
#include "wbchart/rng.hpp"

namespace wbchart {

enum class PriorMode { Centered, Shifted };

// Smallest anticipated shape used by scenario priors.
inline constexpr double kMinPriorBBar = 1.05;

// Which chart's first signal ends a replication.
enum class MonitoredChart { Xr, Beta };

struct ScenarioSpec {
    std::string name = "scenario";
    WeibullModel ic{1.0, 1.0};
    WeibullModel ooc{1.0, 1.0};
    double reliability = 0.99;
    double alpha = 0.0027;
    std::size_t subgroup_size = 5;
    std::size_t phase1_samples = 25;
    std::size_t replications = 1000;
    std::uint64_t seed = 20140101;
    PriorMode prior_mode = PriorMode::Centered;
    // Multiplies the anticipated x_R and both ends of the beta interval when shifted.
    double prior_factor = 1.0;
    std::size_t max_run = 100000;
    MonitoredChart monitored = MonitoredChart::Xr;
    // 0 = one worker per hardware thread.
    unsigned threads = 0;

    void validate() const;

    // Chart configuration implied by the scenario: x_bar = IC x_R and
    // (beta1, beta2) = (0.5, 1.5) * IC beta, scaled by prior_factor when shifted;
    // beta2 is raised if needed so that (beta1 + beta2) / 2 >= kMinPriorBBar.
    ChartConfig chart_config() const;
};

struct RunOutcome {
    std::size_t run_length = 0;  // post-shift samples up to and including the signal
    bool truncated = false;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

struct RunLengthSummary {
    double arl = 0.0;
    double sdrl = 0.0;
    std::size_t truncated_count = 0;
    std::size_t replications = 0;

    double standard_error() const;
};

RunOutcome run_replication(const ScenarioSpec& spec, RngStream& rng);

// Replication i always uses RngStream(spec.seed).split(i); results are
// reduced in index order, so the summary does not depend on `threads`.
RunLengthSummary run_study(const ScenarioSpec& spec);

// Per-replication outcomes in index order (the raw data behind run_study).
std::vector<RunOutcome> run_replications(const ScenarioSpec& spec);

RunLengthSummary summarize(const std::vector<RunOutcome>& outcomes);

// Partial description of an out-of-control model. At most two fields may be
// set. A lone beta keeps the IC scale; any other lone field keeps the IC shape.
struct ShiftTarget {
    std::optional<double> x_r;
    std::optional<double> mean;
    std::optional<double> stddev;
    std::optional<double> beta;
    std::optional<double> delta;
};

WeibullModel scenario_from_shift(const WeibullModel& ic, const ShiftTarget& target, double reliability);

// Golden sequence used by the prior-sensitivity study: a configuration,
// its Phase I data and the Phase II data that follow.
struct SensitivityBase {
    ChartConfig config;
    std::vector<Sample> phase1;
    std::vector<Sample> phase2;
};

struct SensitivityCell {
    double x_bar_factor = 1.0;
    double beta_factor = 1.0;
    std::optional<ControlLimits> frozen;
    std::optional<std::size_t> signal_index;  // post-shift, 1-based
    std::string error;                        // non-empty when the prior was rejected
};

// One cell per (x_bar factor, beta-interval factor) pair, row-major in x_bar.
std::vector<SensitivityCell> prior_sensitivity_grid(const SensitivityBase& base, const std::vector<double>& factors);

}  // namespace wbchart
