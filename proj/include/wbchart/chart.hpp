#pragma once

// Phase I / Phase II state machine for the x_R chart and the companion beta
// chart. Phase I absorbs training samples and refines the probability limits
// after every sample; the limits reached at the end of Phase I are frozen and
// used to judge every Phase II point.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wbchart/limits.hpp"
#include "wbchart/posterior.hpp"

namespace wbchart {

using Sample = std::vector<double>;

enum class Phase { PhaseI, PhaseII };

enum class Signal { None, XrOutOfControl, BetaOutOfControl, Both };

const char* to_string(Phase phase);
const char* to_string(Signal signal);

struct ChartConfig {
    double reliability = 0.99;
    double alpha = 0.0027;
    std::size_t subgroup_size = 5;
    std::size_t phase1_samples = 10;
    double prior_beta1 = 2.4;
    double prior_beta2 = 7.2;
    double prior_x_bar = 1.22;
    std::optional<std::size_t> handoff_window;
    bool enable_beta_chart = false;
    // Keep re-eliciting the prior after every Phase II sample.
    bool reelicit_in_phase2 = true;

    void validate() const;
    PriorSpec initial_prior() const;

    friend bool operator==(const ChartConfig&, const ChartConfig&) = default;
};

struct ChartRecord {
    std::size_t sample_index = 0;  // position in the in-control history, 1-based
    Phase phase = Phase::PhaseI;
    double xr_point = 0.0;
    double beta_point = 0.0;
    double beta_bar = 0.0;
    ControlLimits xr_limits;
    std::optional<ControlLimits> beta_limits;
    Signal signal = Signal::None;
    // Phase I only: the point falls outside its own step-k limits. Informational.
    bool outside_own_limits = false;

    friend bool operator==(const ChartRecord&, const ChartRecord&) = default;
};

class ControlChart {
public:
    // Absorbs exactly config.phase1_samples samples, recording the point and
    // the refined limits after each. The limits of the last step are frozen.
    // With a handoff window the posterior carried into Phase II keeps only
    // the last `window` samples.
    static ControlChart run_phase1(const ChartConfig& config, std::span<const Sample> samples);

    // Phase II: absorbs the sample and compares the new point with the
    // frozen limits.
    ChartRecord monitor(std::span<const double> sample);

    // Reverts the posterior to the last in-control point. Records are kept.
    void restart_after_signal();

    const ChartConfig& config() const { return config_; }
    Phase phase() const { return phase_; }
    const PosteriorState& posterior() const { return posterior_; }
    const ControlLimits& frozen_xr_limits() const;
    const std::optional<ControlLimits>& frozen_beta_limits() const { return frozen_beta_; }
    const std::vector<ChartRecord>& records() const { return records_; }
    bool signal_pending() const { return rollback_.has_value(); }
    std::size_t history_length() const { return history_length_; }

    // State needed to resume monitoring elsewhere (see state serialization).
    struct Snapshot {
        PosteriorState posterior;
        std::size_t history_length = 0;
    };
    const std::optional<Snapshot>& rollback_point() const { return rollback_; }

    static ControlChart restore(ChartConfig config, PosteriorState posterior, ControlLimits xr_limits,
                                std::optional<ControlLimits> beta_limits, std::vector<ChartRecord> records,
                                std::size_t history_length, std::optional<Snapshot> rollback);

private:
    ControlChart(ChartConfig config, PosteriorState posterior);

    ChartConfig config_;
    Phase phase_ = Phase::PhaseI;
    PosteriorState posterior_;
    std::size_t history_length_ = 0;
    std::optional<ControlLimits> frozen_xr_;
    std::optional<ControlLimits> frozen_beta_;
    std::vector<ChartRecord> records_;
    std::optional<Snapshot> rollback_;
};

}  // namespace wbchart
