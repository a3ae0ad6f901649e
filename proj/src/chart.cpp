#include "wbchart/chart.hpp"

#include <cmath>

#include "wbchart/distributions.hpp"
#include "wbchart/error.hpp"

namespace wbchart {

const char* to_string(Phase phase) { return phase == Phase::PhaseI ? "I" : "II"; }

const char* to_string(Signal signal) {
    switch (signal) {
        case Signal::None: return "none";
        case Signal::XrOutOfControl: return "xr_ooc";
        case Signal::BetaOutOfControl: return "beta_ooc";
        case Signal::Both: return "both";
    }
    return "none";
}

void ChartConfig::validate() const {
    check_reliability(reliability);
    check_alpha(alpha);
    if (subgroup_size == 0) throw ShapeError("subgroup_size must be positive");
    if (phase1_samples == 0) throw ShapeError("phase1_samples must be positive");
    if (handoff_window && (*handoff_window == 0 || *handoff_window > phase1_samples)) {
        throw RangeError("handoff_window must lie in [1, phase1_samples]");
    }
    // Throws on beta1 + beta2 <= 2 and on non-positive x_bar.
    (void)initial_prior();
}

PriorSpec ChartConfig::initial_prior() const { return PriorSpec::elicit(prior_beta1, prior_beta2, prior_x_bar); }

ControlChart::ControlChart(ChartConfig config, PosteriorState posterior)
    : config_(std::move(config)), posterior_(std::move(posterior)) {}

const ControlLimits& ControlChart::frozen_xr_limits() const {
    if (!frozen_xr_) throw StateError("chart: limits are frozen only after Phase I");
    return *frozen_xr_;
}

ControlChart ControlChart::run_phase1(const ChartConfig& config, std::span<const Sample> samples) {
    config.validate();
    if (samples.size() != config.phase1_samples) {
        throw ShapeError("run_phase1: expected exactly phase1_samples training samples");
    }
    ControlChart chart(config, PosteriorState::initial(config.initial_prior(), config.subgroup_size,
                                                       config.reliability));
    for (const Sample& sample : samples) {
        chart.posterior_ = absorb_sample(chart.posterior_, sample);
        ++chart.history_length_;

        ChartRecord record;
        record.sample_index = chart.history_length_;
        record.phase = Phase::PhaseI;
        record.beta_point = chart.posterior_.beta_hat_history().back();
        record.xr_point = chart.posterior_.xr_hat_history().back();
        record.beta_bar = beta_bar(chart.posterior_);
        record.xr_limits = xr_limits(chart.posterior_, record.beta_bar, config.alpha);
        bool outside = !record.xr_limits.contains(record.xr_point);
        if (config.enable_beta_chart) {
            record.beta_limits = beta_limits(chart.posterior_, config.alpha);
            outside = outside || !record.beta_limits->contains(record.beta_point);
        }
        record.outside_own_limits = outside;
        chart.records_.push_back(record);
    }

    chart.frozen_xr_ = chart.records_.back().xr_limits;
    chart.frozen_beta_ = chart.records_.back().beta_limits;
    if (config.handoff_window) chart.posterior_ = rebuild_windowed(chart.posterior_, *config.handoff_window);
    chart.phase_ = Phase::PhaseII;
    return chart;
}

ChartRecord ControlChart::monitor(std::span<const double> sample) {
    if (phase_ != Phase::PhaseII) throw StateError("monitor: Phase I is not complete");
    if (sample.size() != config_.subgroup_size) throw ShapeError("monitor: sample size differs from subgroup size");

    AbsorbOptions options;
    options.reelicit = config_.reelicit_in_phase2;
    PosteriorState next = absorb_sample(posterior_, sample, options);

    ChartRecord record;
    record.sample_index = history_length_ + 1;
    record.phase = Phase::PhaseII;
    record.beta_point = next.beta_hat_history().back();
    record.xr_point = next.xr_hat_history().back();
    record.beta_bar = beta_bar(next);
    record.xr_limits = *frozen_xr_;
    record.beta_limits = frozen_beta_;

    const bool xr_out = !frozen_xr_->contains(record.xr_point);
    const bool beta_out = frozen_beta_ && !frozen_beta_->contains(record.beta_point);
    if (xr_out && beta_out) {
        record.signal = Signal::Both;
    } else if (xr_out) {
        record.signal = Signal::XrOutOfControl;
    } else if (beta_out) {
        record.signal = Signal::BetaOutOfControl;
    }

    if (record.signal != Signal::None && !rollback_) rollback_ = Snapshot{posterior_, history_length_};
    posterior_ = std::move(next);
    ++history_length_;
    records_.push_back(record);
    return record;
}

void ControlChart::restart_after_signal() {
    if (!rollback_) throw StateError("restart_after_signal: no signal pending");
    posterior_ = std::move(rollback_->posterior);
    history_length_ = rollback_->history_length;
    rollback_.reset();
}

ControlChart ControlChart::restore(ChartConfig config, PosteriorState posterior, ControlLimits xr_limits,
                                   std::optional<ControlLimits> beta_limits, std::vector<ChartRecord> records,
                                   std::size_t history_length, std::optional<Snapshot> rollback) {
    config.validate();
    ControlChart chart(std::move(config), std::move(posterior));
    chart.phase_ = Phase::PhaseII;
    chart.frozen_xr_ = xr_limits;
    chart.frozen_beta_ = std::move(beta_limits);
    chart.records_ = std::move(records);
    chart.history_length_ = history_length;
    chart.rollback_ = std::move(rollback);
    return chart;
}

}  // namespace wbchart
