#include "wbchart/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "wbchart/error.hpp"
#include "wbchart/special_functions.hpp"

namespace wbchart {

namespace {

Sample draw_sample(const WeibullModel& model, std::size_t n, RngStream& rng) {
    Sample s(n);
    for (double& x : s) x = weibull_sample(model, rng);
    return s;
}

bool signalled(const ChartRecord& record, MonitoredChart monitored) {
    switch (monitored) {
        case MonitoredChart::Xr:
            return record.signal == Signal::XrOutOfControl || record.signal == Signal::Both;
        case MonitoredChart::Beta:
            return record.signal == Signal::BetaOutOfControl || record.signal == Signal::Both;
    }
    return false;
}

}  // namespace

void ScenarioSpec::validate() const {
    check_reliability(reliability);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("scenario: alpha must lie in (0,1)");
    if (subgroup_size == 0 || phase1_samples == 0) throw ShapeError("scenario: n and m must be positive");
    if (replications == 0) throw RangeError("scenario: replications must be positive");
    if (max_run == 0) throw RangeError("scenario: max_run must be positive");
    if (!(prior_factor > 0.0)) throw DomainError("scenario: prior factor must be positive");
    chart_config().validate();
}

ChartConfig ScenarioSpec::chart_config() const {
    const double factor = prior_mode == PriorMode::Shifted ? prior_factor : 1.0;
    ChartConfig config;
    config.reliability = reliability;
    config.alpha = alpha;
    config.subgroup_size = subgroup_size;
    config.phase1_samples = phase1_samples;
    config.prior_x_bar = percentile_of(ic, reliability) * factor;
    config.prior_beta1 = 0.5 * ic.beta() * factor;
    config.prior_beta2 = 1.5 * ic.beta() * factor;
    // For beta_IC <= 1 the default interval has b_bar <= 1, where the x_R
    // prior scale is infinite. Raise the upper end so that b_bar = 1.05.
    if (config.prior_beta1 + config.prior_beta2 < 2.0 * kMinPriorBBar) {
        config.prior_beta2 = 2.0 * kMinPriorBBar - config.prior_beta1;
    }
    config.enable_beta_chart = monitored == MonitoredChart::Beta;
    return config;
}

double RunLengthSummary::standard_error() const {
    return replications > 0 ? sdrl / std::sqrt(static_cast<double>(replications)) : 0.0;
}

RunOutcome run_replication(const ScenarioSpec& spec, RngStream& rng) {
    const ChartConfig config = spec.chart_config();
    std::vector<Sample> training;
    training.reserve(spec.phase1_samples);
    for (std::size_t i = 0; i < spec.phase1_samples; ++i) {
        training.push_back(draw_sample(spec.ic, spec.subgroup_size, rng));
    }
    ControlChart chart = ControlChart::run_phase1(config, training);
    for (std::size_t run = 1; run <= spec.max_run; ++run) {
        const ChartRecord record = chart.monitor(draw_sample(spec.ooc, spec.subgroup_size, rng));
        if (signalled(record, spec.monitored)) return {run, false};
    }
    return {spec.max_run, true};
}

std::vector<RunOutcome> run_replications(const ScenarioSpec& spec) {
    spec.validate();
    const RngStream root(spec.seed);
    std::vector<RunOutcome> outcomes(spec.replications);

    unsigned workers = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.replications));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < spec.replications && !failed; i = next++) {
            try {
                RngStream stream = root.split(i);
                outcomes[i] = run_replication(spec, stream);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

RunLengthSummary summarize(const std::vector<RunOutcome>& outcomes) {
    RunLengthSummary summary;
    summary.replications = outcomes.size();
    if (outcomes.empty()) return summary;
    double sum = 0.0;
    for (const auto& o : outcomes) {
        sum += static_cast<double>(o.run_length);
        if (o.truncated) ++summary.truncated_count;
    }
    summary.arl = sum / static_cast<double>(outcomes.size());
    double ss = 0.0;
    for (const auto& o : outcomes) {
        const double d = static_cast<double>(o.run_length) - summary.arl;
        ss += d * d;
    }
    summary.sdrl = outcomes.size() > 1 ? std::sqrt(ss / static_cast<double>(outcomes.size() - 1)) : 0.0;
    return summary;
}

RunLengthSummary run_study(const ScenarioSpec& spec) { return summarize(run_replications(spec)); }

namespace {

double mean_at(double x_r, double beta, double ln_inv_r) {
    return x_r * std::pow(ln_inv_r, -1.0 / beta) * gamma_function(1.0 + 1.0 / beta);
}

double stddev_at(double x_r, double beta, double ln_inv_r) {
    const double delta = x_r * std::pow(ln_inv_r, -1.0 / beta);
    const double g1 = gamma_function(1.0 + 1.0 / beta);
    return delta * std::sqrt(std::max(gamma_function(1.0 + 2.0 / beta) - g1 * g1, 0.0));
}

// Coefficient of variation, strictly decreasing in beta.
double cv_at(double beta) {
    const double g1 = gamma_function(1.0 + 1.0 / beta);
    return std::sqrt(std::max(gamma_function(1.0 + 2.0 / beta) - g1 * g1, 0.0)) / g1;
}

// Root of f on [lo, hi] in log-beta by bisection; f must change sign.
template <typename F>
double solve_beta(F f, double lo = 0.05, double hi = 200.0) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (!(flo * fhi <= 0.0)) throw NoSolutionError("scenario_from_shift: targets cannot be met by any beta");
    double a = std::log(lo);
    double b = std::log(hi);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(std::exp(mid));
        if ((fm < 0.0) == (flo < 0.0)) {
            a = mid;
            flo = fm;
        } else {
            b = mid;
        }
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

WeibullModel scenario_from_shift(const WeibullModel& ic, const ShiftTarget& target, double reliability) {
    check_reliability(reliability);
    const int given = static_cast<int>(target.x_r.has_value()) + static_cast<int>(target.mean.has_value()) +
                      static_cast<int>(target.stddev.has_value()) + static_cast<int>(target.beta.has_value()) +
                      static_cast<int>(target.delta.has_value());
    if (given > 2) throw NoSolutionError("scenario_from_shift: at most two targets may be fixed");
    for (const auto& v : {target.x_r, target.mean, target.stddev, target.beta, target.delta}) {
        if (v && !(*v > 0.0 && std::isfinite(*v))) throw NoSolutionError("scenario_from_shift: targets must be positive");
    }
    if (given == 0) return ic;

    const double ln_inv_r = -std::log(reliability);
    ShiftTarget t = target;
    if (given == 1) {
        if (t.beta) t.delta = ic.delta(); else t.beta = ic.beta();
    }

    if (t.delta && t.beta) return WeibullModel(*t.delta, *t.beta);
    if (t.beta) {
        const double beta = *t.beta;
        if (t.x_r) return params_from_percentile(PercentileView(*t.x_r, beta, reliability));
        const double g1 = gamma_function(1.0 + 1.0 / beta);
        if (t.mean) return WeibullModel(*t.mean / g1, beta);
        return WeibullModel(*t.stddev / (cv_at(beta) * g1), beta);
    }
    if (t.x_r && t.delta) {
        // x_R = delta ln(1/R)^{1/beta}  =>  1/beta = ln(x_R/delta) / ln ln(1/R)
        const double inv_beta = std::log(*t.x_r / *t.delta) / std::log(ln_inv_r);
        if (!(inv_beta > 0.0)) throw NoSolutionError("scenario_from_shift: x_R and delta are incompatible");
        return WeibullModel(*t.delta, 1.0 / inv_beta);
    }
    if (t.x_r && t.mean) {
        const double x_r = *t.x_r;
        const double beta = solve_beta([&](double b) { return std::log(mean_at(x_r, b, ln_inv_r) / *t.mean); });
        return params_from_percentile(PercentileView(x_r, beta, reliability));
    }
    if (t.x_r && t.stddev) {
        const double x_r = *t.x_r;
        const double beta = solve_beta([&](double b) { return std::log(stddev_at(x_r, b, ln_inv_r) / *t.stddev); });
        return params_from_percentile(PercentileView(x_r, beta, reliability));
    }
    if (t.mean && t.stddev) {
        const double cv = *t.stddev / *t.mean;
        const double beta = solve_beta([&](double b) { return std::log(cv_at(b) / cv); });
        return WeibullModel(*t.mean / gamma_function(1.0 + 1.0 / beta), beta);
    }
    if (t.delta && t.mean) {
        const double ratio = *t.mean / *t.delta;
        const double beta = solve_beta([&](double b) { return std::log(gamma_function(1.0 + 1.0 / b) / ratio); }, 0.2);
        return WeibullModel(*t.delta, beta);
    }
    // delta and stddev
    const double ratio = *t.stddev / *t.delta;
    const double beta = solve_beta(
        [&](double b) {
            const double g1 = gamma_function(1.0 + 1.0 / b);
            return std::log(std::sqrt(std::max(gamma_function(1.0 + 2.0 / b) - g1 * g1, 1e-300)) / ratio);
        },
        0.2);
    return WeibullModel(*t.delta, beta);
}

std::vector<SensitivityCell> prior_sensitivity_grid(const SensitivityBase& base, const std::vector<double>& factors) {
    std::vector<SensitivityCell> cells;
    cells.reserve(factors.size() * factors.size());
    for (double fx : factors) {
        for (double fb : factors) {
            SensitivityCell cell;
            cell.x_bar_factor = fx;
            cell.beta_factor = fb;
            ChartConfig config = base.config;
            config.prior_x_bar *= fx;
            config.prior_beta1 *= fb;
            config.prior_beta2 *= fb;
            config.enable_beta_chart = false;
            try {
                ControlChart chart = ControlChart::run_phase1(config, base.phase1);
                cell.frozen = chart.frozen_xr_limits();
                for (std::size_t i = 0; i < base.phase2.size(); ++i) {
                    const ChartRecord r = chart.monitor(base.phase2[i]);
                    if (r.signal != Signal::None) {
                        cell.signal_index = i + 1;
                        break;
                    }
                }
            } catch (const RestrictionError& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace wbchart
