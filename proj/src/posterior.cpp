#include "wbchart/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wbchart/distributions.hpp"
#include "wbchart/error.hpp"
#include "wbchart/special_functions.hpp"

namespace wbchart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Log-weight drop beyond which the beta marginal is treated as zero (e^-46 ~ 1e-20).
constexpr double kTailDrop = 46.0;

void check_sample(std::span<const double> sample) {
    for (double x : sample) {
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("observations must be positive and finite");
    }
}

double log_ln_inv_r(double reliability) { return std::log(-std::log(reliability)); }

// First derivative of the unnormalized log marginal.
double marginal_slope(const PosteriorState& s, double beta, const LogTDerivatives& lt) {
    const double count = static_cast<double>(s.count());
    return count / beta - std::log(s.prior().a) + s.sum_log_x() - (count + 1.0) * lt.d1;
}

double marginal_curvature(const PosteriorState& s, double beta, const LogTDerivatives& lt) {
    const double count = static_cast<double>(s.count());
    return -count / (beta * beta) - (count + 1.0) * lt.d2;
}

}  // namespace

PosteriorState PosteriorState::initial(const PriorSpec& prior, std::size_t subgroup_size, double reliability) {
    if (subgroup_size == 0) throw ShapeError("subgroup size must be positive");
    check_reliability(reliability);
    if (!(prior.beta1 > 0.0 && prior.beta1 < prior.beta2 && prior.a > 0.0)) {
        throw DomainError("posterior: invalid prior spec");
    }
    PosteriorState s;
    s.prior_ = prior;
    s.n_ = subgroup_size;
    s.reliability_ = reliability;
    s.max_log_x_ = kNegInf;
    return s;
}

PosteriorState PosteriorState::restore(const PriorSpec& prior, std::size_t subgroup_size, double reliability,
                                       std::vector<double> observations, std::vector<double> beta_hats,
                                       std::vector<double> xr_hats) {
    PosteriorState s = initial(prior, subgroup_size, reliability);
    if (observations.size() != beta_hats.size() * subgroup_size || xr_hats.size() != beta_hats.size()) {
        throw ShapeError("posterior: observation count does not match k * n");
    }
    s.append(observations);
    s.beta_hat_history_ = std::move(beta_hats);
    s.xr_hat_history_ = std::move(xr_hats);
    return s;
}

void PosteriorState::append(std::span<const double> values) {
    check_sample(values);
    observations_.reserve(observations_.size() + values.size());
    log_observations_.reserve(log_observations_.size() + values.size());
    for (double x : values) {
        const double lx = std::log(x);
        observations_.push_back(x);
        log_observations_.push_back(lx);
        sum_log_x_ += lx;
        max_log_x_ = std::max(max_log_x_, lx);
        power_sums_.add(lx);
    }
}

double log_likelihood(std::span<const double> sample, double x_r, double beta, double reliability) {
    if (sample.empty()) throw ShapeError("log_likelihood: empty sample");
    check_sample(sample);
    check_reliability(reliability);
    if (!(x_r > 0.0) || !(beta > 0.0)) throw DomainError("log_likelihood: x_R and beta must be positive");
    const double count = static_cast<double>(sample.size());
    double sum_log = 0.0;
    double max_term = kNegInf;
    for (double x : sample) {
        sum_log += std::log(x);
        max_term = std::max(max_term, beta * std::log(x / x_r));
    }
    double scaled = 0.0;
    for (double x : sample) scaled += std::exp(beta * std::log(x / x_r) - max_term);
    // x_R^{-beta} sum x_i^beta = sum (x_i / x_R)^beta
    const double power_sum = std::exp(max_term + std::log(scaled));
    return count * std::log(beta) - beta * count * std::log(x_r) + (beta - 1.0) * sum_log +
           std::log(reliability) * power_sum;
}

namespace {

// ln T from ln S(beta) = ln sum x_i^beta by log-sum-exp with the prior term.
LogTDerivatives combine(const PosteriorState& state, double beta, const LogPowerSums::Value& sums) {
    const double ln_a = std::log(state.prior().a);
    const double prior_term = -beta * ln_a;
    const double data_term = log_ln_inv_r(state.reliability()) + sums.log_sum;
    const double m = std::max(prior_term, data_term);
    const double w0 = std::exp(prior_term - m);
    const double w1 = std::exp(data_term - m);
    const double total = w0 + w1;
    const double d1 = (-ln_a * w0 + sums.mean * w1) / total;
    const double second = (ln_a * ln_a * w0 + sums.second * w1) / total;
    return {m + std::log(total), d1, std::max(second - d1 * d1, 0.0)};
}

LogPowerSums::Value direct_sums(const PosteriorState& state, double beta, bool with_derivatives) {
    const double lmax = state.max_log_x();
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (double lx : state.log_observations()) {
        const double w = std::exp(beta * (lx - lmax));
        s0 += w;
        if (with_derivatives) {
            s1 += lx * w;
            s2 += lx * lx * w;
        }
    }
    return {beta * lmax + std::log(s0), s1 / s0, s2 / s0};
}

LogPowerSums::Value power_sums_at(const PosteriorState& state, double beta, bool with_derivatives) {
    if (beta <= LogPowerSums::kMaxBeta) return state.power_sums().evaluate(beta, with_derivatives);
    return direct_sums(state, beta, with_derivatives);
}

}  // namespace

LogTDerivatives log_t_of_beta_derivatives(const PosteriorState& state, double beta) {
    if (!(beta > 0.0)) throw DomainError("T(beta): beta must be positive");
    if (state.count() == 0) return {-beta * std::log(state.prior().a), -std::log(state.prior().a), 0.0};
    return combine(state, beta, power_sums_at(state, beta, true));
}

double log_t_of_beta(const PosteriorState& state, double beta) {
    if (!(beta > 0.0)) throw DomainError("T(beta): beta must be positive");
    if (state.count() == 0) return -beta * std::log(state.prior().a);
    return combine(state, beta, power_sums_at(state, beta, false)).value;
}

double log_t_of_beta_direct(const PosteriorState& state, double beta) {
    if (!(beta > 0.0)) throw DomainError("T(beta): beta must be positive");
    if (state.count() == 0) return -beta * std::log(state.prior().a);
    return combine(state, beta, direct_sums(state, beta, false)).value;
}

double t_of_beta(const PosteriorState& state, double beta) { return std::exp(log_t_of_beta(state, beta)); }

double beta_marginal_log_density(const PosteriorState& state, double beta) {
    if (!state.prior().contains(beta)) return kNegInf;
    const double count = static_cast<double>(state.count());
    return count * std::log(beta) - beta * std::log(state.prior().a) + (beta - 1.0) * state.sum_log_x() -
           (count + 1.0) * log_t_of_beta(state, beta);
}

BetaPosterior::BetaPosterior(const PosteriorState& state, const QuadratureOptions& options) : state_(state) {
    const PriorSpec& prior = state.prior();
    lower_ = prior.beta1;
    upper_ = prior.beta2;

    double lo = prior.beta1;
    double hi = prior.beta2;
    double curvature = 0.0;
    if (state.count() == 0) {
        mode_ = 0.5 * (lo + hi);
    } else {
        // The log marginal is concave: safeguarded Newton on its slope.
        auto slope_at = [&](double b) { return marginal_slope(state, b, log_t_of_beta_derivatives(state, b)); };
        if (slope_at(lo) <= 0.0) {
            mode_ = lo;
        } else if (slope_at(hi) >= 0.0) {
            mode_ = hi;
        } else {
            double a = lo;
            double b = hi;
            double x = 0.5 * (a + b);
            for (int it = 0; it < 100; ++it) {
                const LogTDerivatives lt = log_t_of_beta_derivatives(state, x);
                const double g = marginal_slope(state, x, lt);
                const double h = marginal_curvature(state, x, lt);
                if (g > 0.0) a = x; else b = x;
                double next = (h < 0.0) ? x - g / h : 0.5 * (a + b);
                if (!(next > a && next < b)) next = 0.5 * (a + b);
                const bool done = std::abs(next - x) <= 1e-13 * x || b - a <= 1e-13 * x;
                x = next;
                if (done) break;
            }
            mode_ = x;
        }
        curvature = marginal_curvature(state, mode_, log_t_of_beta_derivatives(state, mode_));
    }

    auto log_w = [&](double b) {
        const double count = static_cast<double>(state.count());
        return count * std::log(b) - b * std::log(prior.a) + (b - 1.0) * state.sum_log_x() -
               (count + 1.0) * log_t_of_beta(state, b);
    };
    shift_ = log_w(mode_);

    // Trim the interval to where the weight exceeds e^{-kTailDrop} of its
    // peak. The log weight is concave, so each cut point is a single root.
    if (curvature < 0.0) {
        const double sd = 1.0 / std::sqrt(-curvature);
        auto cut = [&](double direction, double bound) {
            double inner = mode_;
            double step = 8.0 * sd;
            double outer = mode_ + direction * step;
            while ((outer - bound) * direction < 0.0 && log_w(outer) > shift_ - kTailDrop) {
                inner = outer;
                step *= 2.0;
                outer = mode_ + direction * step;
            }
            if ((outer - bound) * direction >= 0.0) return bound;
            for (int it = 0; it < 30 && std::abs(outer - inner) > 0.05 * sd; ++it) {
                const double mid = 0.5 * (inner + outer);
                if (log_w(mid) > shift_ - kTailDrop) inner = mid; else outer = mid;
            }
            return outer;
        };
        lo = cut(-1.0, lo);
        hi = cut(1.0, hi);
    }

    quad_ = integrate_adaptive([&](double b) { return std::exp(log_w(b) - shift_); }, lo, hi, options);
    if (!quad_.converged) throw NumericError("beta posterior: quadrature did not converge");
    integral_ = quad_.value;

    double first_moment = 0.0;
    for (const auto& p : quad_.panels) {
        std::array<double, QuadraturePanel::kNodes> g{};
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = p.node(j);
        first_moment += p.weighted(g);
    }
    mean_ = first_moment / integral_;
    // Roundoff can only push the mean onto the boundary for a degenerate interval.
    mean_ = std::clamp(mean_, std::nextafter(lower_, upper_), std::nextafter(upper_, lower_));
}

double BetaPosterior::log_density(double beta) const {
    return beta_marginal_log_density(state_, beta) - log_normalizer();
}

double BetaPosterior::density(double beta) const { return std::exp(log_density(beta)); }

double BetaPosterior::cdf(double beta) const {
    if (quad_.panels.empty() || beta <= quad_.panels.front().lo) return 0.0;
    if (beta >= quad_.panels.back().hi) return 1.0;
    return std::clamp(quad_.cumulative(beta) / integral_, 0.0, 1.0);
}

double BetaPosterior::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("beta quantile: p must lie in (0,1)");
    const double target = p * integral_;
    double acc = 0.0;
    for (const auto& panel : quad_.panels) {
        if (acc + panel.value < target) {
            acc += panel.value;
            continue;
        }
        double a = panel.lo;
        double b = panel.hi;
        while (b - a > 1e-12 * std::max(1.0, b)) {
            const double mid = 0.5 * (a + b);
            if (acc + panel.partial(mid) < target) a = mid; else b = mid;
        }
        return 0.5 * (a + b);
    }
    return quad_.panels.back().hi;
}

double estimate_beta(const PosteriorState& state, const QuadratureOptions& options) {
    return BetaPosterior(state, options).mean();
}

double beta_bar(const PosteriorState& state) {
    const auto history = state.beta_hat_history();
    if (history.empty()) throw StateError("beta_bar: no estimates accumulated yet");
    return std::accumulate(history.begin(), history.end(), 0.0) / static_cast<double>(history.size());
}

double xr_conditional_log_pdf(double x_r, const PosteriorState& state, double beta_bar) {
    if (!(x_r > 0.0)) throw DomainError("xr_conditional_log_pdf: x_R must be positive");
    if (!(beta_bar > 0.0)) throw DomainError("xr_conditional_log_pdf: beta_bar must be positive");
    const double shape = static_cast<double>(state.count()) + 1.0;
    const double log_t = log_t_of_beta(state, beta_bar);
    const double log_x = std::log(x_r);
    return std::log(beta_bar) - (beta_bar * shape + 1.0) * log_x - log_gamma(shape) + shape * log_t -
           std::exp(log_t - beta_bar * log_x);
}

double estimate_xr(const PosteriorState& state, double beta_bar) {
    if (!(beta_bar > 0.0)) throw DomainError("estimate_xr: beta_bar must be positive");
    const double shape = static_cast<double>(state.count()) + 1.0;
    if (!(shape - 1.0 / beta_bar > 0.0)) {
        throw DivergentMeanError("estimate_xr: posterior mean of x_R does not exist (N + 1 <= 1/beta_bar)");
    }
    return std::exp(log_gamma(shape - 1.0 / beta_bar) - log_gamma(shape) +
                    log_t_of_beta(state, beta_bar) / beta_bar);
}

PosteriorState absorb_sample(const PosteriorState& state, std::span<const double> sample,
                             const AbsorbOptions& options) {
    if (sample.size() != state.n()) throw ShapeError("absorb_sample: sample size differs from subgroup size");
    check_sample(sample);

    PosteriorState next = state;
    if (state.k() >= 1 && options.reelicit) {
        next.prior_ = next_prior(state.beta_hat_history_.back(), state.xr_hat_history_.back(), state.prior_);
    }
    next.append(sample);
    next.beta_hat_history_.push_back(estimate_beta(next, options.quadrature));
    const double bar = beta_bar(next);
    next.xr_hat_history_.push_back(estimate_xr(next, bar));
    return next;
}

PosteriorState rebuild_windowed(const PosteriorState& state, std::size_t window) {
    if (window == 0) throw RangeError("rebuild_windowed: window must be positive");
    if (window > state.k()) throw RangeError("rebuild_windowed: window exceeds the number of samples");

    const std::size_t keep = window * state.n();
    const auto obs = state.observations();
    const auto betas = state.beta_hat_history();
    const auto xrs = state.xr_hat_history();

    PosteriorState next = PosteriorState::initial(
        next_prior(beta_bar(state), xrs.back(), state.prior()), state.n(), state.reliability());
    next.append(obs.subspan(obs.size() - keep));
    next.beta_hat_history_.assign(betas.end() - static_cast<std::ptrdiff_t>(window), betas.end());
    next.xr_hat_history_.assign(xrs.end() - static_cast<std::ptrdiff_t>(window), xrs.end());
    return next;
}

}  // namespace wbchart
