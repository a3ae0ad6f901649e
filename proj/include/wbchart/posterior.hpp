#pragma once

// Accumulated-data posterior for (x_R, beta) under a Weibull likelihood, a
// Uniform prior on beta and an Inverse Weibull prior on x_R.
//
// With N = k n observations the joint posterior kernel is
//
//   beta^{N+1} a^{-beta} x_R^{-beta(N+1)-1} prod x_i^{beta-1} exp[-x_R^{-beta} T(beta)]
//   T(beta) = a^{-beta} + ln(1/R) sum_i x_i^beta
//
// Integrating x_R out leaves the beta marginal
//
//   w(beta) = beta^N a^{-beta} prod x_i^{beta-1} T(beta)^{-(N+1)}
//
// which is log-concave on (beta1, beta2). Everything here is evaluated in
// log space; T is always formed by log-sum-exp.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wbchart/power_sums.hpp"
#include "wbchart/prior.hpp"
#include "wbchart/quadrature.hpp"

namespace wbchart {

class PosteriorState;

struct AbsorbOptions {
    // Re-elicit the prior from the previous step's estimates before absorbing.
    bool reelicit = true;
    QuadratureOptions quadrature{};
};

// Immutable snapshot of everything the chart has learned so far.
class PosteriorState {
public:
    // The k = 0 state: no data, the engineer's prior.
    static PosteriorState initial(const PriorSpec& prior, std::size_t subgroup_size, double reliability);

    // Reassembles a state from serialized parts. Validates every invariant.
    static PosteriorState restore(const PriorSpec& prior, std::size_t subgroup_size, double reliability,
                                  std::vector<double> observations, std::vector<double> beta_hats,
                                  std::vector<double> xr_hats);

    std::size_t k() const { return beta_hat_history_.size(); }
    std::size_t n() const { return n_; }
    std::size_t count() const { return observations_.size(); }
    double reliability() const { return reliability_; }
    const PriorSpec& prior() const { return prior_; }

    std::span<const double> observations() const { return observations_; }
    std::span<const double> log_observations() const { return log_observations_; }
    double sum_log_x() const { return sum_log_x_; }
    double max_log_x() const { return max_log_x_; }
    const LogPowerSums& power_sums() const { return power_sums_; }

    // beta_hat_1 .. beta_hat_k (posterior means of beta after each step).
    std::span<const double> beta_hat_history() const { return beta_hat_history_; }
    // x_hat_{R,1} .. x_hat_{R,k}, each computed with the running beta_bar.
    std::span<const double> xr_hat_history() const { return xr_hat_history_; }

    friend bool operator==(const PosteriorState&, const PosteriorState&) = default;

    friend PosteriorState absorb_sample(const PosteriorState& state, std::span<const double> sample,
                                        const AbsorbOptions& options);
    friend PosteriorState rebuild_windowed(const PosteriorState& state, std::size_t window);

private:
    PosteriorState() = default;
    void append(std::span<const double> values);

    PriorSpec prior_{};
    std::size_t n_ = 0;
    double reliability_ = 0.0;
    std::vector<double> observations_;
    std::vector<double> log_observations_;
    double sum_log_x_ = 0.0;
    double max_log_x_ = 0.0;
    LogPowerSums power_sums_;
    std::vector<double> beta_hat_history_;
    std::vector<double> xr_hat_history_;
};

// ln T(beta) together with its first two derivatives in beta.
struct LogTDerivatives {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// n ln beta - beta n ln x_R + (beta-1) sum ln x_i - x_R^{-beta} ln(1/R) sum x_i^beta
double log_likelihood(std::span<const double> sample, double x_r, double beta, double reliability);

double log_t_of_beta(const PosteriorState& state, double beta);
// Same quantity by a single pass over the raw observations.
double log_t_of_beta_direct(const PosteriorState& state, double beta);
LogTDerivatives log_t_of_beta_derivatives(const PosteriorState& state, double beta);
double t_of_beta(const PosteriorState& state, double beta);

// Unnormalized log marginal of beta; -inf outside (beta1, beta2).
double beta_marginal_log_density(const PosteriorState& state, double beta);

// The beta marginal integrated once by adaptive quadrature. Holds the panel
// decomposition so the CDF and quantiles come without further integrand calls.
class BetaPosterior {
public:
    BetaPosterior(const PosteriorState& state, const QuadratureOptions& options = {});

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double mode() const { return mode_; }
    double mean() const { return mean_; }

    // ln of the integral of exp(beta_marginal_log_density) over (beta1, beta2).
    double log_normalizer() const { return shift_ + std::log(integral_); }

    double log_density(double beta) const;
    double density(double beta) const;
    double cdf(double beta) const;
    // Bisection on the cached CDF to 1e-12 in beta.
    double quantile(double p) const;

    const QuadratureResult& quadrature() const { return quad_; }

private:
    PosteriorState state_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double mode_ = 0.0;
    double shift_ = 0.0;
    double integral_ = 0.0;
    double mean_ = 0.0;
    QuadratureResult quad_;
};

// Posterior mean of beta (0 data points gives the Uniform midpoint).
double estimate_beta(const PosteriorState& state, const QuadratureOptions& options = {});

// Running average of the per-step beta estimates.
double beta_bar(const PosteriorState& state);

// Log density of x_R given the data and beta = beta_bar.
double xr_conditional_log_pdf(double x_r, const PosteriorState& state, double beta_bar);

// Closed-form posterior mean of x_R given beta_bar:
// Gamma(N+1-1/beta_bar)/Gamma(N+1) T(beta_bar)^{1/beta_bar}
double estimate_xr(const PosteriorState& state, double beta_bar);

PosteriorState absorb_sample(const PosteriorState& state, std::span<const double> sample,
                             const AbsorbOptions& options = {});

// Keeps only the last `window` subgroups and re-elicits the prior from the
// full-history (beta_bar_k, x_hat_{R,k}).
PosteriorState rebuild_windowed(const PosteriorState& state, std::size_t window);

}  // namespace wbchart
