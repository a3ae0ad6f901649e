#pragma once

#include <optional>

#include "wbchart/posterior.hpp"

namespace wbchart {

// Probability limits at false-alarm risk alpha. cl is the current point
// estimate and plays no part in signalling.
struct ControlLimits {
    double lcl = 0.0;
    double ucl = 0.0;
    double cl = 0.0;
    double alpha = 0.0;
    std::optional<double> gamma_shape;  // N + 1, x_R chart only

    bool contains(double value) const { return value >= lcl && value <= ucl; }
    double width() const { return ucl - lcl; }

    friend bool operator==(const ControlLimits&, const ControlLimits&) = default;
};

// Throws DomainError unless 0 < alpha < 1.
void check_alpha(double alpha);

// alpha/2 and 1-alpha/2 quantiles of x_R | data, beta_bar, through
// z = x_R^{-beta_bar} T(beta_bar) ~ Gamma(N+1): the upper Gamma quantile maps
// to the lower x_R limit.
ControlLimits xr_limits(const PosteriorState& state, double beta_bar, double alpha);

struct CoverageReport {
    double coverage = 0.0;
    double expected = 0.0;
    double abs_error = 0.0;
};

// Integrates the x_R conditional density between the limits directly in x_R
// and throws ConsistencyError if the mass differs from 1 - alpha by more than
// `tolerance`.
CoverageReport xr_limit_check(const ControlLimits& limits, const PosteriorState& state, double beta_bar,
                              double tolerance = 1e-6);

// alpha/2 and 1-alpha/2 quantiles of the beta marginal posterior.
ControlLimits beta_limits(const PosteriorState& state, double alpha, const QuadratureOptions& options = {});

}  // namespace wbchart
