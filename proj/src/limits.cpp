#include "wbchart/limits.hpp"

#include <cmath>
#include <sstream>

#include "wbchart/distributions.hpp"
#include "wbchart/error.hpp"

namespace wbchart {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

ControlLimits xr_limits(const PosteriorState& state, double beta_bar, double alpha) {
    check_alpha(alpha);
    if (!(beta_bar > 0.0)) throw DomainError("xr_limits: beta_bar must be positive");
    const GammaShape shape(static_cast<double>(state.count()) + 1.0);
    const double log_t = log_t_of_beta(state, beta_bar);
    const double z_upper = gamma_quantile(1.0 - 0.5 * alpha, shape);
    const double z_lower = gamma_quantile(0.5 * alpha, shape);

    ControlLimits limits;
    limits.alpha = alpha;
    limits.gamma_shape = shape.value();
    limits.lcl = std::exp((log_t - std::log(z_upper)) / beta_bar);
    limits.ucl = std::exp((log_t - std::log(z_lower)) / beta_bar);
    if (!(limits.lcl < limits.ucl)) throw NumericError("xr_limits: limits out of order");
    limits.cl = estimate_xr(state, beta_bar);
    return limits;
}

CoverageReport xr_limit_check(const ControlLimits& limits, const PosteriorState& state, double beta_bar,
                              double tolerance) {
    QuadratureOptions options;
    options.rel_tol = 1e-12;
    options.initial_panels = 16;
    const auto quad = integrate_adaptive(
        [&](double x) { return std::exp(xr_conditional_log_pdf(x, state, beta_bar)); }, limits.lcl, limits.ucl,
        options);
    CoverageReport report;
    report.coverage = quad.value;
    report.expected = 1.0 - limits.alpha;
    report.abs_error = std::abs(report.coverage - report.expected);
    if (report.abs_error > tolerance) {
        std::ostringstream msg;
        msg << "xr_limit_check: coverage " << report.coverage << " differs from " << report.expected;
        throw ConsistencyError(msg.str());
    }
    return report;
}

ControlLimits beta_limits(const PosteriorState& state, double alpha, const QuadratureOptions& options) {
    check_alpha(alpha);
    const BetaPosterior posterior(state, options);
    ControlLimits limits;
    limits.alpha = alpha;
    limits.lcl = posterior.quantile(0.5 * alpha);
    limits.ucl = posterior.quantile(1.0 - 0.5 * alpha);
    if (!(limits.lcl < limits.ucl)) throw NumericError("beta_limits: limits out of order");
    limits.cl = posterior.mean();
    return limits;
}

}  // namespace wbchart
