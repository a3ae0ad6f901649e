#include "wbchart/distributions.hpp"

#include <cmath>
#include <limits>

#include "wbchart/error.hpp"
#include "wbchart/special_functions.hpp"

namespace wbchart {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

constexpr double kQuantileTol = 1e-10;
constexpr int kNewtonIterations = 100;

}  // namespace

WeibullModel::WeibullModel(double delta, double beta) : delta_(delta), beta_(beta) {
    if (!positive_finite(delta) || !positive_finite(beta)) {
        throw DomainError("WeibullModel: delta and beta must be positive and finite");
    }
}

PercentileView::PercentileView(double x_r, double beta, double reliability)
    : x_r_(x_r), beta_(beta), reliability_(reliability) {
    if (!positive_finite(x_r) || !positive_finite(beta)) {
        throw DomainError("PercentileView: x_R and beta must be positive and finite");
    }
    check_reliability(reliability);
}

GammaShape::GammaShape(double value) : value_(value) {
    if (!positive_finite(value)) throw DomainError("GammaShape: shape must be positive and finite");
}

void check_reliability(double r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("reliability must lie in (0,1)");
}

double weibull_cdf(double x, const WeibullModel& model) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("weibull_cdf: x must be finite and non-negative");
    return -std::expm1(-std::pow(x / model.delta(), model.beta()));
}

double weibull_cdf(double x, const PercentileView& view) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("weibull_cdf: x must be finite and non-negative");
    const double ln_inv_r = -std::log(view.reliability());
    return -std::expm1(-ln_inv_r * std::pow(x / view.x_r(), view.beta()));
}

double percentile_of(const WeibullModel& model, double reliability) {
    check_reliability(reliability);
    return model.delta() * std::pow(-std::log(reliability), 1.0 / model.beta());
}

WeibullModel params_from_percentile(const PercentileView& view) {
    const double ln_inv_r = -std::log(view.reliability());
    return WeibullModel(view.x_r() * std::pow(ln_inv_r, -1.0 / view.beta()), view.beta());
}

Moments weibull_moments(const WeibullModel& model) {
    const double g1 = gamma_function(1.0 + 1.0 / model.beta());
    const double g2 = gamma_function(1.0 + 2.0 / model.beta());
    const double var = model.delta() * model.delta() * (g2 - g1 * g1);
    return {model.delta() * g1, std::sqrt(std::max(var, 0.0))};
}

double weibull_inverse_cdf(double u, const WeibullModel& model) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("weibull_inverse_cdf: u must lie in (0,1)");
    return model.delta() * std::pow(-std::log1p(-u), 1.0 / model.beta());
}

double weibull_sample(const WeibullModel& model, RngStream& rng) {
    return weibull_inverse_cdf(rng.uniform_open(), model);
}

double inv_weibull_pdf(double x_r, double a, double b) {
    if (!positive_finite(x_r) || !positive_finite(a) || !positive_finite(b)) {
        throw DomainError("inv_weibull_pdf: arguments must be positive");
    }
    const double log_ax = std::log(a * x_r);
    return std::exp(std::log(a * b) - (b + 1.0) * log_ax - std::exp(-b * log_ax));
}

double inv_weibull_mean(double a, double b) {
    if (!positive_finite(a)) throw DomainError("inv_weibull_mean: a must be positive");
    if (!(b > 1.0)) throw DivergentMeanError("inv_weibull_mean: mean diverges for b <= 1");
    return gamma_function(1.0 - 1.0 / b) / a;
}

double log_gamma_pdf(double z, const GammaShape& shape) {
    if (!(z >= 0.0)) throw DomainError("gamma_pdf: z must be non-negative");
    const double g = shape.value();
    if (z == 0.0) {
        if (g == 1.0) return 0.0;
        return g > 1.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    }
    return (g - 1.0) * std::log(z) - z - log_gamma(g);
}

double gamma_pdf(double z, const GammaShape& shape) { return std::exp(log_gamma_pdf(z, shape)); }

double gamma_cdf(double z, const GammaShape& shape) { return regularized_gamma_p(shape.value(), z); }

double gamma_quantile(double p, const GammaShape& shape) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma_quantile: p must lie in (0,1)");
    const double g = shape.value();

    // P(z) - p, evaluated through Q in the upper tail to keep precision.
    auto residual = [&](double z) {
        return p <= 0.5 ? regularized_gamma_p(g, z) - p : (1.0 - p) - regularized_gamma_q(g, z);
    };

    double lo = 0.0;
    double hi = g + 20.0 * std::sqrt(g) + 50.0;
    while (residual(hi) < 0.0) hi *= 2.0;

    const double c = 1.0 / (9.0 * g);
    double z = g * std::pow(1.0 - c + normal_quantile(p) * std::sqrt(c), 3);
    if (!(z > 0.0) || !(z < hi)) z = 0.5 * hi;

    for (int it = 0; it < kNewtonIterations; ++it) {
        const double r = residual(z);
        if (r < 0.0) lo = z; else hi = z;
        const double density = gamma_pdf(z, shape);
        double next = (density > 0.0) ? z - r / density : 0.5 * (lo + hi);
        // Damp steps that leave the bracket.
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - z);
        z = next;
        if (step <= 1e-15 * std::max(1.0, z)) break;
    }
    if (std::abs(residual(z)) <= kQuantileTol) return z;

    // Bisection fallback.
    lo = 0.0;
    hi = g + 20.0 * std::sqrt(g) + 50.0;
    while (residual(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) lo = mid; else hi = mid;
    }
    z = 0.5 * (lo + hi);
    if (std::abs(residual(z)) > kQuantileTol) throw NumericError("gamma_quantile: failed to converge");
    return z;
}

}  // namespace wbchart
