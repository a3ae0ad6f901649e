#pragma once

// Weibull, Inverse Weibull and standard Gamma primitives, plus the algebra
// linking the (scale, shape) and (percentile, shape) parameterizations.

#include "wbchart/rng.hpp"

namespace wbchart {

// Two-parameter Weibull law F(x) = 1 - exp[-(x/delta)^beta].
class WeibullModel {
public:
    WeibullModel(double delta, double beta);

    double delta() const { return delta_; }
    double beta() const { return beta_; }

    friend bool operator==(const WeibullModel&, const WeibullModel&) = default;

private:
    double delta_;
    double beta_;
};

// The same law described by its percentile x_R at reliability R:
// F(x) = 1 - exp[-ln(1/R) (x/x_R)^beta].
class PercentileView {
public:
    PercentileView(double x_r, double beta, double reliability);

    double x_r() const { return x_r_; }
    double beta() const { return beta_; }
    double reliability() const { return reliability_; }

private:
    double x_r_;
    double beta_;
    double reliability_;
};

// Shape of a unit-scale Gamma law.
class GammaShape {
public:
    explicit GammaShape(double value);
    double value() const { return value_; }

private:
    double value_;
};

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

// Throws DomainError unless 0 < r < 1.
void check_reliability(double r);

double weibull_cdf(double x, const WeibullModel& model);

// Percentile view evaluated at x; equals weibull_cdf of the matching model.
double weibull_cdf(double x, const PercentileView& view);

// x_R = delta [ln(1/R)]^{1/beta}
double percentile_of(const WeibullModel& model, double reliability);

// delta = x_R [ln(1/R)]^{-1/beta}
WeibullModel params_from_percentile(const PercentileView& view);

Moments weibull_moments(const WeibullModel& model);

// F^{-1}(u) = delta (-ln(1 - u))^{1/beta}
double weibull_inverse_cdf(double u, const WeibullModel& model);

double weibull_sample(const WeibullModel& model, RngStream& rng);

// Inverse Weibull density a b (a x)^{-(b+1)} exp[-(a x)^{-b}].
double inv_weibull_pdf(double x_r, double a, double b);

// Gamma(1 - 1/b) / a; requires b > 1.
double inv_weibull_mean(double a, double b);

double gamma_pdf(double z, const GammaShape& shape);
double log_gamma_pdf(double z, const GammaShape& shape);

// Regularized lower incomplete gamma P(shape, z).
double gamma_cdf(double z, const GammaShape& shape);

// z with P(shape, z) = p to absolute 1e-10. Wilson-Hilferty start, damped
// Newton, bisection on [0, g + 20 sqrt(g) + 50] as fallback.
double gamma_quantile(double p, const GammaShape& shape);

}  // namespace wbchart
