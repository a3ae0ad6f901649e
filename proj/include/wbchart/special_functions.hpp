#pragma once

// Log-gamma and regularized incomplete gamma functions.
//
// log_gamma uses the Lanczos approximation (g = 7, nine terms) with the
// reflection formula below 1/2. The incomplete gamma ratios use the power
// series for x < a + 1 and the modified Lentz continued fraction otherwise.

namespace wbchart {

// ln|Gamma(x)| for x not a non-positive integer.
double log_gamma(double x);

// Gamma(x) for x > 0. Throws DomainError otherwise.
double gamma_function(double x);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
double regularized_gamma_q(double a, double x);

// Inverse of the standard normal CDF (Acklam's rational approximation, |rel err| < 1.2e-9).
double normal_quantile(double p);

}  // namespace wbchart
