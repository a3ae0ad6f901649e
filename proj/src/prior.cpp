#include "wbchart/prior.hpp"

#include <cmath>
#include <limits>

#include "wbchart/error.hpp"
#include "wbchart/special_functions.hpp"

namespace wbchart {

PriorSpec PriorSpec::elicit(double beta1, double beta2, double x_bar) {
    if (!(x_bar > 0.0) || !std::isfinite(x_bar)) throw DomainError("prior: x_bar must be positive");
    PriorSpec spec;
    spec.beta1 = beta1;
    spec.beta2 = beta2;
    spec.b_bar = elicit_b_bar(beta1, beta2);
    spec.a = elicit_a(x_bar, spec.b_bar);
    spec.x_bar = x_bar;
    return spec;
}

double elicit_b_bar(double beta1, double beta2) {
    if (!(beta1 > 0.0) || !std::isfinite(beta2)) throw DomainError("prior: beta1 must be positive");
    if (!(beta1 < beta2)) throw DomainError("prior: beta1 must be smaller than beta2");
    if (!(beta1 + beta2 > 2.0)) throw RestrictionError("prior: beta1 + beta2 must exceed 2");
    return 0.5 * (beta1 + beta2);
}

double elicit_a(double x_bar, double b_bar) {
    if (!(x_bar > 0.0) || !std::isfinite(x_bar)) throw DomainError("prior: x_bar must be positive");
    if (!(b_bar > 1.0)) throw RestrictionError("prior: b_bar must exceed 1");
    return gamma_function(1.0 - 1.0 / b_bar) / x_bar;
}

double joint_prior_log_pdf(double x_r, double beta, const PriorSpec& spec) {
    if (!(x_r > 0.0)) throw DomainError("joint_prior_log_pdf: x_R must be positive");
    if (!spec.contains(beta)) return -std::numeric_limits<double>::infinity();
    const double log_ax = std::log(spec.a * x_r);
    return -std::log(spec.beta2 - spec.beta1) + std::log(spec.a * beta) - (beta + 1.0) * log_ax -
           std::exp(-beta * log_ax);
}

PriorSpec next_prior(double beta_hat_prev, double x_hat_prev, const PriorSpec& current) {
    if (!(beta_hat_prev > 0.0) || !(x_hat_prev > 0.0)) {
        throw DomainError("next_prior: previous estimates must be positive");
    }
    PriorSpec next = current;
    if (beta_hat_prev > 1.0) {
        next.beta1 = 0.5 * beta_hat_prev;
        next.beta2 = 1.5 * beta_hat_prev;
        next.b_bar = beta_hat_prev;
    }
    next.x_bar = x_hat_prev;
    next.a = elicit_a(x_hat_prev, next.b_bar);
    return next;
}

}  // namespace wbchart
