#pragma once

namespace wbchart {

// Joint prior on (x_R, beta): Uniform(beta1, beta2) for beta and an Inverse
// Weibull with scale a and shape b = beta for x_R. a is fixed by requiring
// the Inverse Weibull mean to equal the anticipated percentile x_bar at the
// anticipated shape b_bar.
struct PriorSpec {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double a = 0.0;
    double b_bar = 0.0;
    double x_bar = 0.0;

    // Builds a spec from engineering knowledge: the beta interval and x_bar.
    static PriorSpec elicit(double beta1, double beta2, double x_bar);

    bool contains(double beta) const { return beta > beta1 && beta < beta2; }

    friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

// (beta1 + beta2) / 2. Throws RestrictionError unless beta1 + beta2 > 2.
double elicit_b_bar(double beta1, double beta2);

// Gamma(1 - 1/b_bar) / x_bar. Throws RestrictionError unless b_bar > 1.
double elicit_a(double x_bar, double b_bar);

// Log of the joint prior density; -inf outside beta1 < beta < beta2.
double joint_prior_log_pdf(double x_r, double beta, const PriorSpec& spec);

// Re-elicitation from the previous step's estimates. With beta_hat > 1 the
// interval becomes (beta_hat/2, 1.5 beta_hat) and b_bar = beta_hat; otherwise
// the interval and b_bar are kept. a is always recomputed from x_hat.
PriorSpec next_prior(double beta_hat_prev, double x_hat_prev, const PriorSpec& current);

}  // namespace wbchart
