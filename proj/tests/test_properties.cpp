// Randomized invariants over generated posterior states.
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wbchart/limits.hpp"
#include "wbchart/posterior.hpp"

using namespace wbchart;

namespace {

struct RandomCase {
    PriorSpec prior;
    PosteriorState state;
};

RandomCase random_case(RngStream& rng) {
    const double beta = 0.8 + 10.0 * rng.uniform_open();
    const double delta = std::exp(4.0 * rng.uniform_open() - 2.0);
    const double reliability = 0.5 + 0.499 * rng.uniform_open();
    const std::size_t n = 1 + rng.uniform_index(6);
    const std::size_t k = 1 + rng.uniform_index(12);
    const double b1 = std::max(0.3, beta * (0.3 + 0.5 * rng.uniform_open()));
    const double b2 = std::max(2.3 - b1, beta * (1.2 + rng.uniform_open()));
    const WeibullModel model(delta, beta);
    const PriorSpec prior = PriorSpec::elicit(b1, b2, percentile_of(model, reliability) * (0.5 + rng.uniform_open()));
    auto s = PosteriorState::initial(prior, n, reliability);
    for (std::size_t i = 0; i < k; ++i) s = absorb_sample(s, fixtures::draw(model, n, rng.next_u64()));
    return {prior, s};
}

}  // namespace

TEST_CASE("beta estimates stay inside their prior interval") {
    RngStream rng(101);
    for (int i = 0; i < 1000; ++i) {
        const PriorSpec prior = PriorSpec::elicit(0.5 + 3 * rng.uniform_open(), 4.0 + 10 * rng.uniform_open(), 1.0);
        const double beta = 0.5 + 15.0 * rng.uniform_open();
        const auto xs = fixtures::draw(WeibullModel(1.0, beta), 1 + rng.uniform_index(30), rng.next_u64());
        const auto s = fixtures::raw_state(prior, xs, 0.9);
        const double b = estimate_beta(s);
        CHECK(b > prior.beta1);
        CHECK(b < prior.beta2);
    }
}

TEST_CASE("limits bracket the x_R estimate and hold their coverage") {
    RngStream rng(202);
    for (int i = 0; i < 60; ++i) {
        const auto c = random_case(rng);
        const double bb = beta_bar(c.state);
        const auto l = xr_limits(c.state, bb, 0.0027);
        CHECK(l.lcl < l.cl);
        CHECK(l.cl < l.ucl);
        CHECK(xr_limit_check(l, c.state, bb).abs_error < 1e-6);
        const auto bl = beta_limits(c.state, 0.0027);
        CHECK(bl.lcl > c.state.prior().beta1);
        CHECK(bl.ucl < c.state.prior().beta2);
    }
}

TEST_CASE("Gamma transform on random states") {
    RngStream rng(303);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_case(rng);
        const double bb = beta_bar(c.state);
        const double t = t_of_beta(c.state, bb);
        const GammaShape g(static_cast<double>(c.state.count()) + 1.0);
        const double x = estimate_xr(c.state, bb) * (0.7 + 0.6 * rng.uniform_open());
        const double z = std::pow(x, -bb) * t;
        const double lhs = xr_conditional_log_pdf(x, c.state, bb);
        const double rhs = log_gamma_pdf(z, g) + std::log(bb * z / x);
        CHECK(std::abs(std::exp(lhs) - std::exp(rhs)) < 1e-10 * std::max(1.0, std::exp(lhs)));
    }
}

TEST_CASE("extreme inputs stay finite") {
    const PriorSpec prior = PriorSpec::elicit(1.0, 20.0, 1.0);
    std::vector<double> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(std::pow(10.0, -3.0 + 6.0 * i / 499.0));
    const auto s = fixtures::raw_state(prior, xs, 0.999);
    for (double b : {1.01, 5.0, 19.9}) {
        CHECK(std::isfinite(log_t_of_beta(s, b)));
        CHECK(std::isfinite(beta_marginal_log_density(s, b)));
    }
    const double b = estimate_beta(s);
    CHECK(std::isfinite(b));
    CHECK(std::isfinite(estimate_xr(s, b)));
    const auto l = xr_limits(s, b, 0.0027);
    CHECK(std::isfinite(l.lcl));
    CHECK(std::isfinite(l.ucl));
}

TEST_CASE("more in-control data narrows the x_R posterior") {
    const WeibullModel model(3.2, 4.8);
    auto s = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    double previous = 1e300;
    for (int k = 1; k <= 40; ++k) {
        s = absorb_sample(s, fixtures::draw(model, 5, 900 + k));
        if (k % 10 == 0) {
            const double w = xr_limits(s, beta_bar(s), 0.0027).width();
            CHECK(w < previous);
            previous = w;
        }
    }
}
