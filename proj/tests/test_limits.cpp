#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wbchart/error.hpp"
#include "wbchart/limits.hpp"

using namespace wbchart;

TEST_CASE("x_R limits map Gamma quantiles reciprocally") {
    // No data and a = 1, so T = 1: x_R = z^{-1/beta_bar} with z ~ Gamma(1).
    const PriorSpec unit{0.5, 3.5, 1.0, 2.0, 1.0};
    const auto l = xr_limits(PosteriorState::initial(unit, 1, 0.99), 2.0, 0.0027);
    CHECK(l.lcl == doctest::Approx(std::sqrt(1.0 / gamma_quantile(1.0 - 0.00135, GammaShape(1.0)))).epsilon(1e-13));
    CHECK(l.ucl == doctest::Approx(std::sqrt(1.0 / gamma_quantile(0.00135, GammaShape(1.0)))).epsilon(1e-13));
    CHECK(l.lcl < l.ucl);
    REQUIRE(l.gamma_shape);
    CHECK(*l.gamma_shape == 1.0);
}

TEST_CASE("x_R limits after ten carbon-fibre subgroups") {
    const auto s = fixtures::carbon_state(10);
    const auto l = xr_limits(s, beta_bar(s), 0.0027);
    CHECK(std::abs(l.lcl - 1.08) < 0.005);
    CHECK(std::abs(l.ucl - 1.30) < 0.005);
    CHECK(l.cl == doctest::Approx(s.xr_hat_history().back()).epsilon(1e-14));
}

TEST_CASE("x_R limit coverage by direct integration") {
    const auto s = fixtures::carbon_state(10);
    const double bb = beta_bar(s);
    for (double alpha : {0.0027, 0.05, 0.5}) {
        const auto l = xr_limits(s, bb, alpha);
        const auto report = xr_limit_check(l, s, bb);
        CHECK(std::abs(report.coverage - (1.0 - alpha)) < 1e-6);
        const double oracle_mass = oracle::simpson(
            [&](double x) { return std::exp(xr_conditional_log_pdf(x, s, bb)); }, l.lcl, l.ucl, 20000);
        CHECK(std::abs(oracle_mass - (1.0 - alpha)) < 1e-8);
    }
    // Nearly all risk: both limits close in on the median.
    const auto tight = xr_limits(s, bb, 1.0 - 1e-6);
    CHECK(tight.width() < 1e-6);
    const double median = std::pow(t_of_beta(s, bb) / gamma_quantile(0.5, GammaShape(51.0)), 1.0 / bb);
    CHECK(tight.lcl == doctest::Approx(median).epsilon(1e-6));
}

TEST_CASE("limit checks reject wrong coverage and bad alpha") {
    const auto s = fixtures::carbon_state(3);
    auto l = xr_limits(s, beta_bar(s), 0.0027);
    l.ucl *= 1.05;
    CHECK_THROWS_AS(xr_limit_check(l, s, beta_bar(s)), ConsistencyError);
    CHECK_THROWS_AS(check_alpha(0.0), DomainError);
    CHECK_THROWS_AS(check_alpha(1.0), DomainError);
    CHECK_THROWS_AS(xr_limits(s, beta_bar(s), 1.5), DomainError);
}

TEST_CASE("beta limits") {
    // With no data the marginal is flat, so the limits sit symmetrically.
    const auto empty = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    auto l = beta_limits(empty, 0.2);
    CHECK(l.lcl + l.ucl == doctest::Approx(2.0 * 4.8).epsilon(1e-10));
    CHECK(l.lcl == doctest::Approx(2.4 + 0.1 * 4.8).epsilon(1e-10));

    const auto s = fixtures::carbon_state(10);
    const BetaPosterior post(s);
    for (double alpha : {0.0027, 0.5}) {
        l = beta_limits(s, alpha);
        auto mass = [&](double lo, double hi) {
            return oracle::simpson([&](double b) { return post.density(b); }, lo, hi, 100000);
        };
        CHECK(std::abs(mass(s.prior().beta1, l.lcl) - alpha / 2) < 1e-8);
        CHECK(std::abs(mass(s.prior().beta1, l.ucl) - (1 - alpha / 2)) < 1e-8);
    }
    l = beta_limits(s, 0.0027);
    CHECK(l.cl == doctest::Approx(post.mean()).epsilon(1e-14));
    for (double b : s.beta_hat_history()) CHECK(l.contains(b));
}

TEST_CASE("limits narrow over the carbon-fibre training sequence") {
    auto s = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    std::vector<double> width;
    for (std::size_t i = 0; i < 10; ++i) {
        s = absorb_sample(s, carbon_fibre_samples()[i]);
        width.push_back(xr_limits(s, beta_bar(s), 0.0027).width());
    }
    for (std::size_t k = 0; k + 5 < width.size(); ++k) CHECK(width[k] >= width[k + 5]);
}
