#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "wbchart/distributions.hpp"
#include "wbchart/error.hpp"
#include "wbchart/prior.hpp"

using namespace wbchart;

TEST_CASE("elicit_b_bar") {
    CHECK(elicit_b_bar(2.4, 7.2) == doctest::Approx(4.8).epsilon(1e-15));
    CHECK(elicit_b_bar(1.0, 3.0) == 2.0);
    CHECK_THROWS_AS(elicit_b_bar(0.1, 1.9), RestrictionError);
    CHECK_THROWS_AS(elicit_b_bar(0.5, 1.5), RestrictionError);
    CHECK_THROWS_AS(elicit_b_bar(3.0, 2.0), DomainError);
    CHECK_THROWS_AS(elicit_b_bar(0.0, 3.0), DomainError);
}

TEST_CASE("elicit_a") {
    const double expected = std::exp(std::lgamma(1.0 - 1.0 / 4.8)) / 1.22;
    CHECK(elicit_a(1.22, 4.8) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(elicit_a(1.22, 4.8) == doctest::Approx(0.963).epsilon(0.002));
    CHECK(elicit_a(1.0, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(std::abs(inv_weibull_mean(elicit_a(0.47, 3.0), 3.0) - 0.47) / 0.47 < 1e-12);
    CHECK_THROWS_AS(elicit_a(1.0, 1.0), RestrictionError);
    for (double x = 0.1; x < 5.0; x += 0.1) CHECK(elicit_a(x + 0.1, 3.0) < elicit_a(x, 3.0));
}

TEST_CASE("PriorSpec::elicit holds a = Gamma(1 - 1/b_bar) / x_bar") {
    const PriorSpec p = PriorSpec::elicit(2.4, 7.2, 1.22);
    CHECK(p.b_bar == doctest::Approx(4.8));
    CHECK(std::abs(p.a * p.x_bar / std::tgamma(1.0 - 1.0 / p.b_bar) - 1.0) < 1e-12);
    CHECK(p.contains(4.0));
    CHECK_FALSE(p.contains(2.4));
    CHECK_THROWS_AS(PriorSpec::elicit(2.4, 7.2, 0.0), DomainError);
}

TEST_CASE("joint_prior_log_pdf") {
    const PriorSpec unit{0.5, 1.5, 1.0, 1.0, 1.0};
    CHECK(joint_prior_log_pdf(1.0, 1.0, unit) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(joint_prior_log_pdf(1.0, 0.4, unit) == -std::numeric_limits<double>::infinity());
    CHECK(joint_prior_log_pdf(1.0, 1.6, unit) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("joint prior has unit mass") {
    const PriorSpec p = PriorSpec::elicit(2.4, 7.2, 1.22);
    // Inner integral in u = ln x_R.
    auto inner = [&](double beta) {
        return oracle::simpson([&](double u) { return std::exp(joint_prior_log_pdf(std::exp(u), beta, p) + u); },
                               -8.0, 12.0, 6000);
    };
    const double mass = oracle::simpson(inner, p.beta1 + 1e-12, p.beta2 - 1e-12, 400);
    CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("next_prior") {
    const PriorSpec start = PriorSpec::elicit(2.4, 7.2, 1.22);
    PriorSpec p = next_prior(4.8, 1.22, start);
    CHECK(p.beta1 == doctest::Approx(2.4));
    CHECK(p.beta2 == doctest::Approx(7.2));
    CHECK(p.a == doctest::Approx(0.963).epsilon(0.002));

    p = next_prior(2.0, 0.26, start);
    CHECK(p.beta1 == doctest::Approx(1.0));
    CHECK(p.beta2 == doctest::Approx(3.0));
    CHECK(p.a == doctest::Approx(std::sqrt(std::numbers::pi) / 0.26).epsilon(1e-13));
    CHECK(p.a == doctest::Approx(6.817).epsilon(1e-3));

    p = next_prior(0.9, 0.5, start);
    CHECK(p.beta1 == start.beta1);
    CHECK(p.beta2 == start.beta2);
    CHECK(p.b_bar == start.b_bar);
    CHECK(p.a == doctest::Approx(elicit_a(0.5, start.b_bar)));
}

TEST_CASE("next_prior keeps the restriction whenever beta_hat > 1") {
    const PriorSpec start = PriorSpec::elicit(2.4, 7.2, 1.22);
    for (double b = 1.0001; b < 40.0; b *= 1.07) {
        const PriorSpec p = next_prior(b, 1.0, start);
        CHECK(p.beta1 + p.beta2 > 2.0);
        CHECK(p.beta1 < p.beta2);
    }
}
