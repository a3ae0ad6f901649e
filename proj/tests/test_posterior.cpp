#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "wbchart/demo.hpp"
#include "wbchart/error.hpp"
#include "wbchart/posterior.hpp"

using namespace wbchart;

namespace {

std::vector<double> stacked(std::size_t rows) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < rows; ++i)
        xs.insert(xs.end(), carbon_fibre_samples()[i].begin(), carbon_fibre_samples()[i].end());
    return xs;
}

double oracle_beta_mean(const PriorSpec& p, double reliability, const std::vector<double>& xs) {
    double peak = -1e300;
    for (double b = p.beta1; b <= p.beta2; b += (p.beta2 - p.beta1) / 1000)
        peak = std::max(peak, oracle::beta_log_marginal(p.a, reliability, xs, b));
    auto w = [&](double b) { return std::exp(oracle::beta_log_marginal(p.a, reliability, xs, b) - peak); };
    const double z = oracle::simpson(w, p.beta1, p.beta2, 40000);
    return oracle::simpson([&](double b) { return b * w(b); }, p.beta1, p.beta2, 40000) / z;
}

}  // namespace

TEST_CASE("log_likelihood unit case and factorization") {
    const double one[] = {1.0};
    CHECK(log_likelihood(one, 1.0, 1.0, std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-15));
    const auto& d = carbon_fibre_samples();
    std::vector<double> both(d[0].begin(), d[0].end());
    both.insert(both.end(), d[1].begin(), d[1].end());
    const double joint = log_likelihood(both, 1.2, 4.5, 0.99);
    CHECK(joint == doctest::Approx(log_likelihood(d[0], 1.2, 4.5, 0.99) + log_likelihood(d[1], 1.2, 4.5, 0.99))
                       .epsilon(1e-13));
}

TEST_CASE("likelihood maximum for the in-control subgroups lies inside the prior interval") {
    const auto xs = stacked(10);
    double best = -1e300, best_beta = 0.0;
    for (double beta = 0.5; beta <= 15.0; beta += 0.01) {
        for (double xr = 0.3; xr <= 2.5; xr += 0.005) {
            const double ll = log_likelihood(xs, xr, beta, 0.99);
            if (ll > best) best = ll, best_beta = beta;
        }
    }
    CHECK(best_beta > 2.4);
    CHECK(best_beta < 7.2);
}

TEST_CASE("t_of_beta") {
    const PriorSpec p = fixtures::carbon_prior();
    const auto empty = PosteriorState::initial(p, 5, 0.99);
    CHECK(t_of_beta(empty, 4.8) == doctest::Approx(std::pow(p.a, -4.8)).epsilon(1e-14));

    const PriorSpec unit{0.5, 1.5, 1.0, 1.0, 1.0};
    const auto ones = fixtures::raw_state(unit, {1.0, 1.0}, std::exp(-1.0));
    for (double b : {0.3, 1.0, 7.0}) CHECK(t_of_beta(ones, b) == doctest::Approx(3.0).epsilon(1e-14));

    const auto first = fixtures::raw_state(p, carbon_fibre_samples()[0], 0.99);
    const double naive = oracle::t_of_beta(p.a, 0.99, carbon_fibre_samples()[0], 4.8);
    CHECK(std::abs(t_of_beta(first, 4.8) - naive) / naive < 1e-12);
}

TEST_CASE("cached and direct ln T agree, derivatives match finite differences") {
    const auto s = fixtures::carbon_state(10);
    for (double b : {0.5, 2.4, 4.8, 7.2, 19.0}) {
        CAPTURE(b);
        CHECK(std::abs(log_t_of_beta(s, b) - log_t_of_beta_direct(s, b)) < 1e-13 * std::abs(log_t_of_beta(s, b)) + 1e-14);
        const auto d = log_t_of_beta_derivatives(s, b);
        const double h = 1e-5;
        CHECK(d.d1 == doctest::Approx((log_t_of_beta(s, b + h) - log_t_of_beta(s, b - h)) / (2 * h)).epsilon(1e-7));
        CHECK(d.d2 == doctest::Approx((d.d1 - log_t_of_beta_derivatives(s, b - h).d1) / h).epsilon(1e-4));
    }
}

TEST_CASE("beta marginal: support, empty-data shape and normalization") {
    const auto empty = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    CHECK(beta_marginal_log_density(empty, 2.0) == -std::numeric_limits<double>::infinity());
    const double c = beta_marginal_log_density(empty, 3.0);
    for (double b : {2.5, 4.0, 7.1}) CHECK(beta_marginal_log_density(empty, b) == doctest::Approx(c).epsilon(1e-12));

    const auto s = fixtures::carbon_state(10);
    const BetaPosterior post(s);
    const double mass = oracle::simpson([&](double b) { return post.density(b); }, s.prior().beta1,
                                        s.prior().beta2, 200000);
    CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("beta marginal concentrates with 250 observations") {
    // Large-sample sd of the shape is beta sqrt(6) / (pi sqrt(N)).
    const double sd = 4.8 * std::sqrt(6.0) / (std::numbers::pi * std::sqrt(250.0));
    const double asymptotic = 2.0 * 2.5758 * sd;
    const auto xs = fixtures::draw(WeibullModel(3.2, 4.8), 250, 11);
    const auto s = fixtures::raw_state(fixtures::carbon_prior(), xs, 0.99);
    const BetaPosterior post(s);
    const double width = post.quantile(0.995) - post.quantile(0.005);
    CHECK(width < 1.25 * asymptotic);
    CHECK(width > 0.75 * asymptotic);
    CHECK(width < 0.3 * (7.2 - 2.4));
}

TEST_CASE("estimate_beta") {
    const PriorSpec p = fixtures::carbon_prior();
    CHECK(estimate_beta(PosteriorState::initial(p, 5, 0.99)) == doctest::Approx(4.8).epsilon(1e-10));

    const auto s = fixtures::carbon_state(10);
    for (double b : s.beta_hat_history()) {
        CHECK(b > 2.4);
        CHECK(b < 7.2);
    }

    const WeibullModel truth(1.0, 3.0);
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto big = fixtures::raw_state(PriorSpec::elicit(1.5, 4.5, percentile_of(truth, 0.9)),
                                             fixtures::draw(truth, 10000, seed), 0.9);
        const double b = estimate_beta(big);
        CHECK(std::abs(b - 3.0) < 0.1);
        total += b;
    }
    CHECK(std::abs(total / 8.0 - 3.0) < 0.05);
}

TEST_CASE("estimate_beta matches an independent quadrature") {
    const PriorSpec p = fixtures::carbon_prior();
    const auto xs = stacked(3);
    const auto s = PosteriorState::restore(p, 15, 0.99, xs, {4.8}, {1.22});
    CHECK(estimate_beta(s) == doctest::Approx(oracle_beta_mean(p, 0.99, xs)).epsilon(1e-9));
}

TEST_CASE("beta_bar") {
    const PriorSpec p = fixtures::carbon_prior();
    const auto one = PosteriorState::restore(p, 1, 0.99, {1.0}, {4.8}, {1.2});
    CHECK(beta_bar(one) == 4.8);
    const auto two = PosteriorState::restore(p, 1, 0.99, {1.0, 2.0}, {4.0, 5.0}, {1.2, 1.1});
    CHECK(beta_bar(two) == 4.5);
    CHECK_THROWS_AS(beta_bar(PosteriorState::initial(p, 1, 0.99)), StateError);
    const double bb = beta_bar(fixtures::carbon_state(10));
    CHECK(bb > 2.4);
    CHECK(bb < 7.2);
}

TEST_CASE("x_R conditional density") {
    const auto s = fixtures::carbon_state(10);
    const double bb = beta_bar(s);
    const double mass = oracle::simpson(
        [&](double u) { return std::exp(xr_conditional_log_pdf(std::exp(u), s, bb) + u); }, -3.0, 3.0, 100000);
    CHECK(std::abs(mass - 1.0) < 1e-8);

    // No data, beta_bar = 1, T = 1: x^{-2} e^{-1/x}, maximal at 1/2.
    const PriorSpec unit{0.5, 1.5, 1.0, 1.0, 1.0};
    const auto empty = PosteriorState::initial(unit, 1, 0.99);
    for (double x : {0.2, 0.5, 3.0})
        CHECK(std::exp(xr_conditional_log_pdf(x, empty, 1.0)) ==
              doctest::Approx(std::exp(-1.0 / x) / (x * x)).epsilon(1e-13));
    const double mode = oracle::bisect(
        [&](double x) { return xr_conditional_log_pdf(x + 1e-7, empty, 1.0) - xr_conditional_log_pdf(x - 1e-7, empty, 1.0); },
        0.1, 2.0, 1e-12);
    CHECK(mode == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("Gamma transform reproduces the Gamma density with Jacobian") {
    const auto s = fixtures::carbon_state(10);
    const double bb = beta_bar(s);
    const double t = t_of_beta(s, bb);
    const GammaShape g(static_cast<double>(s.count()) + 1.0);
    for (double x = 0.9; x < 1.5; x += 0.006) {
        const double z = std::pow(x, -bb) * t;
        const double jac = bb * z / x;
        const double lhs = std::exp(xr_conditional_log_pdf(x, s, bb));
        CHECK(std::abs(lhs - gamma_pdf(z, g) * jac) < 1e-10);
    }
}

TEST_CASE("estimate_xr") {
    const PriorSpec unit{0.5, 1.5, 1.0, 1.0, 1.0};
    const auto one = fixtures::raw_state(unit, {2.0}, std::exp(-1.0));
    CHECK(estimate_xr(one, 1.0) == doctest::Approx(3.0).epsilon(1e-14));

    const auto s = fixtures::carbon_state(10);
    const double bb = beta_bar(s);
    const double xhat = estimate_xr(s, bb);
    CHECK(xhat > 1.08);
    CHECK(xhat < 1.30);
    const double mean = oracle::simpson(
        [&](double u) { return std::exp(xr_conditional_log_pdf(std::exp(u), s, bb) + 2.0 * u); }, -3.0, 3.0, 100000);
    CHECK(std::abs(xhat - mean) / mean < 1e-6);
    CHECK_THROWS_AS(estimate_xr(PosteriorState::initial(unit, 1, 0.99), 1.0), DivergentMeanError);
}

TEST_CASE("absorb_sample follows the step recursion") {
    const PriorSpec p0 = fixtures::carbon_prior();
    const auto& d = carbon_fibre_samples();
    const auto s1 = absorb_sample(PosteriorState::initial(p0, 5, 0.99), d[0]);
    const auto s2 = absorb_sample(s1, d[1]);
    REQUIRE(s2.k() == 2);

    // Step 1 uses the engineer's prior, step 2 the prior re-elicited from step 1.
    const double b1 = oracle_beta_mean(p0, 0.99, std::vector<double>(d[0].begin(), d[0].end()));
    CHECK(s1.beta_hat_history()[0] == doctest::Approx(b1).epsilon(1e-9));
    const PriorSpec p1 = next_prior(s1.beta_hat_history()[0], s1.xr_hat_history()[0], p0);
    CHECK(s2.prior() == p1);
    const auto xs = stacked(2);
    const double b2 = oracle_beta_mean(p1, 0.99, xs);
    CHECK(s2.beta_hat_history()[1] == doctest::Approx(b2).epsilon(1e-9));

    const double bb = 0.5 * (s2.beta_hat_history()[0] + s2.beta_hat_history()[1]);
    const double t = oracle::t_of_beta(p1.a, 0.99, xs, bb);
    const double x2 = std::exp(std::lgamma(11.0 - 1.0 / bb) - std::lgamma(11.0)) * std::pow(t, 1.0 / bb);
    CHECK(s2.xr_hat_history()[1] == doctest::Approx(x2).epsilon(1e-12));
}

TEST_CASE("absorb_sample bookkeeping") {
    auto s = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    const std::vector<double> same(5, 2.5);
    s = absorb_sample(s, same);
    CHECK(s.count() == 5);
    CHECK(s.sum_log_x() == doctest::Approx(5.0 * std::log(2.5)).epsilon(1e-15));

    const auto ten = fixtures::carbon_state(10);
    CHECK(ten.k() == 10);
    CHECK(ten.observations().size() == 50);
    CHECK(ten.beta_hat_history().size() == 10);
    double sl = 0.0;
    for (double x : ten.observations()) sl += std::log(x);
    CHECK(std::abs(ten.sum_log_x() - sl) < 1e-12 * std::abs(sl));

    CHECK_THROWS_AS(absorb_sample(s, std::vector<double>{1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(absorb_sample(s, std::vector<double>{1.0, 2.0, 0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(absorb_sample(s, std::vector<double>{1.0, 2.0, -3.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("absorb_sample without re-elicitation keeps the prior") {
    auto s = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    AbsorbOptions keep;
    keep.reelicit = false;
    for (int i = 0; i < 4; ++i) s = absorb_sample(s, carbon_fibre_samples()[i], keep);
    CHECK(s.prior() == fixtures::carbon_prior());
}

TEST_CASE("rebuild_windowed") {
    const auto s = fixtures::carbon_state(10);
    const auto same = rebuild_windowed(s, 10);
    CHECK(std::equal(same.observations().begin(), same.observations().end(), s.observations().begin()));
    CHECK(same.prior() == next_prior(beta_bar(s), s.xr_hat_history().back(), s.prior()));

    auto long_state = PosteriorState::initial(fixtures::carbon_prior(), 5, 0.99);
    for (const auto& row : resampled_training(3)) long_state = absorb_sample(long_state, row);
    const auto w = rebuild_windowed(long_state, 10);
    CHECK(w.observations().size() == 50);
    CHECK(w.k() == 10);
    CHECK_THROWS_AS(rebuild_windowed(s, 0), RangeError);
    CHECK_THROWS_AS(rebuild_windowed(s, 11), RangeError);
}

TEST_CASE("restore validates layout and reproduces the state") {
    const auto s = fixtures::carbon_state(4);
    const auto r = PosteriorState::restore(s.prior(), 5, 0.99, {s.observations().begin(), s.observations().end()},
                                           {s.beta_hat_history().begin(), s.beta_hat_history().end()},
                                           {s.xr_hat_history().begin(), s.xr_hat_history().end()});
    CHECK(r == s);
    CHECK_THROWS_AS(PosteriorState::restore(s.prior(), 5, 0.99, {1.0, 2.0}, {4.0}, {1.0}), ShapeError);
}
