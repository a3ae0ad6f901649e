#pragma once

#include <vector>

#include "wbchart/demo.hpp"
#include "wbchart/distributions.hpp"
#include "wbchart/posterior.hpp"
#include "wbchart/prior.hpp"
#include "wbchart/rng.hpp"

namespace fixtures {

inline wbchart::PriorSpec carbon_prior() { return wbchart::PriorSpec::elicit(2.4, 7.2, 1.22); }

// State after absorbing the first `rows` carbon-fibre subgroups.
inline wbchart::PosteriorState carbon_state(std::size_t rows) {
    auto s = wbchart::PosteriorState::initial(carbon_prior(), 5, 0.99);
    for (std::size_t i = 0; i < rows; ++i) s = wbchart::absorb_sample(s, wbchart::carbon_fibre_samples()[i]);
    return s;
}

inline std::vector<double> draw(const wbchart::WeibullModel& m, std::size_t count, std::uint64_t seed) {
    wbchart::RngStream rng(seed);
    std::vector<double> xs(count);
    for (double& x : xs) x = wbchart::weibull_sample(m, rng);
    return xs;
}

// A state holding `xs` as one subgroup, without running the estimators.
inline wbchart::PosteriorState raw_state(const wbchart::PriorSpec& prior, std::vector<double> xs, double reliability) {
    const std::size_t n = xs.size();
    return wbchart::PosteriorState::restore(prior, n, reliability, std::move(xs), {prior.b_bar}, {prior.x_bar});
}

}  // namespace fixtures
