#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace wbchart {

// Incremental representation of S(beta) = sum_i exp(beta l_i) over a growing
// set of log-observations l_i.
//
// Observations are grouped in bins of width 1/16 in log space. Within a bin
// centred at c, exp(beta l) = exp(beta c) * exp(beta u) with |u| <= 1/32, and
// the second factor is expanded as a Taylor series whose coefficients
// sum_i u_i^j / j! are accumulated once per observation. For beta <= 64 the
// truncated terms are below 1e-16 relative, so an evaluation costs one
// exponential per occupied bin instead of one per observation. Bins are
// combined by log-sum-exp.
class LogPowerSums {
public:
    static constexpr std::size_t kOrder = 25;   // Taylor terms per bin
    static constexpr double kBinsPerUnit = 16.0;
    static constexpr double kMaxBeta = 64.0;

    struct Value {
        double log_sum = 0.0;  // ln sum exp(beta l_i)
        double mean = 0.0;     // sum l_i w_i / sum w_i, w_i = exp(beta l_i)
        double second = 0.0;   // sum l_i^2 w_i / sum w_i
    };

    void add(double log_x);
    void add(std::span<const double> log_xs) {
        for (double l : log_xs) add(l);
    }

    bool empty() const { return bins_.empty(); }
    std::size_t bin_count() const { return bins_.size(); }

    // Valid for 0 < beta <= kMaxBeta and a non-empty set.
    Value evaluate(double beta, bool with_derivatives) const;

    friend bool operator==(const LogPowerSums&, const LogPowerSums&) = default;

private:
    struct Bin {
        long index = 0;
        double centre = 0.0;
        // coeff[j] = sum_i u_i^j / j!, j = 0 .. kOrder + 1
        std::array<double, kOrder + 2> coeff{};
        friend bool operator==(const Bin&, const Bin&) = default;
    };
    std::vector<Bin> bins_;  // sorted by index
};

}  // namespace wbchart
