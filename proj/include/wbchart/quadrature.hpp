#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace wbchart {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t initial_panels = 8;
    std::size_t max_panels = std::size_t{1} << 14;
};

// One accepted panel of the adaptive rule. The integrand is sampled at nine
// equally spaced nodes. Simpson's rule on spacings H/2, H/4 and H/8 is
// combined by two Richardson steps; the last step's correction is the error
// estimate.
struct QuadraturePanel {
    static constexpr std::size_t kNodes = 9;

    double lo = 0.0;
    double hi = 0.0;
    std::array<double, kNodes> f{};
    double value = 0.0;
    double error = 0.0;

    double node(std::size_t j) const { return lo + static_cast<double>(j) * (hi - lo) / 8.0; }

    // Integral from lo to t, lo <= t <= hi: the completed half by Boole's
    // rule, the partial half by integrating the quartic through its nodes.
    double partial(double t) const;

    // The panel rule applied to g(x) * f(x), with g sampled at the nodes.
    double weighted(const std::array<double, kNodes>& g) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
    std::vector<QuadraturePanel> panels;  // sorted by lo, contiguous

    // Integral from the lower bound up to t using the stored panels.
    double cumulative(double t) const;
};

// Globally adaptive composite Simpson with Richardson stopping: the panel with
// the largest error estimate is bisected until the summed estimate falls below
// max(abs_tol, rel_tol * |value|) or max_panels is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    const QuadratureOptions& options = {});

}  // namespace wbchart
