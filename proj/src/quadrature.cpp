#include "wbchart/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "wbchart/error.hpp"

namespace wbchart {

namespace {

using Nodes = std::array<double, QuadraturePanel::kNodes>;

// Lagrange basis on u = 0..4 as coefficients c[j][d] of u^d.
struct QuarticBasis {
    std::array<std::array<double, 5>, 5> c{};

    QuarticBasis() {
        for (int j = 0; j < 5; ++j) {
            std::array<double, 5> poly{1.0, 0.0, 0.0, 0.0, 0.0};
            double denom = 1.0;
            int degree = 0;
            for (int m = 0; m < 5; ++m) {
                if (m == j) continue;
                for (int d = degree + 1; d >= 1; --d) poly[d] = poly[d - 1] - m * poly[d];
                poly[0] = -m * poly[0];
                ++degree;
                denom *= static_cast<double>(j - m);
            }
            for (int d = 0; d < 5; ++d) c[j][d] = poly[d] / denom;
        }
    }
};

const QuarticBasis& basis() {
    static const QuarticBasis b;
    return b;
}

// Boole's rule = Simpson(h) + (Simpson(h) - Simpson(2h)) / 15.
double boole(double f0, double f1, double f2, double f3, double f4, double width) {
    return width / 90.0 * (7.0 * (f0 + f4) + 32.0 * (f1 + f3) + 12.0 * f2);
}

struct PanelRule {
    double value;
    double error;
};

PanelRule apply_rule(const Nodes& f, double width) {
    const double coarse = boole(f[0], f[2], f[4], f[6], f[8], width);
    const double fine = boole(f[0], f[1], f[2], f[3], f[4], 0.5 * width) +
                        boole(f[4], f[5], f[6], f[7], f[8], 0.5 * width);
    return {fine + (fine - coarse) / 63.0, std::abs(fine - coarse) / 63.0};
}

QuadraturePanel make_panel(double lo, double hi, const Nodes& f) {
    QuadraturePanel p;
    p.lo = lo;
    p.hi = hi;
    p.f = f;
    const PanelRule r = apply_rule(f, hi - lo);
    p.value = r.value;
    p.error = r.error;
    return p;
}

// Integral of the quartic through f[0..4] (unit spacing in u) from 0 to u.
double quartic_partial(const double* f, double u) {
    const auto& c = basis().c;
    double s = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        double integral = 0.0;
        double upow = u;
        for (std::size_t d = 0; d < 5; ++d) {
            integral += c[j][d] * upow / static_cast<double>(d + 1);
            upow *= u;
        }
        s += f[j] * integral;
    }
    return s;
}

struct ByError {
    const std::vector<QuadraturePanel>* panels;
    bool operator()(std::size_t a, std::size_t b) const { return (*panels)[a].error < (*panels)[b].error; }
};

}  // namespace

double QuadraturePanel::partial(double t) const {
    if (t <= lo) return 0.0;
    if (t >= hi) return value;
    const double width = hi - lo;
    const double h = width / 8.0;
    const double mid = lo + 0.5 * width;
    if (t <= mid) return quartic_partial(&f[0], (t - lo) / h) * h;
    return boole(f[0], f[1], f[2], f[3], f[4], 0.5 * width) + quartic_partial(&f[4], (t - mid) / h) * h;
}

double QuadraturePanel::weighted(const std::array<double, kNodes>& g) const {
    Nodes gf{};
    for (std::size_t j = 0; j < kNodes; ++j) gf[j] = g[j] * f[j];
    return apply_rule(gf, hi - lo).value;
}

double QuadratureResult::cumulative(double t) const {
    double s = 0.0;
    for (const auto& p : panels) {
        if (t >= p.hi) {
            s += p.value;
        } else {
            s += p.partial(t);
            break;
        }
    }
    return s;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    const QuadratureOptions& options) {
    if (!(hi > lo)) throw DomainError("integrate_adaptive: empty interval");
    const std::size_t initial = std::max<std::size_t>(1, options.initial_panels);

    QuadratureResult result;
    std::vector<QuadraturePanel> panels;
    panels.reserve(initial * 4);

    // Initial uniform panels share their end nodes.
    const double width = (hi - lo) / static_cast<double>(initial);
    double f_left = f(lo);
    result.evaluations = 1;
    for (std::size_t i = 0; i < initial; ++i) {
        const double a = lo + width * static_cast<double>(i);
        const double b = (i + 1 == initial) ? hi : lo + width * static_cast<double>(i + 1);
        Nodes v{};
        v[0] = f_left;
        for (std::size_t j = 1; j < QuadraturePanel::kNodes; ++j) v[j] = f(a + static_cast<double>(j) * (b - a) / 8.0);
        result.evaluations += QuadraturePanel::kNodes - 1;
        f_left = v[8];
        panels.push_back(make_panel(a, b, v));
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> queue(ByError{&panels});
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        queue.push(i);
        total += panels[i].value;
        total_error += panels[i].error;
    }

    auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (total_error > target() && panels.size() < options.max_panels) {
        const std::size_t idx = queue.top();
        queue.pop();
        const QuadraturePanel parent = panels[idx];
        const double mid = 0.5 * (parent.lo + parent.hi);
        const double step = (parent.hi - parent.lo) / 16.0;
        Nodes left{};
        Nodes right{};
        for (std::size_t j = 0; j < 5; ++j) {
            left[2 * j] = parent.f[j];
            right[2 * j] = parent.f[4 + j];
        }
        for (std::size_t j = 0; j < 4; ++j) {
            left[2 * j + 1] = f(parent.lo + static_cast<double>(2 * j + 1) * step);
            right[2 * j + 1] = f(mid + static_cast<double>(2 * j + 1) * step);
        }
        result.evaluations += 8;
        total -= parent.value;
        total_error -= parent.error;
        panels[idx] = make_panel(parent.lo, mid, left);
        panels.push_back(make_panel(mid, parent.hi, right));
        total += panels[idx].value + panels.back().value;
        total_error += panels[idx].error + panels.back().error;
        queue.push(idx);
        queue.push(panels.size() - 1);
    }

    std::sort(panels.begin(), panels.end(),
              [](const QuadraturePanel& a, const QuadraturePanel& b) { return a.lo < b.lo; });
    // Resum in order so the result does not depend on refinement history.
    total = 0.0;
    total_error = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        total_error += p.error;
    }
    result.value = total;
    result.error = total_error;
    result.converged = total_error <= target();
    result.panels = std::move(panels);
    return result;
}

}  // namespace wbchart
