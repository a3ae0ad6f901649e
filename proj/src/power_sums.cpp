#include "wbchart/power_sums.hpp"

#include <algorithm>
#include <cmath>

namespace wbchart {

void LogPowerSums::add(double log_x) {
    const long index = static_cast<long>(std::floor(log_x * kBinsPerUnit));
    auto it = std::lower_bound(bins_.begin(), bins_.end(), index,
                               [](const Bin& b, long i) { return b.index < i; });
    if (it == bins_.end() || it->index != index) {
        Bin bin;
        bin.index = index;
        bin.centre = (static_cast<double>(index) + 0.5) / kBinsPerUnit;
        it = bins_.insert(it, bin);
    }
    const double u = log_x - it->centre;
    double term = 1.0;
    for (std::size_t j = 0; j < it->coeff.size(); ++j) {
        it->coeff[j] += term;
        term *= u / static_cast<double>(j + 1);
    }
}

LogPowerSums::Value LogPowerSums::evaluate(double beta, bool with_derivatives) const {
    // Series in beta for sum u^m e^{beta u}, m = 0, 1, 2:
    //   sum_j beta^j / j! * sum u^{j+m} = sum_j beta^j * (j+m)!/j! * coeff[j+m]
    const double top = bins_.back().centre;
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (const Bin& bin : bins_) {
        const auto& c = bin.coeff;
        double e = 0.0;
        double f = 0.0;
        double g = 0.0;
        for (std::size_t j = kOrder; j-- > 0;) {
            e = e * beta + c[j];
            if (with_derivatives) {
                const double jj = static_cast<double>(j);
                f = f * beta + (jj + 1.0) * c[j + 1];
                g = g * beta + (jj + 1.0) * (jj + 2.0) * c[j + 2];
            }
        }
        const double w = std::exp(beta * (bin.centre - top));
        s0 += w * e;
        if (with_derivatives) {
            // l = centre + u
            s1 += w * (bin.centre * e + f);
            s2 += w * (bin.centre * bin.centre * e + 2.0 * bin.centre * f + g);
        }
    }
    Value v;
    v.log_sum = beta * top + std::log(s0);
    if (with_derivatives) {
        v.mean = s1 / s0;
        v.second = s2 / s0;
    }
    return v;
}

}  // namespace wbchart
