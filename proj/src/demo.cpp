#include "wbchart/demo.hpp"

#include "wbchart/rng.hpp"

namespace wbchart {

const std::vector<Sample>& carbon_fibre_samples() {
    static const std::vector<Sample> data = {
        {3.70, 2.74, 2.73, 2.50, 3.60}, {3.11, 3.27, 2.87, 1.47, 3.11}, {4.42, 2.41, 3.19, 3.22, 1.69},
        {3.28, 3.09, 1.87, 3.15, 4.90}, {3.75, 2.43, 2.95, 2.97, 3.39}, {2.96, 2.53, 2.67, 2.93, 3.22},
        {3.39, 2.81, 4.20, 3.33, 2.55}, {3.31, 3.31, 2.85, 2.56, 3.56}, {3.15, 2.35, 2.55, 2.59, 2.38},
        {2.81, 2.77, 2.17, 2.83, 1.92}, {1.41, 3.68, 2.97, 1.36, 0.98}, {2.76, 4.91, 3.68, 1.84, 1.59},
        {3.19, 1.57, 0.81, 5.56, 1.73}, {1.59, 2.00, 1.22, 1.12, 1.71}, {2.17, 1.17, 5.08, 2.48, 1.18},
        {3.51, 2.17, 1.69, 1.25, 4.38}, {1.84, 0.39, 3.68, 2.48, 0.85}, {1.61, 2.79, 4.70, 2.03, 1.80},
        {1.57, 1.08, 2.03, 1.61, 2.12}, {1.89, 2.88, 2.82, 2.05, 3.65},
    };
    return data;
}

ChartConfig carbon_fibre_config() {
    ChartConfig c;
    c.reliability = 0.99;
    c.alpha = 0.0027;
    c.subgroup_size = 5;
    c.phase1_samples = 10;
    c.prior_beta1 = 2.4;
    c.prior_beta2 = 7.2;
    c.prior_x_bar = 1.22;
    c.enable_beta_chart = true;
    return c;
}

namespace {

ControlChart monitor_shifted(ControlChart chart) {
    const auto& data = carbon_fibre_samples();
    for (std::size_t i = 10; i < data.size(); ++i) chart.monitor(data[i]);
    return chart;
}

}  // namespace

ControlChart run_carbon_fibre_chart() {
    const auto& data = carbon_fibre_samples();
    return monitor_shifted(
        ControlChart::run_phase1(carbon_fibre_config(), std::span<const Sample>(data.data(), 10)));
}

std::vector<Sample> resampled_training(std::uint64_t seed) {
    const auto& data = carbon_fibre_samples();
    std::vector<double> pool;
    for (std::size_t i = 0; i < 10; ++i) pool.insert(pool.end(), data[i].begin(), data[i].end());

    std::vector<Sample> training(data.begin(), data.begin() + 10);
    RngStream rng(seed);
    for (std::size_t i = 0; i < 30; ++i) {
        Sample s(5);
        for (double& x : s) x = pool[rng.uniform_index(pool.size())];
        training.push_back(std::move(s));
    }
    return training;
}

ControlChart run_windowed_carbon_fibre_chart(std::uint64_t seed) {
    ChartConfig c = carbon_fibre_config();
    c.phase1_samples = 40;
    c.handoff_window = 10;
    return monitor_shifted(ControlChart::run_phase1(c, resampled_training(seed)));
}

DemoReports demo_padgett(const std::filesystem::path& output_dir, std::uint64_t seed) {
    DemoReports out;
    out.baseline = emit_report(run_carbon_fibre_chart(), output_dir / "baseline", "Carbon fibre, x_0.99");
    out.windowed = emit_report(run_windowed_carbon_fibre_chart(seed), output_dir / "windowed",
                               "Carbon fibre, resampled Phase I, window 10");
    return out;
}

}  // namespace wbchart
