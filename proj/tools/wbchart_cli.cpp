// wbchart: train, monitor and benchmark Bayesian Weibull percentile charts.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wbchart/demo.hpp"
#include "wbchart/error.hpp"
#include "wbchart/io.hpp"
#include "wbchart/report.hpp"
#include "wbchart/scenarios.hpp"
#include "wbchart/simulation.hpp"

namespace fs = std::filesystem;
using namespace wbchart;

namespace {

void print_files(const ReportFiles& f) {
    std::printf("  %s\n  %s\n", f.records.string().c_str(), f.xr_chart.string().c_str());
    if (f.beta_chart) std::printf("  %s\n", f.beta_chart->string().c_str());
    std::printf("  %s\n", f.summary.string().c_str());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

int cmd_phase1(const fs::path& config_path, const fs::path& data_path, const fs::path& out) {
    const RunSettings settings = load_config(config_path);
    const ChartConfig& config = settings.chart;
    const auto samples = ingest_samples(data_path, config.subgroup_size);
    if (samples.size() != config.phase1_samples) {
        throw ShapeError(data_path.string() + ": expected " + std::to_string(config.phase1_samples) +
                         " training subgroups (phase1_samples), found " + std::to_string(samples.size()));
    }
    const ControlChart chart = ControlChart::run_phase1(config, samples);
    ensure_dir(out);
    save_chart_state(chart, out / "chart.state");
    const ReportFiles files = emit_report(chart, out, "Phase I");
    const ControlLimits& l = chart.frozen_xr_limits();
    std::printf("frozen x_R limits: [%.6g, %.6g]\n", l.lcl, l.ucl);
    if (const auto& b = chart.frozen_beta_limits()) std::printf("frozen beta limits: [%.6g, %.6g]\n", b->lcl, b->ucl);
    std::printf("wrote\n  %s\n", (out / "chart.state").string().c_str());
    print_files(files);
    return 0;
}

int cmd_monitor(const fs::path& state_path, const fs::path& data_path, const fs::path& out, bool restart) {
    ControlChart chart = load_chart_state(state_path);
    const auto samples = ingest_samples(data_path, chart.config().subgroup_size);
    std::size_t signals = 0;
    for (const auto& s : samples) {
        const ChartRecord r = chart.monitor(s);
        if (r.signal != Signal::None) {
            ++signals;
            std::printf("signal (%s) at history position %zu\n", to_string(r.signal), r.sample_index);
            if (restart) chart.restart_after_signal();
        }
    }
    ensure_dir(out);
    save_chart_state(chart, out / "chart.state");
    const ReportFiles files = emit_report(chart, out, "Phase II");
    std::printf("monitored %zu subgroups, %zu signal(s)\nwrote\n  %s\n", samples.size(), signals,
                (out / "chart.state").string().c_str());
    print_files(files);
    return 0;
}

int cmd_simulate(const std::string& scenario, const std::string& preset, const fs::path& out,
                 std::optional<std::size_t> replications, std::optional<std::uint64_t> seed, unsigned threads) {
    std::vector<ScenarioSpec> specs;
    if (!preset.empty()) specs = builtin_scenario_group(preset).scenarios;
    else specs = load_scenarios(scenario);

    ensure_dir(out);
    const fs::path table = out / "arl.csv";
    std::ofstream csv(table, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + table.string() + "' for writing");
    csv << "scenario,reliability,alpha,n,m,ic_delta,ic_beta,ic_xr,ooc_delta,ooc_beta,ooc_xr,replications,seed,"
           "max_run,arl,sdrl,standard_error,truncated\n";
    std::printf("%-24s %9s %9s %7s %6s\n", "scenario", "ARL", "SDRL", "SE", "trunc");
    for (ScenarioSpec spec : specs) {
        if (replications) spec.replications = *replications;
        if (seed) spec.seed = *seed;
        spec.threads = threads;
        const RunLengthSummary s = run_study(spec);
        std::printf("%-24s %9.2f %9.2f %7.2f %6zu\n", spec.name.c_str(), s.arl, s.sdrl, s.standard_error(),
                    s.truncated_count);
        std::fflush(stdout);
        csv << spec.name << ',' << format_double(spec.reliability) << ',' << format_double(spec.alpha) << ','
            << spec.subgroup_size << ',' << spec.phase1_samples << ',' << format_double(spec.ic.delta()) << ','
            << format_double(spec.ic.beta()) << ',' << format_double(percentile_of(spec.ic, spec.reliability)) << ','
            << format_double(spec.ooc.delta()) << ',' << format_double(spec.ooc.beta()) << ','
            << format_double(percentile_of(spec.ooc, spec.reliability)) << ',' << spec.replications << ','
            << spec.seed << ',' << spec.max_run << ',' << format_double(s.arl) << ',' << format_double(s.sdrl) << ','
            << format_double(s.standard_error()) << ',' << s.truncated_count << '\n';
    }
    if (!csv) throw IoError("failed writing '" + table.string() + "'");
    std::printf("wrote %s\n", table.string().c_str());
    std::printf("note: truncated replications enter the ARL at max_run, which biases it low.\n");
    return 0;
}

int cmd_demo(const fs::path& out, std::uint64_t seed) {
    const DemoReports reports = demo_padgett(out, seed);
    for (const auto* dir : {&reports.baseline.summary, &reports.windowed.summary}) {
        std::ifstream in(*dir);
        std::cout << in.rdbuf() << '\n';
    }
    std::printf("wrote\n");
    print_files(reports.baseline);
    print_files(reports.windowed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian control charts for a Weibull percentile"};
    app.require_subcommand(1);

    std::string config, data, out, state, scenario, preset;
    bool restart = false;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> seed;
    std::uint64_t demo_seed = kDemoSeed;
    unsigned threads = 0;

    auto* phase1 = app.add_subcommand("phase1", "train a chart on in-control subgroups and freeze its limits");
    phase1->add_option("--config", config, "key = value chart configuration")->required()->check(CLI::ExistingFile);
    phase1->add_option("--data", data, "training subgroups, one per line")->required()->check(CLI::ExistingFile);
    phase1->add_option("--out", out, "output directory")->required();

    auto* monitor = app.add_subcommand("monitor", "judge new subgroups against a trained chart");
    monitor->add_option("--state", state, "chart.state written by phase1 or monitor")
        ->required()
        ->check(CLI::ExistingFile);
    monitor->add_option("--data", data, "subgroups to monitor, one per line")->required()->check(CLI::ExistingFile);
    monitor->add_option("--out", out, "output directory")->required();
    monitor->add_flag("--restart-on-signal", restart, "drop each signalling subgroup and keep monitoring");

    auto* simulate = app.add_subcommand("simulate-arl", "Monte Carlo run-length study");
    auto* scen = simulate->add_option("--scenario", scenario, "scenario file")->check(CLI::ExistingFile);
    auto* pre = simulate->add_option("--preset", preset,
                                     "built-in group: shift_comparison, shape_stability, fixed_budget, fixed_m, "
                                     "in_control");
    scen->excludes(pre);
    simulate->add_option("--out", out, "output directory")->required();
    simulate->add_option("--replications", replications, "override replications");
    simulate->add_option("--seed", seed, "override seed");
    simulate->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* demo = app.add_subcommand("demo-padgett", "carbon-fibre example with and without a handoff window");
    demo->add_option("--out", out, "output directory")->required();
    demo->add_option("--seed", demo_seed, "seed for the resampled training set");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*phase1) return cmd_phase1(config, data, out);
        if (*monitor) return cmd_monitor(state, data, out, restart);
        if (*simulate) {
            if (scenario.empty() && preset.empty()) throw FormatError("simulate-arl: give --scenario or --preset");
            return cmd_simulate(scenario, preset, out, replications, seed, threads);
        }
        if (*demo) return cmd_demo(out, demo_seed);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
