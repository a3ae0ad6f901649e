#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wbchart/chart.hpp"

namespace wbchart {

struct ReportFiles {
    std::filesystem::path records;   // records.csv
    std::filesystem::path xr_chart;  // xr_chart.svg
    std::optional<std::filesystem::path> beta_chart;
    std::filesystem::path summary;   // summary.txt
};

// First record (1-based position in `records`) that signals on the given chart.
std::optional<std::size_t> first_signal(const std::vector<ChartRecord>& records, bool beta_chart);

// records.csv: one row per record, shortest round-trip number formatting.
std::string records_csv(const std::vector<ChartRecord>& records);

// Line chart of the points with the per-step Phase I limits, the frozen
// Phase II limits and a dashed line at the phase boundary.
std::string chart_svg(const std::vector<ChartRecord>& records, bool beta_chart, const std::string& title);

std::string summary_text(const ControlChart& chart, const std::string& title);

// Writes the files above into output_dir (created if missing). The beta
// chart is drawn only when the chart carries beta limits.
ReportFiles emit_report(const ControlChart& chart, const std::filesystem::path& output_dir,
                        const std::string& title = "Weibull percentile chart");

}  // namespace wbchart
