#include "wbchart/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wbchart/error.hpp"
#include "wbchart/io.hpp"

namespace wbchart {

namespace {

bool signals_on(const ChartRecord& r, bool beta_chart) {
    if (r.signal == Signal::Both) return true;
    return r.signal == (beta_chart ? Signal::BetaOutOfControl : Signal::XrOutOfControl);
}

double point_of(const ChartRecord& r, bool beta_chart) { return beta_chart ? r.beta_point : r.xr_point; }

const ControlLimits* limits_of(const ChartRecord& r, bool beta_chart) {
    if (!beta_chart) return &r.xr_limits;
    return r.beta_limits ? &*r.beta_limits : nullptr;
}

std::string num(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Tick spacing of 1, 2 or 5 times a power of ten giving about `target` ticks.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string limits_line(const char* label, const ControlLimits& l) {
    return std::string(label) + ": LCL = " + num(l.lcl, 4) + ", UCL = " + num(l.ucl, 4) +
           ", width = " + num(l.width(), 4) + "\n";
}

}  // namespace

std::optional<std::size_t> first_signal(const std::vector<ChartRecord>& records, bool beta_chart) {
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].phase == Phase::PhaseII && signals_on(records[i], beta_chart)) return i + 1;
    return std::nullopt;
}

std::string records_csv(const std::vector<ChartRecord>& records) {
    std::string s =
        "obs,sample_index,phase,xr_point,xr_lcl,xr_ucl,xr_cl,beta_point,beta_bar,beta_lcl,beta_ucl,beta_cl,signal,"
        "outside_own_limits\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ChartRecord& r = records[i];
        s += std::to_string(i + 1) + "," + std::to_string(r.sample_index) + "," + to_string(r.phase) + "," +
             format_double(r.xr_point) + "," + format_double(r.xr_limits.lcl) + "," + format_double(r.xr_limits.ucl) +
             "," + format_double(r.xr_limits.cl) + "," + format_double(r.beta_point) + "," +
             format_double(r.beta_bar) + ",";
        if (r.beta_limits) {
            s += format_double(r.beta_limits->lcl) + "," + format_double(r.beta_limits->ucl) + "," +
                 format_double(r.beta_limits->cl) + ",";
        } else {
            s += ",,,";
        }
        s += std::string(to_string(r.signal)) + "," + (r.outside_own_limits ? "1" : "0") + "\n";
    }
    return s;
}

std::string chart_svg(const std::vector<ChartRecord>& records, bool beta_chart, const std::string& title) {
    constexpr double W = 760, H = 420, left = 70, right = 30, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    const std::size_t count = std::max<std::size_t>(records.size(), 1);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : records) {
        lo = std::min(lo, point_of(r, beta_chart));
        hi = std::max(hi, point_of(r, beta_chart));
        if (const ControlLimits* l = limits_of(r, beta_chart)) {
            lo = std::min(lo, l->lcl);
            hi = std::max(hi, l->ucl);
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto sx = [&](double obs) { return left + (obs - 0.5) / static_cast<double>(count) * pw; };
    auto sy = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W, 0) + "\" height=\"" + num(H, 0) +
         "\" viewBox=\"0 0 " + num(W, 0) + " " + num(H, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + xml_escape(title) +
         "</text>\n";
    s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    // Axes.
    const double ystep = nice_step(hi - lo, 6);
    for (double v = std::ceil(lo / ystep) * ystep; v <= hi; v += ystep) {
        const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(ystep))));
        s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(v)) + "\" x2=\"" + num(left) + "\" y2=\"" +
             num(sy(v)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(v) + 4) + "\" text-anchor=\"end\">" + num(v, digits) +
             "</text>\n";
    }
    const std::size_t xstep = count <= 25 ? 1 : count <= 60 ? 5 : 10;
    for (std::size_t i = xstep; i <= count; i += xstep) {
        const double x = sx(static_cast<double>(i));
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" +
             std::to_string(i) + "</text>\n";
    }
    s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 10) + "\" text-anchor=\"middle\">sample</text>\n";
    s += "<text x=\"18\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         num(top + ph / 2) + ")\">" + (beta_chart ? "beta estimate" : "x_R estimate") + "</text>\n";

    // Limits: step traces while they are being refined, flat once frozen.
    auto trace = [&](bool upper) {
        std::string pts;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const ControlLimits* l = limits_of(records[i], beta_chart);
            if (!l) continue;
            const double v = upper ? l->ucl : l->lcl;
            const double obs = static_cast<double>(i + 1);
            pts += num(sx(obs - 0.5)) + "," + num(sy(v)) + " " + num(sx(obs + 0.5)) + "," + num(sy(v)) + " ";
        }
        if (!pts.empty()) {
            pts.pop_back();
            s += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        }
    };
    trace(false);
    trace(true);

    // Phase boundary.
    std::size_t phase1 = 0;
    for (const auto& r : records)
        if (r.phase == Phase::PhaseI) ++phase1;
    if (phase1 > 0 && phase1 < records.size()) {
        const double x = sx(static_cast<double>(phase1) + 0.5);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(top) + "\" x2=\"" + num(x) + "\" y2=\"" + num(top + ph) +
             "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    }
    if (const auto first = first_signal(records, beta_chart)) {
        const double x = sx(static_cast<double>(*first));
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(top) + "\" x2=\"" + num(x) + "\" y2=\"" + num(top + ph) +
             "\" stroke=\"#c0392b\" stroke-dasharray=\"2,3\"/>\n";
        s += "<text x=\"" + num(x + 4) + "\" y=\"" + num(top + 14) + "\" fill=\"#c0392b\">signal at " +
             std::to_string(*first) + "</text>\n";
    }

    // Points.
    if (!records.empty()) {
        std::string pts;
        for (std::size_t i = 0; i < records.size(); ++i)
            pts += num(sx(static_cast<double>(i + 1))) + "," + num(sy(point_of(records[i], beta_chart))) + " ";
        pts.pop_back();
        s += "<polyline fill=\"none\" stroke=\"black\" points=\"" + pts + "\"/>\n";
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const bool hit = records[i].phase == Phase::PhaseII && signals_on(records[i], beta_chart);
        s += "<circle cx=\"" + num(sx(static_cast<double>(i + 1))) + "\" cy=\"" +
             num(sy(point_of(records[i], beta_chart))) + "\" r=\"3.5\" fill=\"" + (hit ? "#c0392b" : "black") +
             "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string summary_text(const ControlChart& chart, const std::string& title) {
    const auto& records = chart.records();
    std::size_t phase1 = 0;
    for (const auto& r : records)
        if (r.phase == Phase::PhaseI) ++phase1;
    const ChartConfig& c = chart.config();

    std::string s = title + "\n";
    s += "reliability = " + format_double(c.reliability) + ", alpha = " + format_double(c.alpha) +
         ", n = " + std::to_string(c.subgroup_size) + ", m = " + std::to_string(c.phase1_samples) + "\n";
    s += "prior: beta in (" + format_double(c.prior_beta1) + ", " + format_double(c.prior_beta2) +
         "), anticipated x_R = " + format_double(c.prior_x_bar) + "\n";
    if (c.handoff_window) s += "handoff window = " + std::to_string(*c.handoff_window) + " samples\n";
    s += limits_line("frozen x_R limits", chart.frozen_xr_limits());
    if (chart.frozen_beta_limits()) s += limits_line("frozen beta limits", *chart.frozen_beta_limits());
    s += "Phase I samples = " + std::to_string(phase1) + ", Phase II samples = " +
         std::to_string(records.size() - phase1) + "\n";
    auto signal_line = [&](const char* label, bool beta) {
        if (const auto first = first_signal(records, beta)) {
            s += std::string(label) + " first signal: sample " + std::to_string(*first) + " (Phase II sample " +
                 std::to_string(*first - phase1) + ")\n";
        } else {
            s += std::string(label) + " first signal: none\n";
        }
    };
    signal_line("x_R chart", false);
    if (chart.frozen_beta_limits()) signal_line("beta chart", true);
    std::size_t flagged = 0;
    for (const auto& r : records)
        if (r.outside_own_limits) ++flagged;
    if (flagged) s += "Phase I points outside their own limits: " + std::to_string(flagged) + "\n";
    return s;
}

ReportFiles emit_report(const ControlChart& chart, const std::filesystem::path& output_dir, const std::string& title) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec || !std::filesystem::is_directory(output_dir)) {
        throw IoError("cannot create output directory '" + output_dir.string() + "'" +
                      (ec ? ": " + ec.message() : std::string()));
    }
    ReportFiles files;
    files.records = output_dir / "records.csv";
    files.xr_chart = output_dir / "xr_chart.svg";
    files.summary = output_dir / "summary.txt";
    write_file(files.records, records_csv(chart.records()));
    write_file(files.xr_chart, chart_svg(chart.records(), false, title + ": x_R chart"));
    if (chart.frozen_beta_limits()) {
        files.beta_chart = output_dir / "beta_chart.svg";
        write_file(*files.beta_chart, chart_svg(chart.records(), true, title + ": beta chart"));
    }
    write_file(files.summary, summary_text(chart, title));
    return files;
}

}  // namespace wbchart
