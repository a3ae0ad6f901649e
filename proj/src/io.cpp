#include "wbchart/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wbchart/error.hpp"
#include "wbchart/scenarios.hpp"

namespace wbchart {

namespace {

struct Location {
    std::string source;
    std::size_t line = 0;
    std::string field;

    std::string prefix() const {
        std::string s = source + ":" + std::to_string(line);
        if (!field.empty()) s += ": field '" + field + "'";
        return s + ": ";
    }
};

template <class E>
[[noreturn]] void fail(const Location& where, const std::string& message) {
    throw E(where.prefix() + message);
}

// Runs `f` and prefixes any library error with the location, keeping its type.
template <class F>
auto at(const Location& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const DomainError& e) {
        fail<DomainError>(where, e.what());
    } catch (const RestrictionError& e) {
        fail<RestrictionError>(where, e.what());
    } catch (const ShapeError& e) {
        fail<ShapeError>(where, e.what());
    } catch (const RangeError& e) {
        fail<RangeError>(where, e.what());
    } catch (const NoSolutionError& e) {
        fail<NoSolutionError>(where, e.what());
    } catch (const StateError& e) {
        fail<StateError>(where, e.what());
    } catch (const FormatError& e) {
        fail<FormatError>(where, e.what());
    } catch (const Error& e) {
        fail<Error>(where, e.what());
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i == line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ',' && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        out.push_back(line.substr(start, i - start));
    }
    return out;
}

double parse_real(std::string_view text, const Location& where) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        fail<FormatError>(where, "'" + std::string(text) + "' is not a finite number");
    }
    return value;
}

std::uint64_t parse_unsigned(std::string_view text, const Location& where) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail<FormatError>(where, "'" + std::string(text) + "' is not a non-negative integer");
    }
    return value;
}

std::size_t parse_count(std::string_view text, const Location& where) {
    return static_cast<std::size_t>(parse_unsigned(text, where));
}

bool parse_bool(std::string_view text, const Location& where) {
    if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
    if (text == "false" || text == "no" || text == "off" || text == "0") return false;
    fail<FormatError>(where, "'" + std::string(text) + "' is not a boolean (true/false)");
}

std::vector<double> parse_reals(std::string_view text, const Location& where) {
    std::vector<double> out;
    for (auto token : split_fields(text)) out.push_back(parse_real(token, where));
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ' ';
        s += format_double(values[i]);
    }
    return s;
}

std::string join(std::span<const double> values) { return join(std::vector<double>(values.begin(), values.end())); }

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---- key = value documents ----------------------------------------------

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string name;  // empty for the leading unnamed block
    std::size_t line = 0;
    std::vector<Entry> entries;
};

std::vector<Section> read_document(std::istream& in, const std::string& source) {
    std::vector<Section> sections(1);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const Location where{source, line_no, {}};
        if (line.front() == '[') {
            if (line.back() != ']') fail<FormatError>(where, "unterminated section header");
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (name.empty()) fail<FormatError>(where, "empty section name");
            for (const auto& s : sections)
                if (s.name == name) fail<FormatError>(where, "duplicate section [" + name + "]");
            sections.push_back(Section{name, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail<FormatError>(where, "expected 'key = value'");
        Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
        if (e.key.empty()) fail<FormatError>(where, "missing key before '='");
        sections.back().entries.push_back(std::move(e));
    }
    if (in.bad()) throw IoError(source + ": read error");
    return sections;
}

// Keys of one block, each seen at most once unless listed as repeatable.
class KeyTable {
public:
    KeyTable(const std::string& source, const std::vector<Entry>& entries,
             const std::vector<std::string>& repeatable = {})
        : source_(source) {
        for (const auto& e : entries) {
            const bool repeats = std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end();
            if (!repeats && map_.count(e.key)) {
                fail<FormatError>(Location{source, e.line, e.key}, "duplicate key (first set on line " +
                                                                       std::to_string(map_.at(e.key).line) + ")");
            }
            if (repeats) repeated_[e.key].push_back(e);
            else map_.emplace(e.key, e);
        }
    }

    const Entry* find(const std::string& key) {
        used_.push_back(key);
        const auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    const Entry& require(const std::string& key, std::size_t fallback_line) {
        const Entry* e = find(key);
        if (!e) fail<FormatError>(Location{source_, fallback_line, key}, "required key is missing");
        return *e;
    }

    const std::vector<Entry>& all(const std::string& key) {
        used_.push_back(key);
        return repeated_[key];
    }

    Location where(const Entry& e) const { return Location{source_, e.line, e.key}; }

    // Rejects keys nobody asked for.
    void check_unused() const {
        for (const auto& [key, e] : map_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                fail<FormatError>(Location{source_, e.line, key}, "unknown key");
            }
        }
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, Entry> map_;
    std::map<std::string, std::vector<Entry>> repeated_;
    std::vector<std::string> used_;
};

const char* const kConfigKeys[] = {"reliability",   "alpha",          "subgroup_size",     "phase1_samples",
                                   "prior.beta1",   "prior.beta2",    "prior.x_bar",       "handoff_window",
                                   "enable_beta_chart", "reelicit_in_phase2", "seed"};

RunSettings settings_from(KeyTable& keys, std::size_t end_line) {
    RunSettings s;
    ChartConfig& c = s.chart;
    auto real = [&](const char* key, double& target) {
        if (const Entry* e = keys.find(key)) target = parse_real(e->value, keys.where(*e));
    };
    auto count = [&](const char* key, std::size_t& target) {
        if (const Entry* e = keys.find(key)) target = parse_count(e->value, keys.where(*e));
    };
    auto flag = [&](const char* key, bool& target) {
        if (const Entry* e = keys.find(key)) target = parse_bool(e->value, keys.where(*e));
    };
    real("reliability", c.reliability);
    real("alpha", c.alpha);
    count("subgroup_size", c.subgroup_size);
    count("phase1_samples", c.phase1_samples);
    real("prior.beta1", c.prior_beta1);
    real("prior.beta2", c.prior_beta2);
    real("prior.x_bar", c.prior_x_bar);
    flag("enable_beta_chart", c.enable_beta_chart);
    flag("reelicit_in_phase2", c.reelicit_in_phase2);
    if (const Entry* e = keys.find("handoff_window")) {
        if (e->value == "none") c.handoff_window.reset();
        else c.handoff_window = parse_count(e->value, keys.where(*e));
    }
    if (const Entry* e = keys.find("seed")) s.seed = parse_unsigned(e->value, keys.where(*e));

    // Validate field by field so the message points at the offending line.
    auto blame = [&](std::initializer_list<const char*> candidates) {
        Location loc{keys.source(), end_line, *candidates.begin()};
        std::size_t best = 0;
        for (const char* key : candidates) {
            if (const Entry* e = keys.find(key); e && e->line >= best) {
                best = e->line;
                loc = keys.where(*e);
            }
        }
        return loc;
    };
    at(blame({"reliability"}), [&] { check_reliability(c.reliability); });
    at(blame({"alpha"}), [&] { check_alpha(c.alpha); });
    at(blame({"subgroup_size"}), [&] {
        if (c.subgroup_size == 0) throw ShapeError("subgroup_size must be positive");
    });
    at(blame({"phase1_samples"}), [&] {
        if (c.phase1_samples == 0) throw ShapeError("phase1_samples must be positive");
    });
    at(blame({"handoff_window", "phase1_samples"}), [&] {
        if (c.handoff_window && (*c.handoff_window == 0 || *c.handoff_window > c.phase1_samples))
            throw RangeError("handoff_window must lie in [1, phase1_samples]");
    });
    at(blame({"prior.beta1", "prior.beta2", "prior.x_bar"}), [&] { (void)c.initial_prior(); });
    return s;
}

std::string config_lines(const ChartConfig& c) {
    std::string s;
    s += "reliability = " + format_double(c.reliability) + "\n";
    s += "alpha = " + format_double(c.alpha) + "\n";
    s += "subgroup_size = " + std::to_string(c.subgroup_size) + "\n";
    s += "phase1_samples = " + std::to_string(c.phase1_samples) + "\n";
    s += "prior.beta1 = " + format_double(c.prior_beta1) + "\n";
    s += "prior.beta2 = " + format_double(c.prior_beta2) + "\n";
    s += "prior.x_bar = " + format_double(c.prior_x_bar) + "\n";
    s += "handoff_window = " + (c.handoff_window ? std::to_string(*c.handoff_window) : std::string("none")) + "\n";
    s += std::string("enable_beta_chart = ") + (c.enable_beta_chart ? "true" : "false") + "\n";
    s += std::string("reelicit_in_phase2 = ") + (c.reelicit_in_phase2 ? "true" : "false") + "\n";
    return s;
}

std::size_t last_line(const std::vector<Section>& doc) {
    std::size_t line = 0;
    for (const auto& s : doc) {
        line = std::max(line, s.line);
        for (const auto& e : s.entries) line = std::max(line, e.line);
    }
    return line;
}

// ---- scenarios ------------------------------------------------------------

ScenarioSpec apply_scenario_keys(ScenarioSpec spec, KeyTable& keys, bool allow_models) {
    auto real = [&](const char* key, double& target) {
        if (const Entry* e = keys.find(key)) target = parse_real(e->value, keys.where(*e));
    };
    auto count = [&](const char* key, std::size_t& target) {
        if (const Entry* e = keys.find(key)) target = parse_count(e->value, keys.where(*e));
    };
    real("reliability", spec.reliability);
    real("alpha", spec.alpha);
    count("subgroup_size", spec.subgroup_size);
    count("phase1_samples", spec.phase1_samples);
    count("replications", spec.replications);
    count("max_run", spec.max_run);
    real("prior_factor", spec.prior_factor);
    if (const Entry* e = keys.find("seed")) spec.seed = parse_unsigned(e->value, keys.where(*e));
    if (const Entry* e = keys.find("prior_mode")) {
        if (e->value == "centered") spec.prior_mode = PriorMode::Centered;
        else if (e->value == "shifted") spec.prior_mode = PriorMode::Shifted;
        else fail<FormatError>(keys.where(*e), "expected 'centered' or 'shifted'");
    }
    if (const Entry* e = keys.find("monitored")) {
        if (e->value == "xr") spec.monitored = MonitoredChart::Xr;
        else if (e->value == "beta") spec.monitored = MonitoredChart::Beta;
        else fail<FormatError>(keys.where(*e), "expected 'xr' or 'beta'");
    }
    if (!allow_models) return spec;

    const Entry* ic_delta = keys.find("ic.delta");
    const Entry* ic_beta = keys.find("ic.beta");
    if (ic_delta || ic_beta) {
        const double d = ic_delta ? parse_real(ic_delta->value, keys.where(*ic_delta)) : spec.ic.delta();
        const double b = ic_beta ? parse_real(ic_beta->value, keys.where(*ic_beta)) : spec.ic.beta();
        spec.ic = at(keys.where(ic_delta ? *ic_delta : *ic_beta), [&] { return WeibullModel(d, b); });
    }

    ShiftTarget target;
    const Entry* first = nullptr;
    auto shift = [&](const char* key, std::optional<double>& slot) {
        if (const Entry* e = keys.find(key)) {
            slot = parse_real(e->value, keys.where(*e));
            if (!first || e->line < first->line) first = e;
        }
    };
    shift("ooc.delta", target.delta);
    shift("ooc.beta", target.beta);
    shift("ooc.x_r", target.x_r);
    shift("ooc.mean", target.mean);
    shift("ooc.stddev", target.stddev);
    if (first) spec.ooc = at(keys.where(*first), [&] { return scenario_from_shift(spec.ic, target, spec.reliability); });
    else spec.ooc = spec.ic;
    return spec;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw FormatError("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::vector<Sample> parse_samples(std::istream& in, std::size_t subgroup_size, const std::string& source) {
    if (subgroup_size == 0) throw ShapeError(source + ": subgroup size must be positive");
    std::vector<Sample> samples;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_fields(line);
        if (fields.size() != subgroup_size) {
            fail<ShapeError>(Location{source, line_no, ""},
                             "expected " + std::to_string(subgroup_size) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        Sample sample;
        sample.reserve(subgroup_size);
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const Location where{source, line_no, std::to_string(j + 1)};
            const double x = parse_real(fields[j], where);
            if (!(x > 0.0)) fail<DomainError>(where, "observation " + std::string(fields[j]) + " is not positive");
            sample.push_back(x);
        }
        samples.push_back(std::move(sample));
    }
    if (in.bad()) throw IoError(source + ": read error");
    return samples;
}

std::vector<Sample> ingest_samples(const std::filesystem::path& path, std::size_t subgroup_size) {
    auto in = open_input(path);
    return parse_samples(in, subgroup_size, path.string());
}

RunSettings parse_config(std::istream& in, const std::string& source) {
    const auto doc = read_document(in, source);
    if (doc.size() > 1) fail<FormatError>(Location{source, doc[1].line, doc[1].name}, "sections are not allowed here");
    KeyTable keys(source, doc.front().entries);
    RunSettings s = settings_from(keys, last_line(doc));
    keys.check_unused();
    return s;
}

RunSettings load_config(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_config(in, path.string());
}

std::string serialize_config(const RunSettings& settings) {
    std::string s = "# chart configuration\n" + config_lines(settings.chart);
    if (settings.seed) s += "seed = " + std::to_string(*settings.seed) + "\n";
    return s;
}

std::vector<ScenarioSpec> parse_scenarios(std::istream& in, const std::string& source) {
    const auto doc = read_document(in, source);
    const std::vector<Entry>& defaults = doc.front().entries;
    std::vector<ScenarioSpec> out;

    auto build = [&](const std::string& name, std::size_t line, std::vector<Entry> entries) {
        // Section keys override defaults.
        std::vector<Entry> merged;
        for (const auto& d : defaults) {
            const bool overridden =
                std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == d.key; });
            if (!overridden) merged.push_back(d);
        }
        merged.insert(merged.end(), entries.begin(), entries.end());
        KeyTable keys(source, merged);

        std::vector<ScenarioSpec> specs;
        if (const Entry* preset = keys.find("preset")) {
            const ScenarioGroup group = at(keys.where(*preset), [&] { return builtin_scenario_group(preset->value); });
            for (ScenarioSpec spec : group.scenarios) {
                if (!name.empty()) spec.name = name + "." + spec.name;
                specs.push_back(apply_scenario_keys(spec, keys, false));
            }
        } else {
            ScenarioSpec spec;
            spec.name = name.empty() ? "scenario" : name;
            specs.push_back(apply_scenario_keys(spec, keys, true));
        }
        keys.check_unused();
        for (auto& spec : specs) {
            at(Location{source, line, name.empty() ? spec.name : name}, [&] { spec.validate(); });
            out.push_back(std::move(spec));
        }
    };

    if (doc.size() == 1) {
        build("", last_line(doc), defaults);
    } else {
        for (std::size_t i = 1; i < doc.size(); ++i) build(doc[i].name, doc[i].line, doc[i].entries);
    }
    return out;
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_scenarios(in, path.string());
}

// ---- chart state ----------------------------------------------------------

namespace {

const char* const kStateFormat = "wbchart-chart-state";
const char* const kRecordColumns =
    "sample_index phase xr_point beta_point beta_bar xr.lcl xr.ucl xr.cl xr.alpha xr.gamma "
    "beta.lcl beta.ucl beta.cl beta.alpha signal outside_own_limits";

std::string limits_text(const std::optional<ControlLimits>& l) {
    if (!l) return "none";
    return format_double(l->lcl) + " " + format_double(l->ucl) + " " + format_double(l->cl) + " " +
           format_double(l->alpha) + " " + (l->gamma_shape ? format_double(*l->gamma_shape) : std::string("-"));
}

std::optional<ControlLimits> parse_limits(std::string_view text, const Location& where) {
    if (text == "none") return std::nullopt;
    const auto f = split_fields(text);
    if (f.size() != 5) fail<FormatError>(where, "expected 'lcl ucl cl alpha gamma' or 'none'");
    ControlLimits l;
    l.lcl = parse_real(f[0], where);
    l.ucl = parse_real(f[1], where);
    l.cl = parse_real(f[2], where);
    l.alpha = parse_real(f[3], where);
    if (f[4] != "-") l.gamma_shape = parse_real(f[4], where);
    return l;
}

std::string posterior_lines(const std::string& prefix, const PosteriorState& p) {
    const PriorSpec& pr = p.prior();
    std::string s;
    s += prefix + ".prior = " + join(std::vector<double>{pr.beta1, pr.beta2, pr.a, pr.b_bar, pr.x_bar}) + "\n";
    s += prefix + ".observations = " + join(p.observations()) + "\n";
    s += prefix + ".beta_hats = " + join(p.beta_hat_history()) + "\n";
    s += prefix + ".xr_hats = " + join(p.xr_hat_history()) + "\n";
    return s;
}

PosteriorState parse_posterior(KeyTable& keys, const std::string& prefix, const ChartConfig& config,
                               std::size_t fallback_line) {
    const Entry& prior_e = keys.require(prefix + ".prior", fallback_line);
    const auto pv = parse_reals(prior_e.value, keys.where(prior_e));
    if (pv.size() != 5) fail<FormatError>(keys.where(prior_e), "expected 'beta1 beta2 a b_bar x_bar'");
    PriorSpec prior{pv[0], pv[1], pv[2], pv[3], pv[4]};
    const Entry& obs = keys.require(prefix + ".observations", fallback_line);
    const Entry& betas = keys.require(prefix + ".beta_hats", fallback_line);
    const Entry& xrs = keys.require(prefix + ".xr_hats", fallback_line);
    return at(keys.where(obs), [&] {
        return PosteriorState::restore(prior, config.subgroup_size, config.reliability,
                                       parse_reals(obs.value, keys.where(obs)),
                                       parse_reals(betas.value, keys.where(betas)),
                                       parse_reals(xrs.value, keys.where(xrs)));
    });
}

std::string record_text(const ChartRecord& r) {
    std::string s = std::to_string(r.sample_index) + " " + to_string(r.phase) + " " + format_double(r.xr_point) + " " +
                    format_double(r.beta_point) + " " + format_double(r.beta_bar) + " " +
                    limits_text(r.xr_limits) + " ";
    s += r.beta_limits ? limits_text(r.beta_limits).substr(0, limits_text(r.beta_limits).rfind(' '))
                       : std::string("- - - -");
    s += std::string(" ") + to_string(r.signal) + " " + (r.outside_own_limits ? "1" : "0");
    return s;
}

ChartRecord parse_record(std::string_view text, const Location& where) {
    const auto f = split_fields(text);
    if (f.size() != 16) fail<FormatError>(where, "expected 16 record columns, found " + std::to_string(f.size()));
    ChartRecord r;
    r.sample_index = parse_count(f[0], where);
    if (f[1] == "I") r.phase = Phase::PhaseI;
    else if (f[1] == "II") r.phase = Phase::PhaseII;
    else fail<FormatError>(where, "phase must be I or II");
    r.xr_point = parse_real(f[2], where);
    r.beta_point = parse_real(f[3], where);
    r.beta_bar = parse_real(f[4], where);
    r.xr_limits.lcl = parse_real(f[5], where);
    r.xr_limits.ucl = parse_real(f[6], where);
    r.xr_limits.cl = parse_real(f[7], where);
    r.xr_limits.alpha = parse_real(f[8], where);
    if (f[9] != "-") r.xr_limits.gamma_shape = parse_real(f[9], where);
    if (f[10] != "-") {
        ControlLimits b;
        b.lcl = parse_real(f[10], where);
        b.ucl = parse_real(f[11], where);
        b.cl = parse_real(f[12], where);
        b.alpha = parse_real(f[13], where);
        r.beta_limits = b;
    }
    const std::string_view sig = f[14];
    if (sig == "none") r.signal = Signal::None;
    else if (sig == "xr_ooc") r.signal = Signal::XrOutOfControl;
    else if (sig == "beta_ooc") r.signal = Signal::BetaOutOfControl;
    else if (sig == "both") r.signal = Signal::Both;
    else fail<FormatError>(where, "unknown signal '" + std::string(sig) + "'");
    r.outside_own_limits = parse_bool(f[15], where);
    return r;
}

}  // namespace

std::string serialize_chart_state(const ControlChart& chart) {
    std::string s = "# trained Weibull percentile chart; do not edit by hand\n";
    s += std::string("format = ") + kStateFormat + "\n";
    s += "version = " + std::to_string(kChartStateVersion) + "\n";
    s += config_lines(chart.config());
    s += "history_length = " + std::to_string(chart.history_length()) + "\n";
    s += "frozen.xr = " + limits_text(chart.frozen_xr_limits()) + "\n";
    s += "frozen.beta = " + limits_text(chart.frozen_beta_limits()) + "\n";
    s += posterior_lines("posterior", chart.posterior());
    if (const auto& rb = chart.rollback_point()) {
        s += "rollback = pending\n";
        s += "rollback.history_length = " + std::to_string(rb->history_length) + "\n";
        s += posterior_lines("rollback", rb->posterior);
    } else {
        s += "rollback = none\n";
    }
    s += std::string("record.columns = ") + kRecordColumns + "\n";
    for (const auto& r : chart.records()) s += "record = " + record_text(r) + "\n";
    return s;
}

ControlChart parse_chart_state(std::istream& in, const std::string& source) {
    const auto doc = read_document(in, source);
    if (doc.size() > 1) fail<FormatError>(Location{source, doc[1].line, doc[1].name}, "sections are not allowed here");
    const std::size_t end = last_line(doc);
    KeyTable keys(source, doc.front().entries, {"record"});

    const Entry& format = keys.require("format", 1);
    if (format.value != kStateFormat) fail<FormatError>(keys.where(format), "not a chart-state file");
    const Entry& version = keys.require("version", format.line);
    if (parse_unsigned(version.value, keys.where(version)) != static_cast<std::uint64_t>(kChartStateVersion)) {
        fail<FormatError>(keys.where(version), "unsupported version " + version.value);
    }
    const Entry& columns = keys.require("record.columns", end);
    if (columns.value != kRecordColumns) fail<FormatError>(keys.where(columns), "unexpected record layout");

    const RunSettings settings = settings_from(keys, end);
    if (settings.seed) fail<FormatError>(Location{source, end, "seed"}, "seed does not belong in a state file");
    const ChartConfig& config = settings.chart;

    const Entry& hist = keys.require("history_length", end);
    const std::size_t history_length = parse_count(hist.value, keys.where(hist));
    const Entry& fx = keys.require("frozen.xr", end);
    const auto xr = parse_limits(fx.value, keys.where(fx));
    if (!xr) fail<FormatError>(keys.where(fx), "x_R limits are required");
    const Entry& fb = keys.require("frozen.beta", end);
    const auto beta = parse_limits(fb.value, keys.where(fb));

    PosteriorState posterior = parse_posterior(keys, "posterior", config, end);
    std::optional<ControlChart::Snapshot> rollback;
    const Entry& rb = keys.require("rollback", end);
    if (rb.value == "pending") {
        const Entry& rh = keys.require("rollback.history_length", rb.line);
        rollback = ControlChart::Snapshot{parse_posterior(keys, "rollback", config, rb.line),
                                          parse_count(rh.value, keys.where(rh))};
    } else if (rb.value != "none") {
        fail<FormatError>(keys.where(rb), "expected 'pending' or 'none'");
    }

    std::vector<ChartRecord> records;
    for (const Entry& e : keys.all("record")) records.push_back(parse_record(e.value, keys.where(e)));
    keys.check_unused();

    return at(Location{source, end, "state"}, [&] {
        return ControlChart::restore(config, std::move(posterior), *xr, beta, std::move(records), history_length,
                                     std::move(rollback));
    });
}

void save_chart_state(const ControlChart& chart, const std::filesystem::path& path) {
    write_text(path, serialize_chart_state(chart));
}

ControlChart load_chart_state(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_chart_state(in, path.string());
}

}  // namespace wbchart
