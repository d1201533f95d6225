#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "divcap/format.hpp"
#include "divcap/mimo_bounds.hpp"
#include "divcap/outage.hpp"

namespace divcap {

enum class SweepVariable { m, n, snr_db };
enum class SweepOutput {
    outage_capacity,
    gap_branch,
    gap_combiner,
    ratio_combiner,
    ga_variant,
    bounds,
    asymptotic
};
enum class SnrReference { branch, combiner, link };

inline const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::m: return "m";
        case SweepVariable::n: return "n";
        case SweepVariable::snr_db: return "snr_db";
    }
    return "?";
}

inline const char* to_string(SweepOutput o) {
    switch (o) {
        case SweepOutput::outage_capacity: return "outage_capacity";
        case SweepOutput::gap_branch: return "gap_branch";
        case SweepOutput::gap_combiner: return "gap_combiner";
        case SweepOutput::ratio_combiner: return "ratio_combiner";
        case SweepOutput::ga_variant: return "ga_variant";
        case SweepOutput::bounds: return "bounds";
        case SweepOutput::asymptotic: return "asymptotic";
    }
    return "?";
}

inline const char* to_string(SnrReference r) {
    switch (r) {
        case SnrReference::branch: return "branch";
        case SnrReference::combiner: return "combiner";
        case SnrReference::link: return "link";
    }
    return "?";
}

inline std::optional<SweepVariable> sweep_variable_from_string(std::string_view s) {
    if (s == "m") return SweepVariable::m;
    if (s == "n") return SweepVariable::n;
    if (s == "snr_db") return SweepVariable::snr_db;
    return std::nullopt;
}

inline std::optional<SweepOutput> sweep_output_from_string(std::string_view s) {
    if (s == "outage_capacity") return SweepOutput::outage_capacity;
    if (s == "gap_branch") return SweepOutput::gap_branch;
    if (s == "gap_combiner") return SweepOutput::gap_combiner;
    if (s == "ratio_combiner") return SweepOutput::ratio_combiner;
    if (s == "ga_variant") return SweepOutput::ga_variant;
    if (s == "bounds") return SweepOutput::bounds;
    if (s == "asymptotic") return SweepOutput::asymptotic;
    return std::nullopt;
}

inline std::optional<SnrReference> snr_reference_from_string(std::string_view s) {
    if (s == "branch") return SnrReference::branch;
    if (s == "combiner") return SnrReference::combiner;
    if (s == "link") return SnrReference::link;
    return std::nullopt;
}

/// Evenly spaced grid, linear or logarithmic, endpoints exact.
inline std::vector<double> make_grid(double start, double stop, int points, bool log_spacing) {
    if (points < 1) throw ConfigError("make_grid: need at least one point");
    if (log_spacing && (!(start > 0.0) || !(stop > 0.0)))
        throw ConfigError("make_grid: log spacing requires positive endpoints");
    if (points == 1) return {start};
    if (!(stop > start)) throw ConfigError("make_grid: stop must exceed start");
    std::vector<double> grid(points);
    if (log_spacing) {
        const double step = (std::log(stop) - std::log(start)) / (points - 1);
        for (int i = 0; i < points; ++i) grid[i] = std::exp(std::log(start) + step * i);
    } else {
        const double step = (stop - start) / (points - 1);
        for (int i = 0; i < points; ++i) grid[i] = start + step * i;
    }
    grid.front() = start;
    grid.back() = stop;
    return grid;
}

/// One parameter sweep: a swept variable over a grid, fixed channel fields,
/// a list of outage probabilities, and the quantities to emit per point.
struct SweepSpec {
    DiversityScheme scheme = DiversityScheme::mrc;
    std::uint32_t rx_antennas = 1;
    std::uint32_t tx_antennas = 1;
    SweepVariable variable = SweepVariable::m;
    std::vector<double> grid;
    std::vector<double> outage_probs;
    SnrReference snr_reference = SnrReference::branch;
    double snr_db = 0.0;
    std::vector<SweepOutput> outputs;
    EdgeConstant edge = EdgeConstant::paper;

    bool operator==(const SweepSpec&) const = default;

    void validate() const;
    bool wants(SweepOutput o) const {
        for (const SweepOutput out : outputs)
            if (out == o) return true;
        return false;
    }
};

inline void SweepSpec::validate() const {
    if (grid.empty()) throw ConfigError("SweepSpec: grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ConfigError("SweepSpec: grid values must be finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ConfigError("SweepSpec: grid must be strictly increasing");
    }
    if (variable != SweepVariable::snr_db) {
        for (const double g : grid)
            if (g < 1.0 || g != std::floor(g))
                throw ConfigError("SweepSpec: antenna grids need integer values >= 1");
    }
    if (outage_probs.empty()) throw ConfigError("SweepSpec: eps list must be nonempty");
    for (const double e : outage_probs)
        if (!(e > 0.0) || !(e < 1.0)) throw ConfigError("SweepSpec: eps values must be in (0,1)");
    if (outputs.empty()) throw ConfigError("SweepSpec: outputs must be nonempty");
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (std::size_t j = i + 1; j < outputs.size(); ++j)
            if (outputs[i] == outputs[j]) throw ConfigError("SweepSpec: duplicate output");
    if (!std::isfinite(snr_db)) throw ConfigError("SweepSpec: snr_db must be finite");

    const bool mimo = scheme == DiversityScheme::mimo_optimal;
    const bool any_scalar = wants(SweepOutput::outage_capacity) || wants(SweepOutput::gap_branch) ||
                            wants(SweepOutput::gap_combiner) || wants(SweepOutput::ratio_combiner);
    if (mimo && any_scalar)
        throw ConfigError("SweepSpec: scalar capacity outputs need an exact-CDF scheme");
    if (!mimo && (wants(SweepOutput::bounds) || wants(SweepOutput::asymptotic)))
        throw ConfigError("SweepSpec: bounds/asymptotic outputs need the mimo-opt scheme");
    if (wants(SweepOutput::ga_variant)) {
        if (scheme != DiversityScheme::mrc && scheme != DiversityScheme::mrt)
            throw ConfigError("SweepSpec: ga_variant applies to mrc/mrt only");
        if (!any_scalar)
            throw ConfigError("SweepSpec: ga_variant needs at least one scalar output");
    }
    if (mimo != (snr_reference == SnrReference::link))
        throw ConfigError("SweepSpec: link SNR goes with mimo-opt, branch/combiner with the rest");
    if (variable == SweepVariable::m &&
        (scheme == DiversityScheme::mrt || scheme == DiversityScheme::st))
        throw ConfigError("SweepSpec: transmit-side schemes sweep n, not m");
    if (variable == SweepVariable::n &&
        (scheme == DiversityScheme::mrc || scheme == DiversityScheme::sc))
        throw ConfigError("SweepSpec: receive-side schemes sweep m, not n");
}

namespace detail {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline std::vector<std::string> sweep_header(const SweepSpec& spec) {
    std::vector<std::string> cols{to_string(spec.variable), "eps", "method"};
    const bool ga = spec.wants(SweepOutput::ga_variant);
    for (const SweepOutput o : spec.outputs) {
        switch (o) {
            case SweepOutput::outage_capacity:
            case SweepOutput::gap_branch:
            case SweepOutput::gap_combiner:
            case SweepOutput::ratio_combiner: cols.emplace_back(to_string(o)); break;
            case SweepOutput::bounds:
                cols.emplace_back("capacity_lower");
                cols.emplace_back("capacity_upper");
                cols.emplace_back("benchmark_capacity_lower");
                cols.emplace_back("benchmark_capacity_upper");
                break;
            case SweepOutput::asymptotic:
                cols.emplace_back("asymptotic_capacity");
                cols.emplace_back("asymptotic_valid");
                break;
            case SweepOutput::ga_variant: break;  // expanded below
        }
    }
    if (ga) {
        for (const SweepOutput o : spec.outputs) {
            switch (o) {
                case SweepOutput::outage_capacity:
                case SweepOutput::gap_branch:
                case SweepOutput::gap_combiner:
                case SweepOutput::ratio_combiner:
                    cols.emplace_back(std::string(to_string(o)) + "_ga");
                    break;
                default: break;
            }
        }
        cols.emplace_back("ga_valid");
    }
    return cols;
}

inline double scalar_from_report(const CapacityReport& rep, SweepOutput o) {
    switch (o) {
        case SweepOutput::outage_capacity: return rep.outage_capacity;
        case SweepOutput::gap_branch: return rep.gap_vs_branch;
        case SweepOutput::gap_combiner: return rep.gap_vs_combiner;
        case SweepOutput::ratio_combiner: return rep.ratio_vs_combiner;
        default: break;
    }
    throw ConfigError("run_sweep: not a scalar output");
}

}  // namespace detail

/// Evaluate the sweep and stream CSV ('\n' endings, mandatory header, values
/// at 9 significant digits). One row per grid point per eps. Cells whose
/// approximation regime is invalid stay empty next to a 0 flag, never zeroed.
/// Returns the number of data rows written.
inline std::size_t run_sweep(const SweepSpec& spec, std::ostream& out) {
    spec.validate();
    const std::vector<std::string> header = detail::sweep_header(spec);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';

    const bool mimo = spec.scheme == DiversityScheme::mimo_optimal;
    const bool ga = spec.wants(SweepOutput::ga_variant);
    std::size_t rows = 0;
    for (const double point : spec.grid) {
        const std::uint32_t m =
            spec.variable == SweepVariable::m ? static_cast<std::uint32_t>(point)
                                              : spec.rx_antennas;
        const std::uint32_t n =
            spec.variable == SweepVariable::n ? static_cast<std::uint32_t>(point)
                                              : spec.tx_antennas;
        const double snr_linear = detail::db_to_linear(
            spec.variable == SweepVariable::snr_db ? point : spec.snr_db);
        const ChannelConfig cfg =
            spec.snr_reference == SnrReference::combiner
                ? config_with_combiner_snr(spec.scheme, m, n, snr_linear)
                : ChannelConfig::make(spec.scheme, m, n, snr_linear);

        for (const double eps : spec.outage_probs) {
            std::vector<std::string> cells;
            cells.push_back(format_sig(point));
            cells.push_back(format_sig(eps));

            if (mimo) {
                cells.emplace_back("bounds");
                const MimoBoundReport rep = outage_capacity_bounds(cfg, eps);
                for (const SweepOutput o : spec.outputs) {
                    if (o == SweepOutput::bounds) {
                        cells.push_back(format_sig(rep.capacity_lower));
                        cells.push_back(format_sig(rep.capacity_upper));
                        cells.push_back(format_sig(awgn_capacity(rep.snr.mean_lower)));
                        cells.push_back(format_sig(awgn_capacity(rep.snr.mean_upper)));
                    } else if (o == SweepOutput::asymptotic) {
                        if (cfg.rx_antennas >= kAsymptoticAntennaFloor &&
                            cfg.tx_antennas >= kAsymptoticAntennaFloor) {
                            cells.push_back(format_sig(asymptotic_benchmark(cfg, eps, spec.edge)));
                            cells.emplace_back("1");
                        } else {
                            cells.emplace_back("");
                            cells.emplace_back("0");
                        }
                    }
                }
            } else {
                const CapacityReport rep = outage_report(cfg, eps);
                cells.emplace_back(to_string(rep.quantile.method));
                for (const SweepOutput o : spec.outputs)
                    if (o != SweepOutput::ga_variant)
                        cells.push_back(format_sig(detail::scalar_from_report(rep, o)));
                if (ga) {
                    bool valid = true;
                    CapacityReport ga_rep;
                    try {
                        ga_rep = outage_report(cfg, eps, QuantileChoice::gaussian_approx);
                    } catch (const GaRegimeError&) {
                        valid = false;
                    }
                    for (const SweepOutput o : spec.outputs) {
                        if (o == SweepOutput::ga_variant) continue;
                        if (valid)
                            cells.push_back(format_sig(detail::scalar_from_report(ga_rep, o)));
                        else
                            cells.emplace_back("");
                    }
                    cells.emplace_back(valid ? "1" : "0");
                }
            }

            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out << ',';
                out << cells[i];
            }
            out << '\n';
            ++rows;
        }
    }
    return rows;
}

// --- Config-file round trip -------------------------------------------------
// Plain key=value lines, the same keys the CLI flags use.

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

inline double parse_number(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": cannot parse number '" + text + "'");
    }
}

}  // namespace detail

inline std::map<std::string, std::string> to_key_values(const SweepSpec& spec) {
    std::map<std::string, std::string> kv;
    kv["scheme"] = to_string(spec.scheme);
    kv["m"] = std::to_string(spec.rx_antennas);
    kv["n"] = std::to_string(spec.tx_antennas);
    kv["variable"] = to_string(spec.variable);
    std::string grid;
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (i) grid += ',';
        grid += format_exact(spec.grid[i]);
    }
    kv["grid"] = grid;
    std::string eps;
    for (std::size_t i = 0; i < spec.outage_probs.size(); ++i) {
        if (i) eps += ',';
        eps += format_exact(spec.outage_probs[i]);
    }
    kv["eps"] = eps;
    kv["snr-reference"] = to_string(spec.snr_reference);
    kv["snr-db"] = format_exact(spec.snr_db);
    std::string outputs;
    for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
        if (i) outputs += ',';
        outputs += to_string(spec.outputs[i]);
    }
    kv["outputs"] = outputs;
    kv["edge-constant"] = to_string(spec.edge);
    return kv;
}

inline SweepSpec sweep_spec_from_key_values(const std::map<std::string, std::string>& kv) {
    auto require = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(std::string("sweep config: missing key ") + key);
        return it->second;
    };
    SweepSpec spec;
    if (const auto s = scheme_from_string(require("scheme"))) spec.scheme = *s;
    else throw ConfigError("sweep config: unknown scheme '" + require("scheme") + "'");
    spec.rx_antennas = static_cast<std::uint32_t>(detail::parse_number(require("m"), "m"));
    spec.tx_antennas = static_cast<std::uint32_t>(detail::parse_number(require("n"), "n"));
    if (const auto v = sweep_variable_from_string(require("variable"))) spec.variable = *v;
    else throw ConfigError("sweep config: unknown variable '" + require("variable") + "'");
    for (const std::string& g : detail::split_list(require("grid")))
        spec.grid.push_back(detail::parse_number(g, "grid"));
    for (const std::string& e : detail::split_list(require("eps")))
        spec.outage_probs.push_back(detail::parse_number(e, "eps"));
    if (const auto r = snr_reference_from_string(require("snr-reference"))) spec.snr_reference = *r;
    else throw ConfigError("sweep config: unknown snr-reference");
    spec.snr_db = detail::parse_number(require("snr-db"), "snr-db");
    for (const std::string& o : detail::split_list(require("outputs"))) {
        if (const auto out = sweep_output_from_string(o)) spec.outputs.push_back(*out);
        else throw ConfigError("sweep config: unknown output '" + o + "'");
    }
    if (const auto it = kv.find("edge-constant"); it != kv.end())
        spec.edge = it->second == "marchenko-pastur" ? EdgeConstant::marchenko_pastur
                                                     : EdgeConstant::paper;
    spec.validate();
    return spec;
}

inline void write_sweep_config(const SweepSpec& spec, std::ostream& out) {
    for (const auto& [key, value] : to_key_values(spec)) out << key << '=' << value << '\n';
}

inline SweepSpec read_sweep_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const std::size_t sep = line.find('=');
        if (sep == std::string::npos)
            throw ConfigError("sweep config: expected key=value, got '" + line + "'");
        kv[line.substr(0, sep)] = line.substr(sep + 1);
    }
    return sweep_spec_from_key_values(kv);
}

}  // namespace divcap
