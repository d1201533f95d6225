// divcap — outage capacity of Rayleigh diversity channels.
//
// Subcommands: quantile, capacity, sweep, mimo-bounds, mc, validate.
// SNR is given in dB on the command line and converted to linear scale here;
// the library works in linear scale throughout.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <divcap/divcap.hpp>

namespace {

using namespace divcap;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

using Rows = std::vector<std::pair<std::string, std::string>>;

void print_rows(const Rows& rows, bool csv) {
    if (csv) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::cout << rows[i].first << (i + 1 < rows.size() ? "," : "\n");
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::cout << rows[i].second << (i + 1 < rows.size() ? "," : "\n");
        return;
    }
    std::size_t width = 0;
    for (const auto& [key, value] : rows) width = std::max(width, key.size());
    for (const auto& [key, value] : rows)
        std::cout << key << std::string(width - key.size() + 2, ' ') << value << '\n';
}

struct SnrInput {
    double branch_db = 0.0, combiner_db = 0.0, link_db = 0.0;
    bool has_branch = false, has_combiner = false, has_link = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--branch-snr-db", branch_db,
                        "average per-branch SNR in dB (fixes the branch reference)")
            ->check(CLI::Number);
        cmd->add_option("--combiner-snr-db", combiner_db,
                        "mean combiner SNR in dB (back-solves the per-branch SNR)")
            ->check(CLI::Number);
        cmd->add_option("--link-snr-db", link_db, "per-link SNR in dB (mimo-opt)")
            ->check(CLI::Number);
        cmd->callback([this, cmd] {
            has_branch = cmd->count("--branch-snr-db") > 0;
            has_combiner = cmd->count("--combiner-snr-db") > 0;
            has_link = cmd->count("--link-snr-db") > 0;
        });
    }

    SnrReference reference() const {
        const int given = int(has_branch) + int(has_combiner) + int(has_link);
        if (given != 1)
            throw ConfigError("give exactly one of --branch-snr-db, --combiner-snr-db, "
                              "--link-snr-db");
        if (has_combiner) return SnrReference::combiner;
        return has_link ? SnrReference::link : SnrReference::branch;
    }

    double value_db() const {
        if (has_branch) return branch_db;
        if (has_combiner) return combiner_db;
        return link_db;
    }
};

DiversityScheme parse_scheme(const std::string& name) {
    const auto scheme = scheme_from_string(name);
    if (!scheme) throw ConfigError("unknown scheme '" + name + "'");
    return *scheme;
}

ChannelConfig build_config(const std::string& scheme_name, std::uint32_t m, std::uint32_t n,
                           const SnrInput& snr) {
    const DiversityScheme scheme = parse_scheme(scheme_name);
    const SnrReference ref = snr.reference();
    const bool mimo = scheme == DiversityScheme::mimo_optimal;
    if (mimo && ref != SnrReference::link)
        throw ConfigError("mimo-opt takes --link-snr-db");
    if (!mimo && ref == SnrReference::link)
        throw ConfigError("--link-snr-db applies to mimo-opt only");
    const double linear = db_to_linear(snr.value_db());
    if (ref == SnrReference::combiner) return config_with_combiner_snr(scheme, m, n, linear);
    return ChannelConfig::make(scheme, m, n, linear);
}

void append_quantile(Rows& rows, const SnrQuantile& q) {
    rows.emplace_back("gamma0_linear", format_sig(q.gamma0));
    rows.emplace_back("gamma0_db",
                      q.gamma0 > 0.0 ? format_sig(linear_to_db(q.gamma0)) : "-inf");
    rows.emplace_back("method", to_string(q.method));
    rows.emplace_back("residual", format_sig(q.residual));
    rows.emplace_back("iterations", std::to_string(q.iterations));
}

int run_cli(int argc, char** argv) {
    CLI::App app{"outage capacity of SIMO/MISO/MIMO diversity channels under "
                 "i.i.d. Rayleigh fading"};
    app.require_subcommand(1);

    std::string scheme = "mrc";
    std::uint32_t m = 1, n = 1;
    double eps = 0.1;
    std::string format = "kv";
    std::string method = "exact";

    auto add_common = [&](CLI::App* cmd, bool with_method) {
        cmd->add_option("--scheme", scheme, "mrc|sc|mrt|st|stc|mimo-opt")->required();
        cmd->add_option("--m", m, "receive antennas");
        cmd->add_option("--n", n, "transmit antennas");
        cmd->add_option("--eps", eps, "target outage probability")->required();
        cmd->add_option("--format", format, "kv|csv")->check(CLI::IsMember({"kv", "csv"}));
        if (with_method)
            cmd->add_option("--method", method, "exact|ga")
                ->check(CLI::IsMember({"exact", "ga"}));
    };

    // --- quantile ---
    auto* quantile_cmd = app.add_subcommand("quantile", "SNR outage threshold gamma0");
    SnrInput quantile_snr;
    add_common(quantile_cmd, true);
    quantile_snr.attach(quantile_cmd);
    quantile_cmd->final_callback([&] {
        const ChannelConfig cfg = build_config(scheme, m, n, quantile_snr);
        const SnrQuantile q = method == "ga" ? ga_quantile(cfg, eps) : combiner_quantile(cfg, eps);
        Rows rows{{"scheme", to_string(cfg.scheme)},
                  {"m", std::to_string(cfg.rx_antennas)},
                  {"n", std::to_string(cfg.tx_antennas)},
                  {"eps", format_sig(eps)}};
        append_quantile(rows, q);
        print_rows(rows, format == "csv");
    });

    // --- capacity ---
    auto* capacity_cmd = app.add_subcommand("capacity", "outage capacity and benchmarks");
    SnrInput capacity_snr;
    std::string quantity = "all";
    add_common(capacity_cmd, true);
    capacity_snr.attach(capacity_cmd);
    capacity_cmd->add_option("--quantity", quantity,
                             "outage_capacity|gap_branch|gap_combiner|ratio_combiner|all")
        ->check(CLI::IsMember(
            {"outage_capacity", "gap_branch", "gap_combiner", "ratio_combiner", "all"}));
    capacity_cmd->final_callback([&] {
        const ChannelConfig cfg = build_config(scheme, m, n, capacity_snr);
        const QuantileChoice choice =
            method == "ga" ? QuantileChoice::gaussian_approx : QuantileChoice::exact;
        const CapacityReport rep = outage_report(cfg, eps, choice);
        Rows rows{{"scheme", to_string(cfg.scheme)},
                  {"m", std::to_string(cfg.rx_antennas)},
                  {"n", std::to_string(cfg.tx_antennas)},
                  {"eps", format_sig(eps)}};
        if (quantity == "all" || quantity == "outage_capacity")
            rows.emplace_back("outage_capacity", format_sig(rep.outage_capacity));
        if (quantity == "all") {
            rows.emplace_back("benchmark_branch", format_sig(rep.benchmark_branch));
            rows.emplace_back("benchmark_combiner", format_sig(rep.benchmark_combiner));
        }
        if (quantity == "all" || quantity == "gap_branch")
            rows.emplace_back("gap_branch", format_sig(rep.gap_vs_branch));
        if (quantity == "all" || quantity == "gap_combiner")
            rows.emplace_back("gap_combiner", format_sig(rep.gap_vs_combiner));
        if (quantity == "all" || quantity == "ratio_combiner")
            rows.emplace_back("ratio_combiner", format_sig(rep.ratio_vs_combiner));
        rows.emplace_back("method", to_string(rep.quantile.method));
        print_rows(rows, format == "csv");
    });

    // --- mimo-bounds ---
    auto* bounds_cmd = app.add_subcommand("mimo-bounds", "outage-capacity bounds for mimo-opt");
    SnrInput bounds_snr;
    bool with_asymptotic = false;
    bool ceil_shape = false;
    std::string edge_name = "paper";
    add_common(bounds_cmd, false);
    bounds_snr.attach(bounds_cmd);
    bounds_cmd->add_flag("--asymptotic", with_asymptotic,
                         "include the doubly-massive MRC-equivalent benchmark");
    bounds_cmd->add_flag("--ceil-shape", ceil_shape,
                         "round the effective diversity order up to an integer");
    bounds_cmd->add_option("--edge", edge_name, "paper|marchenko-pastur")
        ->check(CLI::IsMember({"paper", "marchenko-pastur"}));
    bounds_cmd->final_callback([&] {
        const ChannelConfig cfg = build_config(scheme, m, n, bounds_snr);
        MimoBoundReport rep = outage_capacity_bounds(cfg, eps);
        const EdgeConstant edge = edge_name == "marchenko-pastur"
                                      ? EdgeConstant::marchenko_pastur
                                      : EdgeConstant::paper;
        if (with_asymptotic)
            rep.asymptotic_benchmark = asymptotic_benchmark(cfg, eps, edge, ceil_shape);
        Rows rows{{"scheme", to_string(cfg.scheme)},
                  {"m", std::to_string(cfg.rx_antennas)},
                  {"n", std::to_string(cfg.tx_antennas)},
                  {"eps", format_sig(eps)},
                  {"link_snr_db", format_sig(linear_to_db(cfg.branch_snr))},
                  {"mean_combiner_snr_lower", format_sig(rep.snr.mean_lower)},
                  {"mean_combiner_snr_upper", format_sig(rep.snr.mean_upper)},
                  {"capacity_lower", format_sig(rep.capacity_lower)},
                  {"capacity_upper", format_sig(rep.capacity_upper)},
                  {"benchmark_capacity_lower", format_sig(awgn_capacity(rep.snr.mean_lower))},
                  {"benchmark_capacity_upper", format_sig(awgn_capacity(rep.snr.mean_upper))}};
        if (rep.asymptotic_benchmark) {
            rows.emplace_back("asymptotic_capacity", format_sig(*rep.asymptotic_benchmark));
            rows.emplace_back("edge_constant", edge_name);
        }
        print_rows(rows, format == "csv");
    });

    // --- mc ---
    auto* mc_cmd = app.add_subcommand("mc", "seeded Monte Carlo estimate");
    SnrInput mc_snr;
    McSettings mc_settings;
    add_common(mc_cmd, false);
    mc_snr.attach(mc_cmd);
    mc_cmd->add_option("--samples", mc_settings.samples, "sample count");
    mc_cmd->add_option("--seed", mc_settings.seed, "64-bit seed");
    mc_cmd->add_option("--chunks", mc_settings.chunks, "independent substreams");
    mc_cmd->add_option("--power-iter-tol", mc_settings.power_iter_tol,
                       "relative tolerance for the top-eigenvalue iteration");
    mc_cmd->add_option("--power-iter-max", mc_settings.power_iter_max,
                       "iteration cap for the top-eigenvalue iteration");
    mc_cmd->final_callback([&] {
        const ChannelConfig cfg = build_config(scheme, m, n, mc_snr);
        const McCapacity cap = mc_outage_capacity(cfg, eps, mc_settings);
        const McEstimate& est = cap.snr;
        Rows rows{{"scheme", to_string(cfg.scheme)},
                  {"m", std::to_string(cfg.rx_antennas)},
                  {"n", std::to_string(cfg.tx_antennas)},
                  {"eps", format_sig(eps)},
                  {"samples", std::to_string(est.samples_used)},
                  {"seed", std::to_string(est.seed)},
                  {"quantile_gamma0", format_sig(est.quantile_gamma0)},
                  {"quantile_ci_halfwidth", format_sig(est.quantile_ci_halfwidth)},
                  {"quantile_ci", "[" + format_sig(est.quantile_ci_lower) + "," +
                                      format_sig(est.quantile_ci_upper) + "]"},
                  {"ci_reliable", est.ci_reliable ? "yes" : "no"},
                  {"sample_mean", format_sig(est.sample_mean)},
                  {"sample_mean_stderr", format_sig(est.sample_mean_stderr)},
                  {"outage_capacity", format_sig(cap.capacity)},
                  {"capacity_ci", "[" + format_sig(cap.ci_lower) + "," +
                                      format_sig(cap.ci_upper) + "]"}};
        if (est.ks_statistic)
            rows.emplace_back("ks_statistic", format_sig(*est.ks_statistic));
        if (est.resampled) rows.emplace_back("resampled", std::to_string(est.resampled));
        print_rows(rows, format == "csv");
    });

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    SnrInput sweep_snr;
    std::string variable_name, grid_text, eps_text, outputs_text, spacing = "linear";
    std::string config_path, out_path = "-", dump_config_path;
    std::string sweep_edge = "paper";
    double grid_start = 0.0, grid_stop = 0.0;
    int grid_points = 0;
    sweep_cmd->add_option("--scheme", scheme, "mrc|sc|mrt|st|stc|mimo-opt");
    sweep_cmd->add_option("--m", m, "receive antennas (fixed side)");
    sweep_cmd->add_option("--n", n, "transmit antennas (fixed side)");
    sweep_cmd->add_option("--variable", variable_name, "m|n|snr_db");
    sweep_cmd->add_option("--grid", grid_text, "explicit comma-separated grid");
    sweep_cmd->add_option("--grid-start", grid_start, "generated grid start");
    sweep_cmd->add_option("--grid-stop", grid_stop, "generated grid stop");
    sweep_cmd->add_option("--grid-points", grid_points, "generated grid size");
    sweep_cmd->add_option("--grid-spacing", spacing, "linear|log")
        ->check(CLI::IsMember({"linear", "log"}));
    sweep_cmd->add_option("--eps", eps_text, "comma-separated outage probabilities");
    sweep_snr.attach(sweep_cmd);
    sweep_cmd->add_option("--outputs", outputs_text,
                          "comma list of outage_capacity,gap_branch,gap_combiner,"
                          "ratio_combiner,ga_variant,bounds,asymptotic");
    sweep_cmd->add_option("--edge", sweep_edge, "paper|marchenko-pastur")
        ->check(CLI::IsMember({"paper", "marchenko-pastur"}));
    sweep_cmd->add_option("--config", config_path, "key=value sweep config file");
    sweep_cmd->add_option("--write-config", dump_config_path,
                          "serialize the effective sweep spec and exit");
    sweep_cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    sweep_cmd->final_callback([&] {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line.front() == '#') continue;
                const std::size_t sep = line.find('=');
                if (sep == std::string::npos)
                    throw ConfigError("config: expected key=value, got '" + line + "'");
                kv[line.substr(0, sep)] = line.substr(sep + 1);
            }
        }
        // command-line flags win over config-file values
        if (sweep_cmd->count("--scheme")) kv["scheme"] = scheme;
        if (sweep_cmd->count("--m")) kv["m"] = std::to_string(m);
        if (sweep_cmd->count("--n")) kv["n"] = std::to_string(n);
        if (sweep_cmd->count("--variable")) kv["variable"] = variable_name;
        if (sweep_cmd->count("--grid")) kv["grid"] = grid_text;
        if (sweep_cmd->count("--eps")) kv["eps"] = eps_text;
        if (sweep_cmd->count("--outputs")) kv["outputs"] = outputs_text;
        if (sweep_cmd->count("--edge")) kv["edge-constant"] = sweep_edge;
        if (sweep_snr.has_branch || sweep_snr.has_combiner || sweep_snr.has_link) {
            kv["snr-reference"] = to_string(sweep_snr.reference());
            kv["snr-db"] = format_exact(sweep_snr.value_db());
        }
        if (sweep_cmd->count("--grid-points")) {
            const std::vector<double> grid =
                make_grid(grid_start, grid_stop, grid_points, spacing == "log");
            std::string joined;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (i) joined += ',';
                joined += format_exact(grid[i]);
            }
            kv["grid"] = joined;
        }
        kv.try_emplace("m", "1");
        kv.try_emplace("n", "1");
        kv.try_emplace("edge-constant", "paper");
        const SweepSpec spec = sweep_spec_from_key_values(kv);
        if (!dump_config_path.empty()) {
            std::ofstream out(dump_config_path);
            if (!out) throw ConfigError("cannot write config '" + dump_config_path + "'");
            write_sweep_config(spec, out);
            return;
        }
        std::size_t rows = 0;
        if (out_path == "-") {
            rows = run_sweep(spec, std::cout);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw ConfigError("cannot write '" + out_path + "'");
            rows = run_sweep(spec, out);
        }
        std::cerr << "rows written: " << rows << '\n';
    });

    // --- validate ---
    auto* validate_cmd = app.add_subcommand("validate", "run the cross-module oracle suite");
    ValidationOptions validation;
    std::string report_path = "-";
    validate_cmd->add_option("--samples", validation.mc.samples, "Monte Carlo sample count");
    validate_cmd->add_option("--seed", validation.mc.seed, "base seed");
    validate_cmd->add_option("--chunks", validation.mc.chunks, "substream count");
    validate_cmd->add_option("--report", report_path, "report path ('-' for stdout)");
    validate_cmd->add_flag("--deep", validation.deep,
                           "full grids (stated sweep/coverage budgets)");
    validate_cmd->add_flag("--inject-mismatch", validation.inject_mismatch,
                           "negative control: score MRC samples against the SC CDF")
        ->group("");  // test mode, hidden from --help
    validate_cmd->final_callback([&] {
        const ValidationSummary summary = run_validation(validation);
        if (report_path == "-") {
            write_validation_report(summary, std::cout);
        } else {
            std::ofstream out(report_path, std::ios::binary);
            if (!out) throw ConfigError("cannot write '" + report_path + "'");
            write_validation_report(summary, out);
        }
        std::cerr << summary.checks.size() << " checks, " << summary.failures() << " failures\n";
        if (!summary.all_passed()) throw ConfigError("validation failed");
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return err.what() == std::string("validation failed") ? 1 : 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
