#pragma once

#include <numbers>
#include <vector>

#include "divcap/snr_models.hpp"

namespace divcap {

/// Capacity per unit bandwidth of the bandlimited AWGN channel, b/s/Hz.
inline double awgn_capacity(double snr) {
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("awgn_capacity: SNR must be finite and >= 0");
    return std::log1p(snr) / std::numbers::ln2;
}

enum class QuantileChoice { exact, gaussian_approx };

/// Outage capacity alongside its AWGN benchmarks. The combiner benchmark
/// C(mean combiner SNR) excludes array/selection gain from the comparison;
/// the branch benchmark C(mean branch SNR) keeps it.
struct CapacityReport {
    double outage_capacity = 0.0;
    double benchmark_branch = 0.0;
    double benchmark_combiner = 0.0;
    double gap_vs_branch = 0.0;
    double gap_vs_combiner = 0.0;
    double ratio_vs_combiner = 0.0;
    SnrQuantile quantile;
};

inline SnrQuantile resolve_quantile(const ChannelConfig& cfg, double outage_prob,
                                    QuantileChoice choice, const RootSolveSettings& settings = {}) {
    return choice == QuantileChoice::gaussian_approx ? ga_quantile(cfg, outage_prob)
                                                     : combiner_quantile(cfg, outage_prob, settings);
}

inline CapacityReport outage_report(const ChannelConfig& cfg, double outage_prob,
                                    QuantileChoice choice = QuantileChoice::exact,
                                    const RootSolveSettings& settings = {}) {
    CapacityReport rep;
    rep.quantile = resolve_quantile(cfg, outage_prob, choice, settings);
    rep.outage_capacity = awgn_capacity(rep.quantile.gamma0);
    rep.benchmark_branch = awgn_capacity(cfg.branch_snr);
    rep.benchmark_combiner = awgn_capacity(mean_combiner_snr_value(cfg));
    rep.gap_vs_branch = rep.outage_capacity - rep.benchmark_branch;
    rep.gap_vs_combiner = rep.outage_capacity - rep.benchmark_combiner;
    rep.ratio_vs_combiner = rep.outage_capacity / rep.benchmark_combiner;
    return rep;
}

inline double gap_vs_branch_benchmark(const ChannelConfig& cfg, double outage_prob,
                                      QuantileChoice choice = QuantileChoice::exact) {
    return outage_report(cfg, outage_prob, choice).gap_vs_branch;
}

inline double gap_vs_combiner_benchmark(const ChannelConfig& cfg, double outage_prob,
                                        QuantileChoice choice = QuantileChoice::exact) {
    return outage_report(cfg, outage_prob, choice).gap_vs_combiner;
}

inline double ratio_vs_combiner_benchmark(const ChannelConfig& cfg, double outage_prob,
                                          QuantileChoice choice = QuantileChoice::exact) {
    const CapacityReport rep = outage_report(cfg, outage_prob, choice);
    if (!(rep.benchmark_combiner > 0.0))
        throw std::domain_error("ratio_vs_combiner_benchmark: zero benchmark capacity");
    return rep.ratio_vs_combiner;
}

/// Limit of the combiner-referenced gap as the mean combiner SNR grows: both
/// capacities grow as log2(SNR), so the gap settles at log2(threshold/mean).
inline double gap_vs_combiner_high_snr_limit(const ChannelConfig& cfg, double outage_prob,
                                             QuantileChoice choice = QuantileChoice::exact,
                                             const RootSolveSettings& settings = {}) {
    const SnrQuantile q = resolve_quantile(cfg, outage_prob, choice, settings);
    return std::log2(q.gamma0 / mean_combiner_snr_value(cfg));
}

enum class SnrRegime { high_snr, low_snr };

inline const char* to_string(SnrRegime r) {
    return r == SnrRegime::high_snr ? "high_snr" : "low_snr";
}

struct ConditionFlag {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool satisfied = false;
};

/// Closed-form large-order approximation of the combiner-referenced comparison.
/// High SNR yields a capacity gap in b/s/Hz, low SNR a capacity ratio.
struct ApproximationReport {
    SnrRegime regime = SnrRegime::high_snr;
    double value = 0.0;
    bool value_is_ratio = false;
    std::vector<ConditionFlag> validity;
};

// Machine-checkable reading of the ">> 1" / "<< 1" regime conditions.
inline constexpr double kHighSnrThreshold = 10.0;
inline constexpr double kLowSnrThreshold = 0.1;

inline ApproximationReport asymptotic_gap(const ChannelConfig& cfg, double outage_prob,
                                          SnrRegime regime) {
    if (!(outage_prob > 0.0) || !(outage_prob < 1.0))
        throw std::invalid_argument("asymptotic_gap: outage probability must be in (0,1)");
    const double d = static_cast<double>(diversity_order(cfg));  // rejects mimo_optimal
    const double mean = mean_combiner_snr_value(cfg);

    bool selection = false;
    double factor = 0.0;  // threshold-to-mean SNR ratio under the approximation
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt: {
            const double q = q_inverse(outage_prob);
            if (d < q * q) throw GaRegimeError(d, q * q);
            factor = 1.0 - q / std::sqrt(d);
            break;
        }
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc:
            selection = true;
            factor = -std::log(-std::expm1(std::log(outage_prob) / d)) /
                     harmonic_number(diversity_order(cfg));
            break;
        default:
            throw ConfigError("asymptotic_gap: no approximation for this scheme");
    }

    ApproximationReport rep;
    rep.regime = regime;
    if (regime == SnrRegime::high_snr) {
        if (selection && d < 2.0)
            throw ConfigError("asymptotic_gap: selection high-SNR form needs >= 2 branches");
        rep.value_is_ratio = false;
        rep.value = selection
                        ? -std::log(-std::log(outage_prob)) / (std::log(d) * std::numbers::ln2)
                        : (factor - 1.0) / std::numbers::ln2;
        rep.validity = {
            {"mean_combiner_snr_high", mean, kHighSnrThreshold, mean > kHighSnrThreshold},
            {"threshold_snr_high", mean * factor, kHighSnrThreshold,
             mean * factor > kHighSnrThreshold}};
    } else {
        rep.value_is_ratio = true;
        rep.value = factor;
        rep.validity = {
            {"mean_combiner_snr_low", mean, kLowSnrThreshold, mean < kLowSnrThreshold},
            {"threshold_snr_low", mean * factor, kLowSnrThreshold,
             mean * factor < kLowSnrThreshold}};
    }
    return rep;
}

}  // namespace divcap
