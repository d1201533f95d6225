#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "divcap/channel.hpp"
#include "divcap/numerics.hpp"

namespace divcap {

struct UnsupportedExactCdf : std::domain_error {
    UnsupportedExactCdf()
        : std::domain_error("unsupported-exact-cdf: the optimal-beamforming MIMO combiner SNR "
                            "has no known closed-form CDF; use the MIMO bounds") {}
};

struct GaRegimeError : std::domain_error {
    GaRegimeError(double order, double qinv_squared)
        : std::domain_error("ga-invalid-regime: diversity order " + std::to_string(order) +
                            " is below [Qinv(eps)]^2 = " + std::to_string(qinv_squared)) {}
};

// --- MRC machinery at a real-valued diversity order ------------------------
// The combined SNR of maximal ratio combining over `order` i.i.d. Rayleigh
// branches is gamma-distributed with shape `order` and scale branch_snr
// (chi-square with 2*order degrees of freedom). Real-valued orders back the
// MIMO asymptotic benchmark.

inline double mrc_cdf(double order, double branch_snr, double snr) {
    return regularized_lower_gamma(order, snr / branch_snr);
}

inline SnrQuantile mrc_quantile(double order, double branch_snr, double outage_prob,
                                const RootSolveSettings& settings = {},
                                SnrQuantile::Method tag = SnrQuantile::Method::numeric_inversion) {
    // Bracket from the distribution mean; quantiles below 0.5 sit under it.
    const RootResult r = invert_monotone_cdf(
        [order](double u) { return regularized_lower_gamma(order, u); }, outage_prob, order,
        settings);
    return {branch_snr * r.x, tag, r.residual, r.iterations};
}

// --- Selection machinery ----------------------------------------------------
// Best of `order` i.i.d. exponential branches: F(x) = (1 - e^{-x/gbar})^order.

inline double selection_cdf(double order, double branch_snr, double snr) {
    if (snr == 0.0) return 0.0;
    return std::exp(order * std::log1p(-std::exp(-snr / branch_snr)));
}

inline SnrQuantile selection_quantile(double order, double branch_snr, double outage_prob) {
    // 1 - eps^(1/d) through expm1 so large orders keep full precision
    const double complement = -std::expm1(std::log(outage_prob) / order);
    const double gamma0 = branch_snr * -std::log(complement);
    const double residual = std::abs(selection_cdf(order, branch_snr, gamma0) - outage_prob);
    return {gamma0, SnrQuantile::Method::closed_form, residual, 0};
}

// --- Scheme-level interface -------------------------------------------------

/// CDF of the combiner SNR at `snr` (linear scale).
inline double combiner_cdf(const ChannelConfig& cfg, double snr) {
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("combiner_cdf: SNR must be finite and >= 0");
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt:
            return mrc_cdf(static_cast<double>(diversity_order(cfg)), cfg.branch_snr, snr);
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc:
            return selection_cdf(static_cast<double>(diversity_order(cfg)), cfg.branch_snr, snr);
        case DiversityScheme::mimo_optimal: break;
    }
    throw UnsupportedExactCdf{};
}

/// SNR outage threshold gamma0 = F^{-1}(outage_prob).
inline SnrQuantile combiner_quantile(const ChannelConfig& cfg, double outage_prob,
                                     const RootSolveSettings& settings = {}) {
    if (!(outage_prob > 0.0) || !(outage_prob < 1.0))
        throw std::invalid_argument("combiner_quantile: outage probability must be in (0,1)");
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt:
            return mrc_quantile(static_cast<double>(diversity_order(cfg)), cfg.branch_snr,
                                outage_prob, settings);
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc:
            return selection_quantile(static_cast<double>(diversity_order(cfg)), cfg.branch_snr,
                                      outage_prob);
        case DiversityScheme::mimo_optimal: break;
    }
    throw UnsupportedExactCdf{};
}

struct SnrInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool is_point() const { return lower == upper; }
};

/// Mean combiner SNR. A point for the SIMO/MISO-style schemes; for optimal
/// MIMO beamforming only the interval [rho*max(M,N), rho*M*N] is known.
inline SnrInterval mean_combiner_snr(const ChannelConfig& cfg) {
    const double gbar = cfg.branch_snr;
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt:
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc: {
            const std::uint64_t d = diversity_order(cfg);
            const double mean = (cfg.scheme == DiversityScheme::mrc ||
                                 cfg.scheme == DiversityScheme::mrt)
                                    ? gbar * static_cast<double>(d)
                                    : gbar * harmonic_number(d);
            return {mean, mean};
        }
        case DiversityScheme::mimo_optimal: {
            const double m = cfg.rx_antennas;
            const double n = cfg.tx_antennas;
            return {gbar * std::max(m, n), gbar * m * n};
        }
    }
    throw ConfigError("mean_combiner_snr: unknown scheme");
}

inline double mean_combiner_snr_value(const ChannelConfig& cfg) {
    const SnrInterval interval = mean_combiner_snr(cfg);
    if (!interval.is_point())
        throw ConfigError("mean_combiner_snr_value: only an interval is known for this scheme");
    return interval.lower;
}

/// Gaussian-approximation threshold gamma0 = gbar*(d - sqrt(d)*Qinv(eps)),
/// valid for maximal-ratio schemes with d >= [Qinv(eps)]^2. Outside that
/// regime the call fails instead of clamping; the residual field records the
/// true CDF misfit of the approximate threshold.
inline SnrQuantile ga_quantile(const ChannelConfig& cfg, double outage_prob) {
    if (cfg.scheme != DiversityScheme::mrc && cfg.scheme != DiversityScheme::mrt)
        throw ConfigError("ga_quantile: the Gaussian approximation applies to mrc/mrt only");
    if (!(outage_prob > 0.0) || !(outage_prob < 1.0))
        throw std::invalid_argument("ga_quantile: outage probability must be in (0,1)");
    const double d = static_cast<double>(diversity_order(cfg));
    const double q = q_inverse(outage_prob);
    if (d < q * q) throw GaRegimeError(d, q * q);
    double gamma0 = cfg.branch_snr * (d - std::sqrt(d) * q);
    if (gamma0 < 0.0) gamma0 = 0.0;  // rounding guard at the regime boundary
    const double residual = std::abs(mrc_cdf(d, cfg.branch_snr, gamma0) - outage_prob);
    return {gamma0, SnrQuantile::Method::gaussian_approx, residual, 0};
}

/// Build a config whose *mean combiner* SNR equals combiner_snr, back-solving
/// the per-branch SNR (gbar = gc/d for maximal ratio, gc/H_d for selection).
inline ChannelConfig config_with_combiner_snr(DiversityScheme scheme, std::uint32_t rx,
                                              std::uint32_t tx, double combiner_snr,
                                              std::uint32_t max_antennas = kDefaultMaxAntennas) {
    if (!(combiner_snr > 0.0) || !std::isfinite(combiner_snr))
        throw ConfigError("config_with_combiner_snr: combiner SNR must be finite and positive");
    const ChannelConfig probe = ChannelConfig::make(scheme, rx, tx, 1.0, max_antennas);
    double gbar = 0.0;
    switch (scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt:
            gbar = combiner_snr / static_cast<double>(diversity_order(probe));
            break;
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc:
            gbar = combiner_snr / harmonic_number(diversity_order(probe));
            break;
        case DiversityScheme::mimo_optimal:
            throw ConfigError(
                "config_with_combiner_snr: the optimal-MIMO mean combiner SNR is not a point");
    }
    return ChannelConfig::make(scheme, rx, tx, gbar, max_antennas);
}

}  // namespace divcap
