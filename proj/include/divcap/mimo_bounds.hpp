#pragma once

#include <optional>

#include "divcap/outage.hpp"

namespace divcap {

namespace detail {
inline void require_mimo(const ChannelConfig& cfg, const char* what) {
    if (cfg.scheme != DiversityScheme::mimo_optimal)
        throw ConfigError(std::string(what) + ": requires the mimo-opt scheme");
}
}  // namespace detail

/// Per-branch and mean combiner-SNR bounds for optimal beamforming. The
/// squared top singular value is sandwiched between the average and the sum of
/// all squared singular values, i.e. between scaled versions of the squared
/// Frobenius norm, which is chi-square with 2*M*N degrees of freedom.
struct MimoSnrBounds {
    double per_branch_lower = 0.0;  ///< rho / min(M,N)
    double per_branch_upper = 0.0;  ///< rho
    double mean_lower = 0.0;        ///< rho * max(M,N)
    double mean_upper = 0.0;        ///< rho * M * N
};

inline MimoSnrBounds snr_bounds(const ChannelConfig& cfg) {
    detail::require_mimo(cfg, "snr_bounds");
    const double rho = cfg.branch_snr;
    const double m = cfg.rx_antennas;
    const double n = cfg.tx_antennas;
    return {rho / std::min(m, n), rho, rho * std::max(m, n), rho * m * n};
}

struct MimoBoundReport {
    MimoSnrBounds snr;
    double capacity_lower = 0.0;
    double capacity_upper = 0.0;
    SnrQuantile quantile_lower;
    SnrQuantile quantile_upper;
    std::optional<double> asymptotic_benchmark;
};

/// Outage-capacity bounds: the MIMO full-diversity channel is sandwiched by
/// MRC over M*N branches at per-branch SNR rho (upper) and rho/min(M,N)
/// (lower). Both bound CDFs share the shape, so one inversion serves both.
inline MimoBoundReport outage_capacity_bounds(const ChannelConfig& cfg, double outage_prob,
                                              const RootSolveSettings& settings = {}) {
    detail::require_mimo(cfg, "outage_capacity_bounds");
    if (!(outage_prob > 0.0) || !(outage_prob < 1.0))
        throw std::invalid_argument("outage_capacity_bounds: outage probability must be in (0,1)");
    const MimoSnrBounds bounds = snr_bounds(cfg);
    const double order = static_cast<double>(cfg.rx_antennas) * cfg.tx_antennas;
    const RootResult unit = invert_monotone_cdf(
        [order](double u) { return regularized_lower_gamma(order, u); }, outage_prob, order,
        settings);

    MimoBoundReport rep;
    rep.snr = bounds;
    rep.quantile_upper = {bounds.per_branch_upper * unit.x, SnrQuantile::Method::bound_upper,
                          unit.residual, unit.iterations};
    rep.quantile_lower = {bounds.per_branch_lower * unit.x, SnrQuantile::Method::bound_lower,
                          unit.residual, unit.iterations};
    rep.capacity_upper = awgn_capacity(rep.quantile_upper.gamma0);
    rep.capacity_lower = awgn_capacity(rep.quantile_lower.gamma0);
    return rep;
}

/// Which constant to use in the large-matrix edge of the squared top singular
/// value, sigma_max^2 ~ c*(1+sqrt(M/N))^2*N: c=2 as printed in the asymptotic
/// result the bounds build on, c=1 for the standard Marchenko-Pastur edge
/// under unit-variance entries. The Monte Carlo validation reports both.
enum class EdgeConstant { paper, marchenko_pastur };

inline const char* to_string(EdgeConstant e) {
    return e == EdgeConstant::paper ? "paper" : "marchenko-pastur";
}

inline double effective_diversity_order(const ChannelConfig& cfg, EdgeConstant edge) {
    detail::require_mimo(cfg, "effective_diversity_order");
    const double aspect = static_cast<double>(cfg.rx_antennas) / cfg.tx_antennas;
    const double c = edge == EdgeConstant::paper ? 2.0 : 1.0;
    const double root = 1.0 + std::sqrt(aspect);
    return c * root * root * static_cast<double>(cfg.tx_antennas);
}

inline constexpr std::uint32_t kAsymptoticAntennaFloor = 16;

/// Doubly-massive benchmark: outage capacity of MRC with the edge-equivalent
/// diversity order at per-link SNR rho. The order is generally non-integer and
/// is used as the real-valued gamma shape; round_up_order forces the ceiling.
inline double asymptotic_benchmark(const ChannelConfig& cfg, double outage_prob,
                                   EdgeConstant edge = EdgeConstant::paper,
                                   bool round_up_order = false,
                                   std::uint32_t antenna_floor = kAsymptoticAntennaFloor,
                                   const RootSolveSettings& settings = {}) {
    detail::require_mimo(cfg, "asymptotic_benchmark");
    if (cfg.rx_antennas < antenna_floor || cfg.tx_antennas < antenna_floor)
        throw ConfigError("asymptotic_benchmark: antenna counts below the asymptotic floor of " +
                          std::to_string(antenna_floor));
    double order = effective_diversity_order(cfg, edge);
    if (round_up_order) order = std::ceil(order);
    const SnrQuantile q = mrc_quantile(order, cfg.branch_snr, outage_prob, settings);
    return awgn_capacity(q.gamma0);
}

/// Mean squared Frobenius norm of the M x N channel matrix under unit-variance
/// entries: M*N.
inline double frobenius_mean(const ChannelConfig& cfg) {
    detail::require_mimo(cfg, "frobenius_mean");
    return static_cast<double>(cfg.rx_antennas) * cfg.tx_antennas;
}

}  // namespace divcap
