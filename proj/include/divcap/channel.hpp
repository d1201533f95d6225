#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace divcap {

/// Linear processing schemes whose combiner SNR distribution is modeled.
///
/// mrc/sc operate on the receive side (single transmit antenna), mrt/st on the
/// transmit side (single receive antenna). stc selects the best transmit/receive
/// antenna pair. mimo_optimal is transmit beamforming plus receive combining
/// along the principal singular vectors of the channel matrix.
enum class DiversityScheme { mrc, sc, mrt, st, mimo_optimal, stc };

inline const char* to_string(DiversityScheme scheme) {
    switch (scheme) {
        case DiversityScheme::mrc: return "mrc";
        case DiversityScheme::sc: return "sc";
        case DiversityScheme::mrt: return "mrt";
        case DiversityScheme::st: return "st";
        case DiversityScheme::mimo_optimal: return "mimo-opt";
        case DiversityScheme::stc: return "stc";
    }
    return "?";
}

inline std::optional<DiversityScheme> scheme_from_string(std::string_view name) {
    if (name == "mrc") return DiversityScheme::mrc;
    if (name == "sc") return DiversityScheme::sc;
    if (name == "mrt") return DiversityScheme::mrt;
    if (name == "st") return DiversityScheme::st;
    if (name == "stc") return DiversityScheme::stc;
    if (name == "mimo-opt" || name == "mimo_optimal") return DiversityScheme::mimo_optimal;
    return std::nullopt;
}

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint32_t kDefaultMaxAntennas = 1'000'000;

/// Scheme, antenna counts and the average per-branch (per-link for MIMO) SNR
/// on linear scale. The single input record for every analytic query.
struct ChannelConfig {
    DiversityScheme scheme = DiversityScheme::mrc;
    std::uint32_t rx_antennas = 1;
    std::uint32_t tx_antennas = 1;
    double branch_snr = 1.0;

    static ChannelConfig make(DiversityScheme scheme, std::uint32_t rx, std::uint32_t tx,
                              double branch_snr,
                              std::uint32_t max_antennas = kDefaultMaxAntennas) {
        if (rx < 1 || tx < 1) throw ConfigError("ChannelConfig: antenna counts must be >= 1");
        if (rx > max_antennas || tx > max_antennas)
            throw ConfigError("ChannelConfig: antenna count exceeds configured maximum");
        if (!(branch_snr > 0.0) || !std::isfinite(branch_snr))
            throw ConfigError("ChannelConfig: branch SNR must be finite and positive");
        switch (scheme) {
            case DiversityScheme::mrc:
            case DiversityScheme::sc:
                if (tx != 1)
                    throw ConfigError("ChannelConfig: receive diversity requires one tx antenna");
                break;
            case DiversityScheme::mrt:
            case DiversityScheme::st:
                if (rx != 1)
                    throw ConfigError("ChannelConfig: transmit diversity requires one rx antenna");
                break;
            default:
                break;
        }
        return {scheme, rx, tx, branch_snr};
    }
};

/// Number of independently faded branches the scheme combines over.
inline std::uint64_t diversity_order(const ChannelConfig& cfg) {
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::sc: return cfg.rx_antennas;
        case DiversityScheme::mrt:
        case DiversityScheme::st: return cfg.tx_antennas;
        case DiversityScheme::stc:
            return static_cast<std::uint64_t>(cfg.rx_antennas) * cfg.tx_antennas;
        case DiversityScheme::mimo_optimal: break;
    }
    throw ConfigError("diversity_order: optimal MIMO beamforming has no branch count");
}

/// An SNR outage threshold with the method that produced it.
struct SnrQuantile {
    enum class Method { closed_form, numeric_inversion, gaussian_approx, bound_lower, bound_upper };

    double gamma0 = 0.0;   ///< linear-scale SNR threshold
    Method method = Method::closed_form;
    double residual = 0.0; ///< |F(gamma0) - eps| against the scheme CDF
    int iterations = 0;
};

inline const char* to_string(SnrQuantile::Method m) {
    switch (m) {
        case SnrQuantile::Method::closed_form: return "closed_form";
        case SnrQuantile::Method::numeric_inversion: return "numeric_inversion";
        case SnrQuantile::Method::gaussian_approx: return "gaussian_approx";
        case SnrQuantile::Method::bound_lower: return "bound_lower";
        case SnrQuantile::Method::bound_upper: return "bound_upper";
    }
    return "?";
}

}  // namespace divcap
