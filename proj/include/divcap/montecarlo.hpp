#pragma once

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <future>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "divcap/outage.hpp"
#include "divcap/snr_models.hpp"

namespace divcap {

/// Sampling budget and reproducibility knobs.
///
/// Results are deterministic for a fixed (seed, chunks) pair: every chunk owns
/// a fixed slice of the sample vector and its own seed-derived substream, so
/// the output does not depend on thread scheduling. Different chunk counts
/// yield different (equally valid) streams.
struct McSettings {
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 42;
    std::uint32_t chunks = 1;
    double power_iter_tol = 1e-10;
    int power_iter_max = 500;

    void validate() const {
        if (samples < 100) throw ConfigError("McSettings: need at least 100 samples");
        if (chunks < 1) throw ConfigError("McSettings: chunks must be >= 1");
        if (chunks > samples) throw ConfigError("McSettings: chunks must not exceed samples");
        if (!(power_iter_tol > 0.0) || !std::isfinite(power_iter_tol))
            throw ConfigError("McSettings: power_iter_tol must be finite and > 0");
        if (power_iter_max < 1) throw ConfigError("McSettings: power_iter_max must be >= 1");
    }
};

// splitmix64 (Vigna): full-period 64-bit generator, trivially seedable per
// substream, used both as the stream generator and as the seed mixer.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0, 1)

private:
    std::uint64_t state_;
};

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Marsaglia polar transform: two independent standard normals per call.
inline void standard_normal_pair(SplitMix64& rng, double& first, double& second) {
    double u, v, s;
    do {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    first = u * scale;
    second = v * scale;
}

// |h|^2 of one unit-variance circularly-symmetric complex gain (E|h|^2 = 1,
// i.e. variance 1/2 per real and imaginary part).
inline double rayleigh_branch_power(SplitMix64& rng) {
    double re, im;
    standard_normal_pair(rng, re, im);
    return 0.5 * (re * re + im * im);
}

namespace detail {
struct PowerIterWorkspace {
    std::vector<std::complex<double>> gram;
    std::vector<std::complex<double>> vec;
    std::vector<std::complex<double>> image;
};
}  // namespace detail

/// Largest squared singular value of a row-major rows x cols complex matrix by
/// power iteration on the smaller Gram matrix with an all-ones start vector.
/// Convergence is declared when the Rayleigh quotient's relative change falls
/// below tol. Returns false on non-convergence.
inline bool largest_sv_squared(const std::complex<double>* mat, std::size_t rows, std::size_t cols,
                               double tol, int max_iter, double& out,
                               detail::PowerIterWorkspace& ws) {
    const bool tall = rows >= cols;
    const std::size_t k = tall ? cols : rows;
    ws.gram.assign(k * k, {0.0, 0.0});

    // Gram of the smaller side: H^H H (tall) or H H^H (wide); Hermitian PSD.
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            std::complex<double> acc{0.0, 0.0};
            if (tall) {
                for (std::size_t i = 0; i < rows; ++i)
                    acc += std::conj(mat[i * cols + a]) * mat[i * cols + b];
            } else {
                for (std::size_t j = 0; j < cols; ++j)
                    acc += mat[a * cols + j] * std::conj(mat[b * cols + j]);
            }
            ws.gram[a * k + b] = acc;
            ws.gram[b * k + a] = std::conj(acc);
        }
    }

    if (k == 1) {
        out = ws.gram[0].real();
        return true;
    }

    ws.vec.assign(k, {1.0 / std::sqrt(static_cast<double>(k)), 0.0});
    ws.image.assign(k, {0.0, 0.0});
    double lambda_prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double norm_sq = 0.0;
        double lambda = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t b = 0; b < k; ++b) acc += ws.gram[a * k + b] * ws.vec[b];
            ws.image[a] = acc;
            lambda += (std::conj(ws.vec[a]) * acc).real();
            norm_sq += std::norm(acc);
        }
        if (norm_sq == 0.0) {  // zero matrix
            out = 0.0;
            return true;
        }
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (std::size_t a = 0; a < k; ++a) ws.vec[a] = ws.image[a] * inv_norm;
        if (it > 0 && std::abs(lambda - lambda_prev) <=
                          tol * std::max(std::abs(lambda), 1e-300)) {
            out = lambda;
            return true;
        }
        lambda_prev = lambda;
    }
    return false;
}

inline double largest_sv_squared(const std::vector<std::complex<double>>& mat, std::size_t rows,
                                 std::size_t cols, double tol = 1e-12, int max_iter = 500) {
    detail::PowerIterWorkspace ws;
    double out = 0.0;
    if (!largest_sv_squared(mat.data(), rows, cols, tol, max_iter, out, ws))
        throw SolverError("largest_sv_squared: power iteration did not converge");
    return out;
}

struct McSampleInfo {
    std::uint64_t resampled = 0;  ///< channel draws redrawn after power-iteration failure
};

namespace detail {

inline void sample_chunk(const ChannelConfig& cfg, const McSettings& settings,
                         std::uint64_t chunk_index, std::span<double> out,
                         std::uint64_t& resampled) {
    SplitMix64 rng(substream_seed(settings.seed, chunk_index));
    const double gbar = cfg.branch_snr;
    switch (cfg.scheme) {
        case DiversityScheme::mrc:
        case DiversityScheme::mrt: {
            const std::uint64_t d = diversity_order(cfg);
            for (double& slot : out) {
                double acc = 0.0;
                for (std::uint64_t l = 0; l < d; ++l) acc += rayleigh_branch_power(rng);
                slot = gbar * acc;
            }
            break;
        }
        case DiversityScheme::sc:
        case DiversityScheme::st:
        case DiversityScheme::stc: {
            const std::uint64_t d = diversity_order(cfg);
            for (double& slot : out) {
                double best = 0.0;
                for (std::uint64_t l = 0; l < d; ++l)
                    best = std::max(best, rayleigh_branch_power(rng));
                slot = gbar * best;
            }
            break;
        }
        case DiversityScheme::mimo_optimal: {
            const std::size_t rows = cfg.rx_antennas;
            const std::size_t cols = cfg.tx_antennas;
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            std::vector<std::complex<double>> mat(rows * cols);
            PowerIterWorkspace ws;
            for (double& slot : out) {
                double lambda = 0.0;
                for (int attempt = 0;; ++attempt) {
                    for (auto& entry : mat) {
                        double re, im;
                        standard_normal_pair(rng, re, im);
                        entry = {re * inv_sqrt2, im * inv_sqrt2};
                    }
                    if (largest_sv_squared(mat.data(), rows, cols, settings.power_iter_tol,
                                           settings.power_iter_max, lambda, ws))
                        break;
                    ++resampled;
                    if (attempt >= 8)
                        throw SolverError("sample_combiner_snr: power iteration kept failing");
                }
                slot = gbar * lambda;
            }
            break;
        }
    }
}

inline unsigned mc_thread_limit() {
    if (const char* env = std::getenv("DIVCAP_MC_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) return static_cast<unsigned>(parsed);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

}  // namespace detail

/// Draw combiner-SNR samples from first principles: i.i.d. unit-variance
/// complex Gaussian gains, combined per scheme (sum, max, or top squared
/// singular value scaled by the link SNR).
inline std::vector<double> sample_combiner_snr(const ChannelConfig& cfg,
                                               const McSettings& settings,
                                               McSampleInfo* info = nullptr) {
    settings.validate();
    if (cfg.scheme != DiversityScheme::mimo_optimal) (void)diversity_order(cfg);

    std::vector<double> samples(settings.samples);
    const std::uint32_t chunks = settings.chunks;
    std::vector<std::uint64_t> offsets(chunks + 1, 0);
    const std::uint64_t base = settings.samples / chunks;
    const std::uint64_t rem = settings.samples % chunks;
    for (std::uint32_t c = 0; c < chunks; ++c)
        offsets[c + 1] = offsets[c] + base + (c < rem ? 1 : 0);

    std::vector<std::uint64_t> redraws(chunks, 0);
    auto run_chunk = [&](std::uint32_t c) {
        detail::sample_chunk(cfg, settings, c,
                             std::span<double>(samples.data() + offsets[c],
                                               offsets[c + 1] - offsets[c]),
                             redraws[c]);
    };

    const unsigned limit = std::min<unsigned>(detail::mc_thread_limit(), chunks);
    if (limit <= 1) {
        for (std::uint32_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        for (std::uint32_t wave = 0; wave < chunks; wave += limit) {
            std::vector<std::future<void>> inflight;
            const std::uint32_t end = std::min<std::uint32_t>(wave + limit, chunks);
            for (std::uint32_t c = wave; c < end; ++c)
                inflight.push_back(std::async(std::launch::async, run_chunk, c));
            for (auto& f : inflight) f.get();
        }
    }

    if (info) {
        info->resampled = 0;
        for (const std::uint64_t r : redraws) info->resampled += r;
    }
    return samples;
}

/// Empirical quantile/mean/CDF summary with order-statistic uncertainty.
struct McEstimate {
    double quantile_gamma0 = 0.0;
    double quantile_ci_halfwidth = 0.0;
    double quantile_ci_lower = 0.0;
    double quantile_ci_upper = 0.0;
    bool ci_reliable = true;  ///< samples >= ceil(10/eps)
    double sample_mean = 0.0;
    double sample_mean_stderr = 0.0;
    std::optional<double> ks_statistic;
    std::uint64_t samples_used = 0;
    std::uint64_t seed = 0;
    std::uint64_t resampled = 0;
};

namespace detail {

inline McEstimate quantile_from_sorted(const std::vector<double>& sorted, double eps,
                                       std::uint64_t seed) {
    const std::uint64_t n = sorted.size();
    McEstimate est;
    est.samples_used = n;
    est.seed = seed;

    // Nearest-rank quantile; 95% CI from the binomial distribution of the
    // number of samples below the true quantile (normal approximation).
    const double nd = static_cast<double>(n);
    auto clamp_rank = [n](double r) {
        if (r < 1.0) return std::uint64_t{1};
        if (r > static_cast<double>(n)) return n;
        return static_cast<std::uint64_t>(r);
    };
    const std::uint64_t rank = clamp_rank(std::ceil(eps * nd));
    est.quantile_gamma0 = sorted[rank - 1];

    constexpr double z95 = 1.959963985;
    const double spread = z95 * std::sqrt(nd * eps * (1.0 - eps));
    const std::uint64_t lo_rank = clamp_rank(std::floor(eps * nd - spread));
    const std::uint64_t hi_rank = clamp_rank(std::ceil(eps * nd + spread));
    est.quantile_ci_lower = sorted[lo_rank - 1];
    est.quantile_ci_upper = sorted[hi_rank - 1];
    est.quantile_ci_halfwidth = 0.5 * (est.quantile_ci_upper - est.quantile_ci_lower);
    est.ci_reliable = nd >= std::ceil(10.0 / eps);

    double sum = 0.0, comp = 0.0;
    for (const double x : sorted) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    est.sample_mean = sum / nd;
    if (n > 1) {
        double sq = 0.0;
        for (const double x : sorted) {
            const double diff = x - est.sample_mean;
            sq += diff * diff;
        }
        est.sample_mean_stderr = std::sqrt(sq / (nd - 1.0) / nd);
    }
    return est;
}

template <std::invocable<double> F>
double ks_from_sorted(const std::vector<double>& sorted, F&& cdf) {
    const double n = static_cast<double>(sorted.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        dist = std::max(dist, f - static_cast<double>(i) / n);
        dist = std::max(dist, static_cast<double>(i + 1) / n - f);
    }
    return dist;
}

}  // namespace detail

inline McEstimate empirical_quantile(std::span<const double> samples, double eps,
                                     std::uint64_t seed = 0) {
    if (samples.empty()) throw std::invalid_argument("empirical_quantile: empty sample set");
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("empirical_quantile: eps must be in (0,1)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return detail::quantile_from_sorted(sorted, eps, seed);
}

/// Sup-norm distance between the empirical CDF of the samples and a reference CDF.
template <std::invocable<double> F>
double ks_distance(std::span<const double> samples, F&& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample set");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return detail::ks_from_sorted(sorted, cdf);
}

/// One-stop empirical summary: quantile + CI, mean + stderr, and the KS
/// distance against the analytic CDF when the scheme has one.
inline McEstimate mc_estimate(const ChannelConfig& cfg, double eps, const McSettings& settings) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("mc_estimate: eps must be in (0,1)");
    McSampleInfo info;
    std::vector<double> samples = sample_combiner_snr(cfg, settings, &info);
    std::sort(samples.begin(), samples.end());
    McEstimate est = detail::quantile_from_sorted(samples, eps, settings.seed);
    est.resampled = info.resampled;
    if (cfg.scheme != DiversityScheme::mimo_optimal)
        est.ks_statistic =
            detail::ks_from_sorted(samples, [&](double x) { return combiner_cdf(cfg, x); });
    return est;
}

struct McCapacity {
    double capacity = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    bool ci_reliable = true;
    McEstimate snr;
};

/// Empirical outage capacity log2(1 + empirical gamma0); the CI endpoints ride
/// through the same monotone map.
inline McCapacity mc_outage_capacity(const ChannelConfig& cfg, double eps,
                                     const McSettings& settings) {
    const McEstimate est = mc_estimate(cfg, eps, settings);
    McCapacity cap;
    cap.capacity = awgn_capacity(est.quantile_gamma0);
    cap.ci_lower = awgn_capacity(est.quantile_ci_lower);
    cap.ci_upper = awgn_capacity(est.quantile_ci_upper);
    cap.ci_reliable = est.ci_reliable;
    cap.snr = est;
    return cap;
}

}  // namespace divcap
