#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace divcap {

inline constexpr double kEulerMascheroni = 0.5772156649015328606;

/// Tolerances and iteration budget for the monotone-CDF root solver.
struct RootSolveSettings {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_iter = 200;

    void validate() const {
        if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
            throw std::invalid_argument("RootSolveSettings: rel_tol must be finite and > 0");
        if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol))
            throw std::invalid_argument("RootSolveSettings: abs_tol must be finite and >= 0");
        if (max_iter < 1)
            throw std::invalid_argument("RootSolveSettings: max_iter must be >= 1");
    }
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Lower series for P(a,x), converges for x < a + 1. Term ratio is x/(a+n),
// so roughly sqrt(a) terms are needed when x is near a.
inline double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (long i = 0; i < 20'000'000L; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * std::numeric_limits<double>::epsilon())
            return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
    }
    throw SolverError("regularized_lower_gamma: series did not converge");
}

// Q(a,x) = 1 - P(a,x) by modified Lentz continued fraction, for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
    constexpr double floor =
        std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    const double eps = std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - a;
    double c = 1.0 / floor;
    double d = 1.0 / b;
    double h = d;
    for (long i = 1; i < 20'000'000L; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < floor) d = floor;
        c = b + an / c;
        if (std::abs(c) < floor) c = floor;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) <= eps)
            return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
    }
    throw SolverError("regularized_lower_gamma: continued fraction did not converge");
}

// Finite Poisson-tail sum for small integer shapes, Kahan-compensated:
// P(k,x) = 1 - e^{-x} sum_{l=0}^{k-1} x^l / l!. The e^{-x} prefactor keeps
// every term bounded; for x large enough to underflow it the tail is 1.
inline double lower_gamma_integer_sum(int k, double x) {
    double term = std::exp(-x);
    double sum = term;
    double comp = 0.0;
    for (int l = 1; l < k; ++l) {
        term *= x / static_cast<double>(l);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum < 1.0 ? 1.0 - sum : 0.0;
}

// Rational approximation of the standard normal quantile (Acklam), |rel err| < 1.2e-9.
inline double probit_estimate(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace detail

/// Regularized lower incomplete gamma function P(a, x).
///
/// Small integer shapes go through the finite Poisson-tail sum; otherwise the
/// series is used for x < a + 1 and the continued fraction beyond. The finite
/// sum is restricted to x > 0.6 where its complement does not cancel.
inline double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("regularized_lower_gamma: shape must be finite and > 0");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("regularized_lower_gamma: x must be finite and >= 0");
    if (x == 0.0) return 0.0;
    if (a <= 50.0 && a == std::floor(a) && x > 0.6)
        return detail::lower_gamma_integer_sum(static_cast<int>(a), x);
    if (x < a + 1.0) return detail::lower_gamma_series(a, x);
    return 1.0 - detail::upper_gamma_fraction(a, x);
}

/// Gaussian tail function Q(x) = 1 - Phi(x).
inline double q_function(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_function: non-finite input");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Inverse Gaussian tail: the x with Q(x) = tail_prob.
inline double q_inverse(double tail_prob) {
    if (!(tail_prob > 0.0) || !(tail_prob < 1.0))
        throw std::invalid_argument("q_inverse: probability must be in (0,1)");
    if (tail_prob == 0.5) return 0.0;
    // Q^{-1}(1-e) = -Q^{-1}(e); canonicalizing keeps the symmetry exact.
    if (tail_prob > 0.5) return -q_inverse(1.0 - tail_prob);
    double x = -detail::probit_estimate(tail_prob);
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    for (int i = 0; i < 2; ++i) {
        const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        if (pdf < 1e-290) break;
        x += (q_function(x) - tail_prob) / pdf;
    }
    return x;
}

/// Partial sum of the harmonic series, H_n = sum_{k=1}^{n} 1/k.
///
/// Direct compensated summation up to n = 1e5; beyond that the asymptotic
/// ln(n) + euler + 1/(2n) is used (absolute error < 1e-11 past the crossover).
inline double harmonic_number(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("harmonic_number: n must be >= 1");
    constexpr std::uint64_t direct_crossover = 100'000;
    if (n <= direct_crossover) {
        double sum = 0.0;
        double comp = 0.0;
        for (std::uint64_t k = n; k >= 1; --k) {
            const double y = 1.0 / static_cast<double>(k) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
    const double nd = static_cast<double>(n);
    return std::log(nd) + kEulerMascheroni + 0.5 / nd;
}

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Solve f(x) = target for a nondecreasing f on [0, inf) with f(0) <= target.
///
/// The bracket grows geometrically from bracket_hint, then bisection runs until
/// |f(x) - target| <= rel_tol*target + abs_tol or the interval collapses to
/// machine precision (the best residual seen is returned in that case).
/// Evaluations that decrease along the way are reported as non-monotone.
template <std::invocable<double> F>
RootResult invert_monotone_cdf(F&& f, double target, double bracket_hint,
                               const RootSolveSettings& settings = {}) {
    settings.validate();
    if (!(target > 0.0) || !(target < 1.0) || !std::isfinite(target))
        throw std::invalid_argument("invert_monotone_cdf: target must be in (0,1)");
    if (!(bracket_hint > 0.0) || !std::isfinite(bracket_hint))
        throw std::invalid_argument("invert_monotone_cdf: bracket_hint must be finite and > 0");

    const double tol = settings.rel_tol * target + settings.abs_tol;
    constexpr double mono_slack = 1e-13;
    int evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f(x);
    };

    double lo = 0.0;
    double f_lo = eval(lo);
    if (f_lo > target + tol)
        throw SolverError("invert_monotone_cdf: f(0) exceeds the target probability");
    if (std::abs(f_lo - target) <= tol) return {0.0, std::abs(f_lo - target), evals};

    double hi = bracket_hint;
    double f_hi = eval(hi);
    int expansions = 0;
    while (f_hi < target) {
        if (f_hi < f_lo - mono_slack)
            throw SolverError("invert_monotone_cdf: non-monotone evaluations detected");
        if (++expansions > settings.max_iter)
            throw SolverError("invert_monotone_cdf: bracket expansion failed");
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = eval(hi);
    }
    if (f_hi < f_lo - mono_slack)
        throw SolverError("invert_monotone_cdf: non-monotone evaluations detected");

    double best_x = hi;
    double best_res = std::abs(f_hi - target);
    if (std::abs(f_lo - target) < best_res) {
        best_x = lo;
        best_res = std::abs(f_lo - target);
    }
    for (int it = 0; it < settings.max_iter && best_res > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;  // interval exhausted in double precision
        const double f_mid = eval(mid);
        if (f_mid < f_lo - mono_slack || f_mid > f_hi + mono_slack)
            throw SolverError("invert_monotone_cdf: non-monotone evaluations detected");
        const double res = std::abs(f_mid - target);
        if (res < best_res) {
            best_res = res;
            best_x = mid;
        }
        if (f_mid < target) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return {best_x, best_res, evals};
}

}  // namespace divcap
