#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <divcap/numerics.hpp>

using namespace divcap;

namespace {

// Composite-Simpson integration of the standard normal density over [a, b].
double gaussian_mass(double a, double b, int panels = 4000) {
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) * 0.39894228040143267794; };
    const double h = (b - a) / panels;
    double acc = pdf(a) + pdf(b);
    for (int i = 1; i < panels; ++i) acc += pdf(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Independent tail oracle: integrate the density from x far into the tail.
double q_oracle(double x) { return gaussian_mass(x, x + 42.0); }

// Bisection on an arbitrary monotone function, independent of the library solver.
template <typename F>
double bisect_oracle(F&& f, double target, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("regularized lower gamma against closed forms", "[numerics][gamma]") {
    SECTION("shape 1 is the exponential CDF") {
        for (const double x : {1e-8, 0.01, 0.105360515657826, 0.7, 3.0, 20.0})
            CHECK_THAT(regularized_lower_gamma(1.0, x),
                       Catch::Matchers::WithinRel(-std::expm1(-x), 1e-12));
        CHECK_THAT(regularized_lower_gamma(1.0, std::log(1.0 / 0.9)),
                   Catch::Matchers::WithinRel(0.1, 1e-12));
    }

    SECTION("shape 2 matches 1 - e^-x (1+x)") {
        for (const double x : {0.05, 0.5318, 1.0, 4.0, 12.0}) {
            const double expected = 1.0 - std::exp(-x) * (1.0 + x);
            CHECK_THAT(regularized_lower_gamma(2.0, x),
                       Catch::Matchers::WithinRel(expected, 1e-10));
        }
        CHECK_THAT(regularized_lower_gamma(2.0, 0.5318),
                   Catch::Matchers::WithinAbs(0.1, 1e-3));
    }

    SECTION("half-integer shape matches the error-function identity") {
        for (const double x : {0.01, 0.3, 1.0, 2.5, 9.0})
            CHECK_THAT(regularized_lower_gamma(0.5, x),
                       Catch::Matchers::WithinRel(std::erf(std::sqrt(x)), 1e-12));
    }

    SECTION("integer fast path agrees with an explicit factorial sum") {
        for (const double x : {0.7, 5.0, 25.0, 60.0}) {
            long double tail = 0.0L;
            long double term = std::exp(-static_cast<long double>(x));
            for (int l = 0; l < 30; ++l) {
                tail += term;
                term *= x / (l + 1);
            }
            CHECK_THAT(regularized_lower_gamma(30.0, x),
                       Catch::Matchers::WithinAbs(static_cast<double>(1.0L - tail), 1e-13));
        }
    }

    SECTION("limits and monotonicity") {
        CHECK(regularized_lower_gamma(5.0, 0.0) == 0.0);
        CHECK_THAT(regularized_lower_gamma(3.0, 1e4), Catch::Matchers::WithinAbs(1.0, 1e-12));
        std::mt19937 gen(31415);
        std::uniform_real_distribution<double> shape(0.2, 300.0);
        std::uniform_real_distribution<double> point(0.0, 400.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double a = shape(gen);
            double x1 = point(gen), x2 = point(gen);
            if (x1 > x2) std::swap(x1, x2);
            CHECK(regularized_lower_gamma(a, x1) <= regularized_lower_gamma(a, x2) + 1e-14);
        }
    }

    SECTION("domain errors") {
        CHECK_THROWS_AS(regularized_lower_gamma(0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(regularized_lower_gamma(-2.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(regularized_lower_gamma(1.0, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(regularized_lower_gamma(1.0, std::nan("")), std::invalid_argument);
    }
}

TEST_CASE("gaussian tail function", "[numerics][q]") {
    CHECK(q_function(0.0) == 0.5);

    SECTION("matches tail quadrature") {
        for (const double x : {0.3, 0.5, 1.281552, 2.0, 3.090232})
            CHECK_THAT(q_function(x), Catch::Matchers::WithinRel(q_oracle(x), 1e-9));
        CHECK_THAT(q_function(1.281552), Catch::Matchers::WithinAbs(0.1, 1e-6));
        CHECK_THAT(q_function(3.090232), Catch::Matchers::WithinAbs(1e-3, 1e-8));
    }

    SECTION("reflection and monotonicity") {
        for (const double x : {0.1, 0.77, 2.5, 4.0}) {
            CHECK_THAT(q_function(-x), Catch::Matchers::WithinRel(1.0 - q_function(x), 1e-12));
            CHECK(q_function(x) < q_function(x - 0.05));
        }
    }

    CHECK_THROWS_AS(q_function(std::nan("")), std::invalid_argument);
}

TEST_CASE("inverse gaussian tail", "[numerics][q]") {
    CHECK(q_inverse(0.5) == 0.0);

    SECTION("reference points") {
        CHECK_THAT(q_inverse(0.1), Catch::Matchers::WithinAbs(1.2815515655446004, 1e-9));
        CHECK_THAT(q_inverse(1e-3), Catch::Matchers::WithinAbs(3.090232306167813, 1e-9));
        CHECK_THAT(q_inverse(0.1),
                   Catch::Matchers::WithinAbs(
                       bisect_oracle([](double x) { return -q_function(x); }, -0.1, -9.0, 9.0),
                       1e-9));
        CHECK_THAT(q_inverse(1e-3),
                   Catch::Matchers::WithinAbs(
                       bisect_oracle([](double x) { return -q_function(x); }, -1e-3, -9.0, 9.0),
                       1e-9));
    }

    SECTION("antisymmetry is exact under canonicalization") {
        for (const double eps : {0.1, 0.25, 0.01, 1e-4})
            CHECK(q_inverse(1.0 - eps) == -q_inverse(eps));
    }

    SECTION("round trip over the working range") {
        for (double eps = 1e-6; eps < 1.0 - 1e-6; eps *= 1.9) {
            CHECK_THAT(q_function(q_inverse(eps)), Catch::Matchers::WithinRel(eps, 1e-9));
            const double mirrored = 1.0 - eps;
            if (mirrored < 1.0)
                CHECK_THAT(q_function(q_inverse(mirrored)),
                           Catch::Matchers::WithinRel(mirrored, 1e-9));
        }
    }

    SECTION("domain errors") {
        CHECK_THROWS_AS(q_inverse(0.0), std::invalid_argument);
        CHECK_THROWS_AS(q_inverse(1.0), std::invalid_argument);
        CHECK_THROWS_AS(q_inverse(-0.2), std::invalid_argument);
    }
}

TEST_CASE("harmonic numbers", "[numerics][harmonic]") {
    CHECK(harmonic_number(1) == 1.0);
    CHECK_THAT(harmonic_number(4), Catch::Matchers::WithinRel(2.0833333333333335, 1e-14));
    CHECK_THAT(harmonic_number(6), Catch::Matchers::WithinRel(2.45, 1e-14));
    CHECK_THAT(harmonic_number(100), Catch::Matchers::WithinRel(5.187377517639621, 1e-12));
    CHECK_THAT(harmonic_number(100000), Catch::Matchers::WithinAbs(12.090146129863427, 1e-11));

    SECTION("recurrence holds across the direct/asymptotic crossover") {
        for (const std::uint64_t n : {5ULL, 99ULL, 99998ULL, 99999ULL, 100000ULL, 100001ULL,
                                      100002ULL, 5000000ULL})
            CHECK_THAT(harmonic_number(n + 1) - harmonic_number(n),
                       Catch::Matchers::WithinAbs(1.0 / static_cast<double>(n + 1), 1e-10));
    }

    SECTION("excess over ln(n) + euler decays monotonically from above") {
        double prev = 1.0;
        for (std::uint64_t n = 2; n <= 100'000'000ULL; n *= 10) {
            const double excess =
                harmonic_number(n) - std::log(static_cast<double>(n)) - kEulerMascheroni;
            CHECK(excess > 0.0);
            CHECK(excess < prev);
            prev = excess;
        }
    }

    CHECK_THROWS_AS(harmonic_number(0), std::invalid_argument);
}

TEST_CASE("monotone CDF inversion", "[numerics][solver]") {
    SECTION("exponential CDF: closed form") {
        const RootResult r = invert_monotone_cdf(
            [](double x) { return regularized_lower_gamma(1.0, x); }, 0.1, 1.0);
        CHECK_THAT(r.x, Catch::Matchers::WithinAbs(std::log(1.0 / 0.9), 1e-9));
        CHECK(r.residual <= 1e-12 * 0.1 + 1e-15);
    }

    SECTION("shape-2 CDF against an independent bisection oracle") {
        const double oracle = bisect_oracle(
            [](double x) { return 1.0 - std::exp(-x) * (1.0 + x); }, 0.1, 0.0, 50.0);
        const RootResult r = invert_monotone_cdf(
            [](double x) { return regularized_lower_gamma(2.0, x); }, 0.1, 1.0);
        CHECK_THAT(r.x, Catch::Matchers::WithinRel(oracle, 1e-9));
        CHECK_THAT(r.x, Catch::Matchers::WithinAbs(0.5318, 1e-4));
    }

    SECTION("large-shape round trip") {
        const RootResult r = invert_monotone_cdf(
            [](double x) { return regularized_lower_gamma(100.0, x); }, 0.1, 100.0);
        CHECK_THAT(regularized_lower_gamma(100.0, r.x), Catch::Matchers::WithinRel(0.1, 1e-9));
    }

    SECTION("bracket expansion failure on a plateau") {
        CHECK_THROWS_AS(invert_monotone_cdf([](double) { return 0.4; }, 0.5, 1.0), SolverError);
    }

    SECTION("non-monotone functions are reported") {
        auto bump = [](double x) { return x < 2.0 ? 0.4 * x : 0.8 - 0.2 * (x - 2.0); };
        CHECK_THROWS_AS(invert_monotone_cdf(bump, 0.75, 8.0), SolverError);
    }

    SECTION("f(0) above the target is rejected") {
        CHECK_THROWS_AS(
            invert_monotone_cdf([](double x) { return 0.9 + 0.05 * x; }, 0.5, 1.0), SolverError);
    }

    SECTION("settings are validated") {
        CHECK_THROWS_AS(invert_monotone_cdf([](double x) { return x; }, 0.5, 1.0,
                                            RootSolveSettings{.rel_tol = -1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(invert_monotone_cdf([](double x) { return x; }, 0.5, 1.0,
                                            RootSolveSettings{.max_iter = 0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            invert_monotone_cdf([](double x) { return x; }, 1.5, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(
            invert_monotone_cdf([](double x) { return x; }, 0.5, -1.0), std::invalid_argument);
    }
}
