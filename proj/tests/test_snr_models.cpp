#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <divcap/montecarlo.hpp>
#include <divcap/snr_models.hpp>

using namespace divcap;

namespace {
ChannelConfig simo(DiversityScheme scheme, std::uint32_t m, double snr = 1.0) {
    return ChannelConfig::make(scheme, m, 1, snr);
}
}  // namespace

TEST_CASE("channel config invariants", "[channel]") {
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::mrc, 2, 2, 1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::st, 3, 2, 1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::mrc, 0, 1, 1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::mrc, 2'000'000, 1, 1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::mrc, 2, 1, -1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig::make(DiversityScheme::mrc, 2, 1, 0.0), ConfigError);
    CHECK_NOTHROW(ChannelConfig::make(DiversityScheme::mrc, 2'000'000, 1, 1.0, 5'000'000));

    CHECK(diversity_order(ChannelConfig::make(DiversityScheme::stc, 3, 2, 1.0)) == 6);
    CHECK(diversity_order(simo(DiversityScheme::sc, 7)) == 7);
    CHECK_THROWS_AS(diversity_order(ChannelConfig::make(DiversityScheme::mimo_optimal, 2, 2, 1.0)),
                    ConfigError);
}

TEST_CASE("combiner CDF per scheme", "[snr_models][cdf]") {
    SECTION("single-branch exponential") {
        CHECK_THAT(combiner_cdf(simo(DiversityScheme::mrc, 1), std::log(10.0)),
                   Catch::Matchers::WithinRel(0.9, 1e-12));
    }
    SECTION("two-branch selection at its closed-form decile") {
        const double x = -std::log(1.0 - std::sqrt(0.1));  // 0.3801304...
        CHECK_THAT(combiner_cdf(simo(DiversityScheme::sc, 2), x),
                   Catch::Matchers::WithinAbs(0.1, 1e-9));
    }
    SECTION("origin and rejection") {
        CHECK(combiner_cdf(ChannelConfig::make(DiversityScheme::stc, 3, 2, 1.0), 0.0) == 0.0);
        CHECK_THROWS_AS(combiner_cdf(simo(DiversityScheme::mrc, 1), -0.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            combiner_cdf(ChannelConfig::make(DiversityScheme::mimo_optimal, 2, 2, 1.0), 1.0),
            UnsupportedExactCdf);
    }
    SECTION("large selection orders stay stable") {
        const ChannelConfig cfg = simo(DiversityScheme::sc, 1'000'000);
        const double g = combiner_quantile(cfg, 1e-3).gamma0;
        CHECK_THAT(combiner_cdf(cfg, g), Catch::Matchers::WithinRel(1e-3, 1e-9));
    }
}

TEST_CASE("combiner quantiles", "[snr_models][quantile]") {
    SECTION("selection closed form") {
        const SnrQuantile q = combiner_quantile(simo(DiversityScheme::sc, 2), 0.1);
        CHECK_THAT(q.gamma0,
                   Catch::Matchers::WithinAbs(-std::log(1.0 - std::sqrt(0.1)), 1e-12));
        CHECK_THAT(q.gamma0, Catch::Matchers::WithinAbs(0.3801304080661717, 1e-9));
        CHECK(q.method == SnrQuantile::Method::closed_form);
        CHECK(q.iterations == 0);
        CHECK(q.residual < 1e-12);
    }
    SECTION("maximal ratio numeric inversion") {
        const SnrQuantile q = combiner_quantile(simo(DiversityScheme::mrc, 2), 0.1);
        CHECK_THAT(q.gamma0, Catch::Matchers::WithinAbs(0.531811608389612, 1e-6));
        CHECK_THAT(q.gamma0, Catch::Matchers::WithinAbs(0.5318, 1e-4));
        CHECK(q.method == SnrQuantile::Method::numeric_inversion);
        CHECK(q.iterations > 0);
        CHECK(q.residual <= 1e-12 * 0.1 + 1e-15);
    }
    SECTION("one branch is one branch regardless of combining") {
        const double sel = combiner_quantile(simo(DiversityScheme::sc, 1), 0.1).gamma0;
        const double mrc = combiner_quantile(simo(DiversityScheme::mrc, 1), 0.1).gamma0;
        CHECK_THAT(sel, Catch::Matchers::WithinAbs(0.10536051565782635, 1e-9));
        CHECK_THAT(mrc, Catch::Matchers::WithinRel(sel, 1e-9));
    }
    SECTION("branch SNR scales the threshold linearly") {
        const double base = combiner_quantile(simo(DiversityScheme::sc, 4, 1.0), 0.05).gamma0;
        const double scaled = combiner_quantile(simo(DiversityScheme::sc, 4, 3.5), 0.05).gamma0;
        CHECK_THAT(scaled, Catch::Matchers::WithinRel(3.5 * base, 1e-12));
    }
    CHECK_THROWS_AS(
        combiner_quantile(ChannelConfig::make(DiversityScheme::mimo_optimal, 2, 2, 1.0), 0.1),
        UnsupportedExactCdf);
    CHECK_THROWS_AS(combiner_quantile(simo(DiversityScheme::mrc, 2), 0.0), std::invalid_argument);
}

TEST_CASE("quantile/CDF round trip across schemes", "[snr_models][property]") {
    for (const DiversityScheme scheme :
         {DiversityScheme::mrc, DiversityScheme::sc, DiversityScheme::stc}) {
        for (const std::uint32_t d : {1u, 2u, 10u, 100u, 1000u}) {
            const ChannelConfig cfg = scheme == DiversityScheme::stc
                                          ? ChannelConfig::make(scheme, d, 3, 0.8)
                                          : simo(scheme, d, 0.8);
            for (const double eps : {1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
                const SnrQuantile q = combiner_quantile(cfg, eps);
                CHECK_THAT(combiner_cdf(cfg, q.gamma0), Catch::Matchers::WithinRel(eps, 1e-9));
            }
        }
    }
}

TEST_CASE("transmit-side schemes mirror receive-side results bit-for-bit",
          "[snr_models][property]") {
    for (const std::uint32_t d : {1u, 2u, 7u, 100u, 1000u}) {
        for (const double eps : {1e-3, 1e-1, 0.5}) {
            CHECK(combiner_quantile(ChannelConfig::make(DiversityScheme::mrt, 1, d, 1.3), eps)
                      .gamma0 ==
                  combiner_quantile(ChannelConfig::make(DiversityScheme::mrc, d, 1, 1.3), eps)
                      .gamma0);
            CHECK(combiner_quantile(ChannelConfig::make(DiversityScheme::st, 1, d, 0.6), eps)
                      .gamma0 ==
                  combiner_quantile(ChannelConfig::make(DiversityScheme::sc, d, 1, 0.6), eps)
                      .gamma0);
        }
    }
    for (const double eps : {1e-3, 1e-1, 0.5}) {
        CHECK(combiner_quantile(ChannelConfig::make(DiversityScheme::stc, 2, 5, 1.1), eps).gamma0 ==
              combiner_quantile(ChannelConfig::make(DiversityScheme::sc, 10, 1, 1.1), eps).gamma0);
        CHECK(combiner_cdf(ChannelConfig::make(DiversityScheme::stc, 4, 25, 1.1), 2.0) ==
              combiner_cdf(ChannelConfig::make(DiversityScheme::sc, 100, 1, 1.1), 2.0));
    }
}

TEST_CASE("selection thresholds never exceed maximal-ratio thresholds",
          "[snr_models][property]") {
    for (const std::uint32_t d : {1u, 2u, 10u, 100u, 1000u})
        for (const double eps : {1e-4, 1e-2, 0.1, 0.5})
            CHECK(combiner_quantile(simo(DiversityScheme::sc, d), eps).gamma0 <=
                  combiner_quantile(simo(DiversityScheme::mrc, d), eps).gamma0);
}

TEST_CASE("mean combiner SNR", "[snr_models][mean]") {
    CHECK(mean_combiner_snr_value(simo(DiversityScheme::mrc, 100, 0.5)) == 50.0);
    CHECK_THAT(mean_combiner_snr_value(ChannelConfig::make(DiversityScheme::stc, 3, 2, 1.0)),
               Catch::Matchers::WithinRel(2.45, 1e-12));
    CHECK_THAT(mean_combiner_snr_value(simo(DiversityScheme::sc, 4, 2.0)),
               Catch::Matchers::WithinRel(2.0 * (1.0 + 0.5 + 1.0 / 3.0 + 0.25), 1e-12));
    CHECK(mean_combiner_snr_value(ChannelConfig::make(DiversityScheme::mrt, 1, 8, 1.0)) == 8.0);

    const SnrInterval bounds =
        mean_combiner_snr(ChannelConfig::make(DiversityScheme::mimo_optimal, 100, 2, 1.0));
    CHECK(bounds.lower == 100.0);
    CHECK(bounds.upper == 200.0);
    CHECK_FALSE(bounds.is_point());
    CHECK_THROWS_AS(
        mean_combiner_snr_value(ChannelConfig::make(DiversityScheme::mimo_optimal, 100, 2, 1.0)),
        ConfigError);
}

TEST_CASE("sample means agree with the analytic means", "[snr_models][mc]") {
    const McSettings settings{.samples = 100'000, .seed = 42, .chunks = 4};
    for (const ChannelConfig& cfg :
         {simo(DiversityScheme::mrc, 10), simo(DiversityScheme::sc, 10),
          ChannelConfig::make(DiversityScheme::stc, 2, 5, 1.0)}) {
        const McEstimate est = mc_estimate(cfg, 0.5, settings);
        const double analytic = mean_combiner_snr_value(cfg);
        CHECK(std::abs(est.sample_mean - analytic) <= 3.0 * est.sample_mean_stderr);
    }
}

TEST_CASE("gaussian-approximation quantile", "[snr_models][ga]") {
    SECTION("large-order value") {
        const SnrQuantile q = ga_quantile(simo(DiversityScheme::mrc, 100), 0.1);
        CHECK_THAT(q.gamma0,
                   Catch::Matchers::WithinRel(100.0 - 10.0 * q_inverse(0.1), 1e-12));
        CHECK_THAT(q.gamma0, Catch::Matchers::WithinAbs(87.1845, 1e-3));
        CHECK(q.method == SnrQuantile::Method::gaussian_approx);
        CHECK(q.residual < 0.01);  // records the true CDF misfit
    }
    SECTION("zero threshold exactly at the regime boundary") {
        const double eps = q_function(2.0);  // makes [Qinv(eps)]^2 = 4
        const SnrQuantile q = ga_quantile(simo(DiversityScheme::mrc, 4), eps);
        CHECK_THAT(q.gamma0, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    SECTION("invalid regime is an error, not a clamp") {
        CHECK_THROWS_AS(ga_quantile(simo(DiversityScheme::mrc, 4), 1e-3), GaRegimeError);
        CHECK_THROWS_MATCHES(ga_quantile(simo(DiversityScheme::mrc, 4), 1e-3), GaRegimeError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("ga-invalid-regime")));
    }
    SECTION("selection schemes have no gaussian approximation") {
        CHECK_THROWS_AS(ga_quantile(simo(DiversityScheme::sc, 100), 0.1), ConfigError);
    }
    SECTION("transmit-side mirror") {
        CHECK(ga_quantile(ChannelConfig::make(DiversityScheme::mrt, 1, 64, 1.0), 0.1).gamma0 ==
              ga_quantile(simo(DiversityScheme::mrc, 64), 0.1).gamma0);
    }
}

TEST_CASE("gaussian approximation converges with diversity order", "[snr_models][ga]") {
    double prev = 1.0;
    for (const std::uint32_t d : {10u, 100u, 1000u, 10000u}) {
        const ChannelConfig cfg = simo(DiversityScheme::mrc, d);
        const double exact = combiner_quantile(cfg, 0.1).gamma0;
        const double approx = ga_quantile(cfg, 0.1).gamma0;
        const double rel = std::abs(approx - exact) / exact;
        CHECK(rel < prev);
        if (d == 1000) CHECK(rel < 0.02);
        prev = rel;
    }
}

TEST_CASE("back-solving the per-branch SNR from a combiner target", "[snr_models]") {
    const ChannelConfig mrc = config_with_combiner_snr(DiversityScheme::mrc, 4, 1, 8.0);
    CHECK(mrc.branch_snr == 2.0);
    CHECK_THAT(mean_combiner_snr_value(mrc), Catch::Matchers::WithinRel(8.0, 1e-12));

    const ChannelConfig sel = config_with_combiner_snr(DiversityScheme::sc, 2, 1, 3.0);
    CHECK_THAT(sel.branch_snr, Catch::Matchers::WithinRel(2.0, 1e-12));  // H_2 = 1.5

    const ChannelConfig stc = config_with_combiner_snr(DiversityScheme::stc, 3, 2, 2.45);
    CHECK_THAT(stc.branch_snr, Catch::Matchers::WithinRel(1.0, 1e-12));

    CHECK_THROWS_AS(config_with_combiner_snr(DiversityScheme::mimo_optimal, 2, 2, 1.0),
                    ConfigError);
    CHECK_THROWS_AS(config_with_combiner_snr(DiversityScheme::mrc, 4, 1, -1.0), ConfigError);
}
