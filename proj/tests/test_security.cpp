#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <twqkd/random.hpp>
#include <twqkd/security.hpp>

#include <cmath>
#include <stdexcept>

using namespace twqkd;

namespace {

constexpr double kThresholdNoise = 1.3090169943749475;   // (3 + sqrt(5))/4
constexpr double kThresholdOmega = 0.8090169943749475;   // (1 + sqrt(5))/4

}  // namespace

TEST_CASE("receiver error variance grows linearly in the attack strength") {
    CHECK(sigma_b_sq(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sigma_b_sq(kThresholdOmega) == doctest::Approx(2.3090169943749475).epsilon(1e-15));
    CHECK(sigma_b_sq(1.0) > sigma_b_sq(0.5));
    CHECK_THROWS_AS(sigma_b_sq(0.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_b_sq(-1.0), std::invalid_argument);
}

TEST_CASE("eavesdropper error variance falls toward its floor of two") {
    CHECK(sigma_e_sq(0.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(sigma_e_sq(0.25) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(sigma_e_sq(1.0) < sigma_e_sq(0.5));
    CHECK(sigma_e_sq(1e6) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sigma_e_sq(1e6) > 2.0);
    CHECK_THROWS_AS(sigma_e_sq(0.0), std::invalid_argument);
}

TEST_CASE("security flips exactly at the crossing strength") {
    CHECK(is_secure_direct(0.5));
    CHECK_FALSE(is_secure_direct(1.5));
    CHECK(is_secure_direct(kThresholdOmega - 1e-9));
    CHECK_FALSE(is_secure_direct(kThresholdOmega + 1e-9));
    // At the exact crossing the variances agree to machine precision.
    CHECK(std::abs(sigma_b_sq(kThresholdOmega) - sigma_e_sq(kThresholdOmega)) < 1e-12);
}

TEST_CASE("threshold closed form") {
    const Threshold t = threshold_closed_form();
    CHECK(t.sigma_ch_sq == doctest::Approx(kThresholdNoise).epsilon(1e-15));
    CHECK(t.omega_sq == doctest::Approx(kThresholdOmega).epsilon(1e-15));
    CHECK(t.sigma_ch_sq - t.omega_sq == doctest::Approx(0.5).epsilon(1e-15));
    // Golden-ratio fingerprint: omega_sq solves 4 w^2 = 2 w + 1.
    CHECK(4.0 * t.omega_sq * t.omega_sq ==
          doctest::Approx(2.0 * t.omega_sq + 1.0).epsilon(1e-14));
    // The two-way protocol tolerates substantially more than one-way's 1/2.
    CHECK(t.sigma_ch_sq > 2.0 * kOneWayThreshold);
}

TEST_CASE("numeric threshold agrees with the closed form") {
    CHECK(std::abs(threshold_numeric(1e-9) - kThresholdNoise) < 1e-8);
    CHECK(std::abs(threshold_numeric(1e-13) - kThresholdNoise) < 1e-12);
    CHECK_THROWS_AS(threshold_numeric(0.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_numeric(-1e-6), std::invalid_argument);
}

TEST_CASE("bisection bracket endpoints straddle the root") {
    CHECK(sigma_e_sq(0.5) - sigma_b_sq(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sigma_e_sq(1.5) - sigma_b_sq(1.5) ==
          doctest::Approx(2.0 + 1.0 / 6.0 - 3.0).epsilon(1e-14));
}

TEST_CASE("closed-form mutual informations") {
    const MutualInformations mi = mutual_informations(100.0, 0.5);
    CHECK(mi.i_ab_bits == doctest::Approx(5.672425342).epsilon(1e-9));   // log2(51)
    CHECK(mi.i_ae_bits == doctest::Approx(5.357552005).epsilon(1e-9));   // log2(41)
    CHECK(mi.i_ab_bits > mi.i_ae_bits);

    // At the crossing the informations coincide for any modulation depth.
    for (const double signal : {1.0, 10.0, 100.0, 5000.0}) {
        const MutualInformations at_cross = mutual_informations(signal, kThresholdOmega);
        CHECK(std::abs(at_cross.i_ab_bits - at_cross.i_ae_bits) < 1e-9);
    }

    // Vanishing modulation carries vanishing information.
    const MutualInformations faint = mutual_informations(1e-12, 0.5);
    CHECK(faint.i_ab_bits < 1e-11);
    CHECK_THROWS_AS(mutual_informations(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(mutual_informations(100.0, 0.0), std::invalid_argument);
}

TEST_CASE("security report at a secure working point") {
    const SecurityReport report = build_report(100.0, 0.5);
    CHECK(report.omega_sq == doctest::Approx(0.5));
    CHECK(report.sigma_ch_sq == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(report.sigma_b_sq == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(report.sigma_e_sq == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(report.gamma_ab == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(report.gamma_ae == doctest::Approx(40.0).epsilon(1e-15));
    CHECK(report.i_ab_bits == doctest::Approx(5.672425342).epsilon(1e-9));
    CHECK(report.i_ae_bits == doctest::Approx(5.357552005).epsilon(1e-9));
    CHECK(report.key_rate_gap_bits ==
          doctest::Approx(report.i_ab_bits - report.i_ae_bits).epsilon(1e-12));
    CHECK(report.secure);
    CHECK(report.threshold_sigma_ch_sq == doctest::Approx(kThresholdNoise).epsilon(1e-15));
    CHECK(report.one_way_threshold == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("security report at an insecure working point") {
    const SecurityReport report = build_report(100.0, 1.0);
    CHECK(report.sigma_ch_sq == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(report.sigma_b_sq == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(report.sigma_e_sq == doctest::Approx(2.25).epsilon(1e-15));
    CHECK_FALSE(report.secure);
    CHECK(report.key_rate_gap_bits < 0.0);
    // The channel looks noisier than the one-way limit long before the
    // two-way threshold bites.
    CHECK(report.sigma_ch_sq > report.one_way_threshold);
    CHECK(report.sigma_ch_sq > report.threshold_sigma_ch_sq);
}

TEST_CASE("the three security orderings agree across the parameter plane") {
    RandomStream rng(20240501);
    for (int i = 0; i < 1000; ++i) {
        const double signal = std::exp(std::log(1e-2) + rng.uniform() * std::log(1e6));
        const double omega_sq = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e4));
        const SecurityReport report = build_report(signal, omega_sq);

        const bool by_variance = report.sigma_b_sq <= report.sigma_e_sq;
        const bool by_snr = report.gamma_ab >= report.gamma_ae;
        const bool by_information = report.key_rate_gap_bits >= 0.0;
        CHECK(report.secure == by_variance);
        CHECK(by_variance == by_snr);
        CHECK(by_snr == by_information);
    }
}

TEST_CASE("report construction near the knife edge stays consistent") {
    // Within a few ulps of the crossing all predicates must still agree (or
    // the tolerated tie branch must absorb the disagreement) - no throw.
    for (const double nudge : {-1e-15, -1e-16, 0.0, 1e-16, 1e-15}) {
        const double omega_sq = kThresholdOmega * (1.0 + nudge);
        CHECK_NOTHROW(build_report(100.0, omega_sq));
    }
}
