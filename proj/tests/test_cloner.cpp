#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <twqkd/cloner.hpp>
#include <twqkd/errors.hpp>
#include <twqkd/stats.hpp>

#include <symplectic_oracle.hpp>

#include <array>
#include <cmath>
#include <stdexcept>

using namespace twqkd;

TEST_CASE("cloner noise pairs enforce the uncertainty bound") {
    const GqcmParams symmetric(0.5, 0.5);
    CHECK(symmetric.optimal());
    CHECK(symmetric.symmetric());

    const GqcmParams asym(0.3, 0.25 / 0.3);
    CHECK(asym.optimal());
    CHECK_FALSE(asym.symmetric());

    const GqcmParams loose(2.0, 0.2);  // product 0.4 > 1/4: allowed, suboptimal
    CHECK_FALSE(loose.optimal());

    CHECK_THROWS_AS(GqcmParams(0.4, 0.4), UncertaintyViolationError);
    CHECK_THROWS_AS(GqcmParams(0.49, 0.49), UncertaintyViolationError);
    CHECK_THROWS_AS(GqcmParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GqcmParams(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("optimal_pair saturates the bound for any clone-1 noise") {
    for (const double s : {0.1, 0.25, 0.5, 0.809, 2.0, 17.0}) {
        const GqcmParams params = GqcmParams::optimal_pair(s);
        CHECK(params.sigma1_sq() == s);
        CHECK(params.sigma2_sq() == doctest::Approx(0.25 / s).epsilon(1e-15));
        CHECK(params.optimal());
    }
    CHECK_THROWS_AS(GqcmParams::optimal_pair(-1.0), std::invalid_argument);
}

TEST_CASE("joint clone covariance blocks at the symmetric point") {
    const Eigen::Matrix4d v = gqcm_joint_cm(0.5);
    CHECK((v.block<2, 2>(0, 0) - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK((v.block<2, 2>(2, 2) - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK((v.block<2, 2>(0, 2) - 0.5 * Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK_THROWS_AS(gqcm_joint_cm(0.0), std::invalid_argument);
    CHECK_THROWS_AS(gqcm_joint_cm(-0.3), std::invalid_argument);
}

TEST_CASE("joint clone covariance sits exactly on the physical boundary") {
    for (const double s : {0.05, 0.2, 0.5, 0.809, 1.5, 40.0}) {
        const Eigen::Matrix4d v = gqcm_joint_cm(s);
        CHECK(is_physical(v));

        // The complementarity identity between the two clones' excesses.
        const double excess1 = v(0, 0) - 0.5;
        const double excess2 = v(2, 2) - 0.5;
        CHECK(excess1 * excess2 == doctest::Approx(0.25).epsilon(1e-12));

        const auto nus = test::brute_force_symplectic(v);
        CHECK(nus.front() == doctest::Approx(0.5).epsilon(1e-9));
    }

    // At the symmetric point the spectrum is exactly {1/2, 3/2}.
    const auto nus = symplectic_eigenvalues(gqcm_joint_cm(0.5));
    CHECK(nus[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nus[1] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("joint output state copies the input label onto both clones") {
    const ComplexAmplitude input{3.0, -1.0};
    const GaussianState out = joint_output_state(input, 0.7);
    CHECK(out.n_modes() == 2);
    CHECK(out.mode_mean(0).x == doctest::Approx(3.0));
    CHECK(out.mode_mean(0).p == doctest::Approx(-1.0));
    CHECK(out.mode_mean(1).x == doctest::Approx(3.0));
    CHECK(out.mode_mean(1).p == doctest::Approx(-1.0));
    CHECK((out.cov() - gqcm_joint_cm(0.7)).norm() < 1e-15);

    const std::array<int, 1> keep = {0};
    const GaussianState clone1 = partial_trace(out, keep);
    CHECK(clone1.mode_cov(0)(0, 0) == doctest::Approx(0.5 + 0.7).epsilon(1e-15));
}

TEST_CASE("symmetric pair sampling: equal labels, shared shift of variance 1/2") {
    RandomStream rng(42);
    const ComplexAmplitude input{1.0, 2.0};
    SampleStats shift_x;
    SampleStats shift_p;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const ClonePairSample s = sample_symmetric_pair(input, rng);
        CHECK(s.clone1 == s.clone2);
        CHECK(s.clone1 == input + s.shared_shift);
        shift_x.add(s.shared_shift.x);
        shift_p.add(s.shared_shift.p);
    }
    CHECK(std::abs(shift_x.mean()) < 5.0 * std::sqrt(0.5 / n));
    CHECK(std::abs(shift_x.sample_variance() - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / n));
    CHECK(std::abs(shift_p.sample_variance() - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST_CASE("symmetric pair statistics reproduce the joint covariance") {
    // Labels plus per-clone vacuum noise must land on gqcm_joint_cm(1/2),
    // including the off-diagonal coupling carried by the shared shift.
    RandomStream rng(4242);
    const int n = 200000;
    Eigen::Vector4d sum = Eigen::Vector4d::Zero();
    Eigen::Matrix4d sum_outer = Eigen::Matrix4d::Zero();
    for (int i = 0; i < n; ++i) {
        const ClonePairSample s = sample_symmetric_pair({0.0, 0.0}, rng);
        const auto [v1x, v1p] = rng.standard_normal_pair();
        const auto [v2x, v2p] = rng.standard_normal_pair();
        const double w = 1.0 / std::numbers::sqrt2;  // vacuum sigma = sqrt(1/2)
        Eigen::Vector4d q(s.clone1.x + w * v1x, s.clone1.p + w * v1p,
                          s.clone2.x + w * v2x, s.clone2.p + w * v2p);
        sum += q;
        sum_outer += q * q.transpose();
    }
    const Eigen::Vector4d mean = sum / n;
    const Eigen::Matrix4d cov = sum_outer / n - mean * mean.transpose();
    const Eigen::Matrix4d expected = gqcm_joint_cm(0.5);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double se =
                std::sqrt((expected(i, i) * expected(j, j) + expected(i, j) * expected(i, j)) / n);
            CHECK(std::abs(cov(i, j) - expected(i, j)) < 4.0 * se);
        }
    }
}

TEST_CASE("asymmetric marginals carry the complementary noises") {
    RandomStream rng(77);
    const ComplexAmplitude input{-0.5, 0.25};
    const double omega_sq = 0.25;

    SampleStats sent_x;
    SampleStats kept_x;
    double cross = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const ComplexAmplitude sent = sample_asymmetric_sent_clone(input, omega_sq, rng);
        const ComplexAmplitude kept = sample_asymmetric_kept_clone(input, omega_sq, rng);
        const double nu = sent.x - input.x;
        const double lambda = kept.x - input.x;
        sent_x.add(nu);
        kept_x.add(lambda);
        cross += nu * lambda;
    }
    // Sent clone: omega^2; kept clone: 1/(4 omega^2) = 1.0 here.
    CHECK(std::abs(sent_x.sample_variance() - 0.25) < 5.0 * 0.25 * std::sqrt(2.0 / n));
    CHECK(std::abs(kept_x.sample_variance() - 1.0) < 5.0 * 1.0 * std::sqrt(2.0 / n));

    // Configured excesses multiply to exactly 1/4 ...
    CHECK(std::abs(0.25 * (0.25 / 0.25) - 0.25) < 1e-15);
    // ... and the independently drawn shifts are uncorrelated.
    const double corr = (cross / n) / std::sqrt(0.25 * 1.0);
    CHECK(std::abs(corr) < 5.0 / std::sqrt(static_cast<double>(n)));

    CHECK_THROWS_AS(sample_asymmetric_sent_clone(input, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_asymmetric_kept_clone(input, -1.0, rng), std::invalid_argument);
}

TEST_CASE("clone noise statistics are independent of the input label") {
    // Universality: the machine adds the same noise wherever the input sits.
    RandomStream rng_a(88);
    RandomStream rng_b(89);
    SampleStats near_origin;
    SampleStats far_out;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        near_origin.add(sample_asymmetric_sent_clone({0.0, 0.0}, 0.8, rng_a).x);
        far_out.add(sample_asymmetric_sent_clone({250.0, -90.0}, 0.8, rng_b).x - 250.0);
    }
    const double band = 5.0 * 0.8 * std::sqrt(2.0 / n) * 2.0;
    CHECK(std::abs(near_origin.sample_variance() - far_out.sample_variance()) < band);
}
