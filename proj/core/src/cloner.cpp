#include "twqkd/cloner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "twqkd/errors.hpp"
#include "twqkd/gaussian.hpp"

namespace twqkd {

namespace {

constexpr double kOptimalityTol = 1e-12;

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(what) + " must be finite and > 0, got " +
                                    std::to_string(value));
    }
}

}  // namespace

GqcmParams::GqcmParams(double sigma1_sq, double sigma2_sq)
    : sigma1_sq_(sigma1_sq), sigma2_sq_(sigma2_sq) {
    require_positive(sigma1_sq, "sigma1_sq");
    require_positive(sigma2_sq, "sigma2_sq");
    const double product = sigma1_sq * sigma2_sq;
    if (product < 0.25 - kOptimalityTol) {
        throw UncertaintyViolationError("cloner noise product " + std::to_string(product) +
                                        " violates sigma1^2 * sigma2^2 >= 1/4");
    }
}

bool GqcmParams::optimal() const {
    return std::abs(sigma1_sq_ * sigma2_sq_ - 0.25) < kOptimalityTol;
}

GqcmParams GqcmParams::optimal_pair(double sigma1_sq) {
    require_positive(sigma1_sq, "sigma1_sq");
    return GqcmParams(sigma1_sq, 0.25 / sigma1_sq);
}

Eigen::Matrix4d gqcm_joint_cm(double sigma_sq) {
    require_positive(sigma_sq, "sigma_sq");
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    const double clone1 = 0.5 + sigma_sq;
    const double clone2 = 0.5 + 0.25 / sigma_sq;
    v(0, 0) = v(1, 1) = clone1;
    v(2, 2) = v(3, 3) = clone2;
    v(0, 2) = v(2, 0) = 0.5;
    v(1, 3) = v(3, 1) = 0.5;
    return v;
}

GaussianState joint_output_state(ComplexAmplitude input, double sigma_sq) {
    Eigen::Vector4d mean(input.x, input.p, input.x, input.p);
    return GaussianState(mean, gqcm_joint_cm(sigma_sq));
}

ClonePairSample sample_symmetric_pair(ComplexAmplitude input, RandomStream& rng) {
    const ComplexAmplitude shift = sample_modulation(0.5, rng);
    return {input + shift, input + shift, shift};
}

ComplexAmplitude sample_asymmetric_sent_clone(ComplexAmplitude input, double omega_sq,
                                              RandomStream& rng) {
    require_positive(omega_sq, "omega_sq");
    return input + sample_modulation(omega_sq, rng);
}

ComplexAmplitude sample_asymmetric_kept_clone(ComplexAmplitude input, double omega_sq,
                                              RandomStream& rng) {
    require_positive(omega_sq, "omega_sq");
    return input + sample_modulation(0.25 / omega_sq, rng);
}

}  // namespace twqkd
