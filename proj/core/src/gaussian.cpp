#include "twqkd/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twqkd {

namespace {

void require_variance(double variance, const char* what) {
    if (!std::isfinite(variance) || variance < 0.0) {
        throw std::invalid_argument(std::string(what) + " must be finite and >= 0, got " +
                                    std::to_string(variance));
    }
}

}  // namespace

double gaussian_pdf(double x, double variance) {
    require_variance(variance, "variance");
    if (variance == 0.0) throw std::invalid_argument("pdf of a point mass is undefined");
    return std::exp(-x * x / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double sample_real(double variance, RandomStream& rng) {
    require_variance(variance, "variance");
    if (variance == 0.0) return 0.0;  // point mass, no draw consumed
    return std::sqrt(variance) * rng.standard_normal();
}

ComplexAmplitude sample_modulation(double sigma_sq, RandomStream& rng) {
    require_variance(sigma_sq, "sigma_sq");
    if (sigma_sq == 0.0) return {};
    const double scale = std::sqrt(sigma_sq);
    const auto [gx, gp] = rng.standard_normal_pair();
    return {scale * gx, scale * gp};
}

double mi_per_quadrature(double signal_var, double noise_var) {
    require_variance(signal_var, "signal_var");
    if (!std::isfinite(noise_var) || noise_var <= 0.0) {
        throw std::invalid_argument("noise_var must be finite and > 0");
    }
    return 0.5 * std::log2(1.0 + signal_var / noise_var);
}

double mi_two_quadratures(double signal_var, double noise_var) {
    return 2.0 * mi_per_quadrature(signal_var, noise_var);
}

}  // namespace twqkd
