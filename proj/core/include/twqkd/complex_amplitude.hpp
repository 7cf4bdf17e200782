#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace twqkd {

/// Phase-space point of one bosonic mode, stored as the quadrature pair
/// (x, p) with [x, p] = i. The complex amplitude is mu = (x + i p) / sqrt(2),
/// so a displacement by mu shifts <x> by sqrt(2) Re(mu) and <p> by
/// sqrt(2) Im(mu). All shot-noise bookkeeping lives in the states and
/// measurements, never in these labels: adding two amplitudes adds means only.
struct ComplexAmplitude {
    double x = 0.0;
    double p = 0.0;

    friend constexpr ComplexAmplitude operator+(ComplexAmplitude a, ComplexAmplitude b) {
        return {a.x + b.x, a.p + b.p};
    }
    friend constexpr ComplexAmplitude operator-(ComplexAmplitude a, ComplexAmplitude b) {
        return {a.x - b.x, a.p - b.p};
    }
    friend constexpr ComplexAmplitude operator*(double s, ComplexAmplitude a) {
        return {s * a.x, s * a.p};
    }
    friend constexpr ComplexAmplitude operator*(ComplexAmplitude a, double s) { return s * a; }
    constexpr ComplexAmplitude operator-() const { return {-x, -p}; }
    friend constexpr bool operator==(ComplexAmplitude, ComplexAmplitude) = default;

    std::complex<double> amplitude() const {
        return {x / std::numbers::sqrt2, p / std::numbers::sqrt2};
    }
    static ComplexAmplitude from_amplitude(std::complex<double> mu) {
        return {std::numbers::sqrt2 * mu.real(), std::numbers::sqrt2 * mu.imag()};
    }

    double norm_sq() const { return x * x + p * p; }
    bool finite() const { return std::isfinite(x) && std::isfinite(p); }
};

}  // namespace twqkd
