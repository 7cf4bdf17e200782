#pragma once

#include "twqkd/complex_amplitude.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

/// Density of the zero-mean scalar Gaussian with the given variance.
/// variance must be > 0 and finite.
double gaussian_pdf(double x, double variance);

/// Zero-mean Gaussian draw. variance = 0 is the point mass at the origin and
/// consumes no randomness; negative or non-finite variance throws.
double sample_real(double variance, RandomStream& rng);

/// Isotropic phase-space modulation draw: independent zero-mean Gaussians of
/// variance sigma_sq on each quadrature. A kernel of variance s^2 induces
/// exactly s^2 per quadrature in this convention (no factor-of-two split).
ComplexAmplitude sample_modulation(double sigma_sq, RandomStream& rng);

/// Mutual information of one additive-Gaussian quadrature in bits:
/// (1/2) log2(1 + signal/noise). noise_var must be > 0.
double mi_per_quadrature(double signal_var, double noise_var);

/// Both quadratures of a symmetrically modulated amplitude: log2(1 + snr).
double mi_two_quadratures(double signal_var, double noise_var);

/// Value-type view of the scalar law G_v(x), handy where a distribution is
/// passed around rather than sampled inline.
struct RealGaussian {
    double variance = 1.0;

    double pdf(double x) const { return gaussian_pdf(x, variance); }
    double sample(RandomStream& rng) const { return sample_real(variance, rng); }
};

/// Value-type view of the isotropic modulation kernel of per-quadrature
/// variance sigma_sq.
struct ComplexModulation {
    double sigma_sq = 1.0;

    ComplexAmplitude sample(RandomStream& rng) const { return sample_modulation(sigma_sq, rng); }
};

}  // namespace twqkd
