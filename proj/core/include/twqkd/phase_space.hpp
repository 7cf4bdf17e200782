#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "twqkd/complex_amplitude.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

/// Symplectic eigenvalues this close to the physical/separable boundary (1/2)
/// still count as on the right side of it.
inline constexpr double kPhysicalityTol = 1e-9;

/// Beam-splitter coefficients, stored as amplitude transmittance/reflectivity
/// with t, r >= 0 and t^2 + r^2 = 1. Acting on ordered inputs (a, b):
///   out_plus  = r a + t b
///   out_minus = t a - r b
/// so for the balanced splitter a displacement common to both inputs cancels
/// on the minus port while independent content survives there.
class BeamSplitter {
public:
    BeamSplitter(double t, double r);

    static BeamSplitter balanced();
    /// Splitter with t = sqrt(t_sq), r = sqrt(1 - t_sq); 0 <= t_sq <= 1.
    static BeamSplitter from_transmittance(double t_sq);

    double t() const { return t_; }
    double r() const { return r_; }
    bool is_balanced() const;

private:
    double t_;
    double r_;
};

/// An n-mode Gaussian state: mean vector (length 2n) and symmetric covariance
/// matrix (2n x 2n) in quadrature order (x1, p1, x2, p2, ...). The vacuum has
/// variance 1/2 per quadrature. n = 0 (the empty state) is allowed so that
/// measuring out the last mode has a well-defined result.
class GaussianState {
public:
    /// The empty (zero-mode) state, e.g. what remains after measuring the
    /// last mode away.
    GaussianState() = default;

    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }

    ComplexAmplitude mode_mean(int mode) const;
    Eigen::Matrix2d mode_cov(int mode) const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// n-mode vacuum: zero mean, covariance I/2. n >= 1.
GaussianState vacuum(int n_modes);

/// Single-mode coherent state centered on the given label.
GaussianState coherent(ComplexAmplitude amp);

/// Product state a (x) b, modes of `a` first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Displace one mode: shifts that mode's mean, covariance untouched.
GaussianState displace(const GaussianState& state, int mode, ComplexAmplitude amp);

/// Classically modulate one mode: adds sigma_sq >= 0 to both of its diagonal
/// covariance entries (Gaussian displacement noise, mean untouched).
GaussianState add_modulation_noise(const GaussianState& state, int mode, double sigma_sq);

/// Interfere two distinct modes on a beam splitter; mode_a takes the plus
/// port, mode_b the minus port.
GaussianState apply_beam_splitter(const GaussianState& state, int mode_a, int mode_b,
                                  const BeamSplitter& bs);

/// Keep the listed modes (in the given order), trace out the rest.
GaussianState partial_trace(const GaussianState& state, std::span<const int> keep);

struct HeterodyneResult {
    ComplexAmplitude outcome;
    GaussianState rest;  ///< conditional state of the unmeasured modes
};

/// Heterodyne one mode: samples (x, p) from the Gaussian of covariance
/// (mode covariance + I/2), then conditions the remaining modes on the
/// outcome. A coherent-state mode therefore shows unit outcome variance per
/// quadrature: 1/2 intrinsic + 1/2 measurement.
HeterodyneResult heterodyne(const GaussianState& state, int mode, RandomStream& rng);

/// Symplectic spectrum of a symmetric positive-definite covariance matrix,
/// ascending. Closed-form for one and two modes, general solver above that.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// True when every symplectic eigenvalue is >= 1/2 - kPhysicalityTol.
bool is_physical(const Eigen::MatrixXd& cov);

/// Smallest symplectic eigenvalue of the partial transpose (second mode's
/// momentum sign flipped) of a two-mode covariance matrix.
double pt_min_symplectic_eigenvalue(const Eigen::Matrix4d& cov);

/// Separability of a two-mode Gaussian state: separable iff the partially
/// transposed covariance is still physical. Requires a physical input.
bool ppt_separable_two_mode(const Eigen::Matrix4d& cov);

}  // namespace twqkd
