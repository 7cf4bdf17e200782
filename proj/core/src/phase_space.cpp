#include "twqkd/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace twqkd {

namespace {

constexpr double kSymmetryTol = 1e-12;

void require_mode(const GaussianState& state, int mode, const char* op) {
    if (mode < 0 || mode >= state.n_modes()) {
        throw std::out_of_range(std::string(op) + ": mode " + std::to_string(mode) +
                                " out of range for " + std::to_string(state.n_modes()) +
                                " mode(s)");
    }
}

// Symplectic form of n modes in (x1, p1, x2, p2, ...) ordering.
Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

}  // namespace

BeamSplitter::BeamSplitter(double t, double r) : t_(t), r_(r) {
    if (!std::isfinite(t) || !std::isfinite(r) || t < 0.0 || r < 0.0) {
        throw std::invalid_argument("beam splitter coefficients must be finite and >= 0");
    }
    if (std::abs(t * t + r * r - 1.0) > kSymmetryTol) {
        throw std::invalid_argument("beam splitter needs t^2 + r^2 = 1");
    }
}

BeamSplitter BeamSplitter::balanced() {
    const double c = 1.0 / std::numbers::sqrt2;
    return BeamSplitter(c, c);
}

BeamSplitter BeamSplitter::from_transmittance(double t_sq) {
    if (!std::isfinite(t_sq) || t_sq < 0.0 || t_sq > 1.0) {
        throw std::invalid_argument("transmittance must lie in [0, 1]");
    }
    return BeamSplitter(std::sqrt(t_sq), std::sqrt(1.0 - t_sq));
}

bool BeamSplitter::is_balanced() const { return std::abs(t_ * t_ - 0.5) < kSymmetryTol; }

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto dim = mean_.size();
    if (dim % 2 != 0) throw std::invalid_argument("mean length must be even");
    if (cov_.rows() != dim || cov_.cols() != dim) {
        throw std::invalid_argument("covariance dimensions must match the mean");
    }
    if (dim > 0 && (cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw std::invalid_argument("covariance must be symmetric");
    }
}

ComplexAmplitude GaussianState::mode_mean(int mode) const {
    require_mode(*this, mode, "mode_mean");
    return {mean_(2 * mode), mean_(2 * mode + 1)};
}

Eigen::Matrix2d GaussianState::mode_cov(int mode) const {
    require_mode(*this, mode, "mode_cov");
    return cov_.block<2, 2>(2 * mode, 2 * mode);
}

GaussianState vacuum(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("vacuum needs at least one mode");
    return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                         0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState coherent(ComplexAmplitude amp) {
    Eigen::Vector2d mean(amp.x, amp.p);
    return GaussianState(mean, 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean(), b.mean();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return GaussianState(std::move(mean), std::move(cov));
}

GaussianState displace(const GaussianState& state, int mode, ComplexAmplitude amp) {
    require_mode(state, mode, "displace");
    Eigen::VectorXd mean = state.mean();
    mean(2 * mode) += amp.x;
    mean(2 * mode + 1) += amp.p;
    return GaussianState(std::move(mean), state.cov());
}

GaussianState add_modulation_noise(const GaussianState& state, int mode, double sigma_sq) {
    require_mode(state, mode, "add_modulation_noise");
    if (!std::isfinite(sigma_sq) || sigma_sq < 0.0) {
        throw std::invalid_argument("modulation variance must be finite and >= 0");
    }
    Eigen::MatrixXd cov = state.cov();
    cov(2 * mode, 2 * mode) += sigma_sq;
    cov(2 * mode + 1, 2 * mode + 1) += sigma_sq;
    return GaussianState(state.mean(), std::move(cov));
}

GaussianState apply_beam_splitter(const GaussianState& state, int mode_a, int mode_b,
                                  const BeamSplitter& bs) {
    require_mode(state, mode_a, "apply_beam_splitter");
    require_mode(state, mode_b, "apply_beam_splitter");
    if (mode_a == mode_b) throw std::invalid_argument("beam splitter needs two distinct modes");

    // Orthogonal 2x2 mixing acting identically on the x and p blocks; the
    // plus port lands on mode_a, the minus port on mode_b.
    const auto dim = state.mean().size();
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
    for (int q = 0; q < 2; ++q) {  // q = 0 for x, 1 for p
        const auto ia = 2 * mode_a + q;
        const auto ib = 2 * mode_b + q;
        s(ia, ia) = bs.r();
        s(ia, ib) = bs.t();
        s(ib, ia) = bs.t();
        s(ib, ib) = -bs.r();
    }
    Eigen::VectorXd mean = s * state.mean();
    Eigen::MatrixXd cov = s * state.cov() * s.transpose();
    return GaussianState(std::move(mean), std::move(cov));
}

GaussianState partial_trace(const GaussianState& state, std::span<const int> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be non-empty");
    for (int mode : keep) require_mode(state, mode, "partial_trace");

    const auto n_keep = static_cast<Eigen::Index>(keep.size());
    Eigen::VectorXd mean(2 * n_keep);
    Eigen::MatrixXd cov(2 * n_keep, 2 * n_keep);
    for (Eigen::Index i = 0; i < n_keep; ++i) {
        mean.segment<2>(2 * i) = state.mean().segment<2>(2 * keep[i]);
        for (Eigen::Index j = 0; j < n_keep; ++j) {
            cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * keep[i], 2 * keep[j]);
        }
    }
    return GaussianState(std::move(mean), std::move(cov));
}

HeterodyneResult heterodyne(const GaussianState& state, int mode, RandomStream& rng) {
    require_mode(state, mode, "heterodyne");
    const auto dim = state.mean().size();

    // Outcome law: Gaussian with the mode's mean and covariance + I/2.
    const Eigen::Matrix2d outcome_cov =
        state.mode_cov(mode) + 0.5 * Eigen::Matrix2d::Identity();

    // Sample via the Cholesky factor so quadrature correlations survive.
    Eigen::LLT<Eigen::Matrix2d> llt(outcome_cov);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("heterodyne: outcome covariance not positive-definite");
    }
    const auto [g1, g2] = rng.standard_normal_pair();
    const Eigen::Vector2d mode_mean(state.mean()(2 * mode), state.mean()(2 * mode + 1));
    const Eigen::Vector2d outcome_vec =
        mode_mean + llt.matrixL() * Eigen::Vector2d(g1, g2);

    HeterodyneResult result;
    result.outcome = {outcome_vec(0), outcome_vec(1)};

    // Condition the remaining modes on the outcome (standard Gaussian update
    // with the measured mode's noisy covariance).
    const auto n_rest = dim / 2 - 1;
    Eigen::VectorXd rest_mean(2 * n_rest);
    Eigen::MatrixXd rest_cov(2 * n_rest, 2 * n_rest);
    Eigen::MatrixXd cross(2 * n_rest, 2);  // rest rows, measured columns
    Eigen::Index row = 0;
    for (int m = 0; m < state.n_modes(); ++m) {
        if (m == mode) continue;
        rest_mean.segment<2>(row) = state.mean().segment<2>(2 * m);
        cross.block<2, 2>(row, 0) = state.cov().block<2, 2>(2 * m, 2 * mode);
        Eigen::Index col = 0;
        for (int k = 0; k < state.n_modes(); ++k) {
            if (k == mode) continue;
            rest_cov.block<2, 2>(row, col) = state.cov().block<2, 2>(2 * m, 2 * k);
            col += 2;
        }
        row += 2;
    }
    if (n_rest > 0) {
        const Eigen::Matrix2d noisy_cov_inv = outcome_cov.inverse();
        rest_mean += cross * noisy_cov_inv * (outcome_vec - mode_mean);
        rest_cov -= cross * noisy_cov_inv * cross.transpose();
        // Re-symmetrize against roundoff drift before the ctor's check.
        rest_cov = 0.5 * (rest_cov + rest_cov.transpose()).eval();
    }
    result.rest = GaussianState(std::move(rest_mean), std::move(rest_cov));
    return result;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
    const auto dim = cov.rows();
    if (dim == 0 || dim % 2 != 0 || cov.cols() != dim) {
        throw std::invalid_argument("symplectic spectrum needs a 2n x 2n matrix");
    }
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw std::invalid_argument("symplectic spectrum needs a symmetric matrix");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("symplectic spectrum needs a positive-definite matrix");
    }

    const int n = static_cast<int>(dim / 2);
    if (n == 1) {
        return {std::sqrt(cov.determinant())};
    }
    if (n == 2) {
        // Two-mode closed form: nu^2 = (Delta -+ sqrt(Delta^2 - 4 det V)) / 2
        // with Delta = det A + det B + 2 det C. The smaller root is computed
        // as (2 det V) / (Delta + sqrt(...)) to dodge cancellation when the
        // discriminant nearly exhausts Delta.
        const double det_a = cov.block<2, 2>(0, 0).determinant();
        const double det_b = cov.block<2, 2>(2, 2).determinant();
        const double det_c = cov.block<2, 2>(0, 2).determinant();
        const double det_v = cov.determinant();
        const double delta = det_a + det_b + 2.0 * det_c;
        // Degenerate pairs (nu+ = nu-, e.g. two-mode squeezed states) reach
        // this formula with the discriminant at roundoff scale, and sqrt
        // would blow that noise up by ~1e8; collapse anything below the
        // cancellation resolution to an exact double root instead.
        const double scale = det_a + det_b + 2.0 * std::abs(det_c);
        const double disc_floor =
            32.0 * std::numeric_limits<double>::epsilon() * scale * scale;
        const double disc_sq = delta * delta - 4.0 * det_v;
        const double disc = disc_sq <= disc_floor ? 0.0 : std::sqrt(disc_sq);
        const double nu_plus_sq = 0.5 * (delta + disc);
        const double nu_minus_sq = (2.0 * det_v) / (delta + disc);
        std::vector<double> nus{std::sqrt(nu_minus_sq), std::sqrt(nu_plus_sq)};
        std::sort(nus.begin(), nus.end());
        return nus;
    }

    // General case: the eigenvalues of Omega V come in +- i nu pairs.
    Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * cov, false);
    std::vector<double> nus;
    nus.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double imag = solver.eigenvalues()(i).imag();
        if (imag > 0.0) nus.push_back(imag);
    }
    if (nus.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("symplectic spectrum: eigenvalues did not pair up");
    }
    std::sort(nus.begin(), nus.end());
    return nus;
}

bool is_physical(const Eigen::MatrixXd& cov) {
    const auto nus = symplectic_eigenvalues(cov);
    return nus.front() >= 0.5 - kPhysicalityTol;
}

double pt_min_symplectic_eigenvalue(const Eigen::Matrix4d& cov) {
    // Partial transposition of mode 2 flips the sign of p2.
    Eigen::Matrix4d flip = Eigen::Matrix4d::Identity();
    flip(3, 3) = -1.0;
    const Eigen::MatrixXd transposed = flip * cov * flip;
    return symplectic_eigenvalues(transposed).front();
}

bool ppt_separable_two_mode(const Eigen::Matrix4d& cov) {
    if (!is_physical(cov)) {
        throw std::invalid_argument("ppt_separable_two_mode: input covariance is unphysical");
    }
    return pt_min_symplectic_eigenvalue(cov) >= 0.5 - kPhysicalityTol;
}

}  // namespace twqkd
