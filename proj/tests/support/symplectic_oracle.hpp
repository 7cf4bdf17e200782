#pragma once

// Brute-force symplectic spectrum used to cross-check the library's closed
// forms.  The eigenvalues of Omega * V come in conjugate pairs +-(i nu); the
// positive imaginary parts are the symplectic eigenvalues.  This goes through
// a general (non-symmetric) eigensolver on purpose so it shares no code path
// with the production routine for one- and two-mode inputs.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

namespace twqkd::test {

inline std::vector<double> brute_force_symplectic(const Eigen::MatrixXd& cov) {
    const Eigen::Index dim = cov.rows();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index m = 0; m < dim / 2; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * cov, false);
    std::vector<double> nus;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double imag = solver.eigenvalues()(i).imag();
        if (imag > 0.0) {
            nus.push_back(imag);
        }
    }
    std::sort(nus.begin(), nus.end());
    return nus;
}

}  // namespace twqkd::test
