#include "twqkd/security.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "twqkd/gaussian.hpp"

namespace twqkd {

namespace {

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(what) + " must be finite and > 0");
    }
}

}  // namespace

double sigma_b_sq(double omega_sq) {
    require_positive(omega_sq, "omega_sq");
    // Heterodyne unit noise plus the two channel passes: 1 + (1/2 + omega_sq).
    return 1.5 + omega_sq;
}

double sigma_e_sq(double omega_sq) {
    require_positive(omega_sq, "omega_sq");
    // Two heterodyne units (the sqrt(2)-rescaled minus port doubles one unit)
    // plus the kept backward clone's noise.
    return 2.0 + 0.25 / omega_sq;
}

bool is_secure_direct(double omega_sq) { return sigma_b_sq(omega_sq) <= sigma_e_sq(omega_sq); }

Threshold threshold_closed_form() {
    // Root of sigma_b_sq = sigma_e_sq: 4 w^2 + 1/w = 8 + ... reduces to
    // 4 w^2 - 2 w - 1 = 0 in w = omega_sq, whose positive root is
    // (1 + sqrt(5))/4; the channel noise there is 1/2 + w = (3 + sqrt(5))/4.
    const double omega_sq = 0.25 * (1.0 + std::sqrt(5.0));
    return {0.5 + omega_sq, omega_sq};
}

double threshold_numeric(double tolerance) {
    require_positive(tolerance, "tolerance");
    double lo = 1e-6;
    double hi = 10.0;
    // f(w) = sigma_e_sq - sigma_b_sq is strictly decreasing; the bracket is
    // fixed and always valid for these closed forms.
    auto f = [](double w) { return sigma_e_sq(w) - sigma_b_sq(w); };
    if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) {
        throw std::logic_error("threshold bisection bracket failed");
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at float resolution
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double omega_sq = 0.5 * (lo + hi);
    return 0.5 + omega_sq;
}

MutualInformations mutual_informations(double signal_var, double omega_sq) {
    require_positive(signal_var, "signal_var");
    return {mi_two_quadratures(signal_var, sigma_b_sq(omega_sq)),
            mi_two_quadratures(signal_var, sigma_e_sq(omega_sq))};
}

SecurityReport build_report(double signal_var, double omega_sq) {
    SecurityReport report;
    report.omega_sq = omega_sq;
    report.sigma_b_sq = sigma_b_sq(omega_sq);
    report.sigma_e_sq = sigma_e_sq(omega_sq);
    report.sigma_ch_sq = report.sigma_b_sq - 1.0;
    report.gamma_ab = signal_var / report.sigma_b_sq;
    report.gamma_ae = signal_var / report.sigma_e_sq;
    const MutualInformations mi = mutual_informations(signal_var, omega_sq);
    report.i_ab_bits = mi.i_ab_bits;
    report.i_ae_bits = mi.i_ae_bits;
    report.key_rate_gap_bits = report.i_ab_bits - report.i_ae_bits;
    report.secure = is_secure_direct(omega_sq);
    report.threshold_sigma_ch_sq = threshold_closed_form().sigma_ch_sq;
    report.one_way_threshold = kOneWayThreshold;

    // The variance, SNR, and MI orderings are mathematically equivalent;
    // computing all three and comparing guards the implementation. Rounding
    // can legitimately collapse the orderings only when the variances sit
    // within a few ulps of the crossing itself, so that knife edge is the
    // one tolerated discrepancy.
    const bool by_gamma = report.gamma_ab >= report.gamma_ae;
    const bool by_mi = report.key_rate_gap_bits >= 0.0;
    if (report.secure != by_gamma || report.secure != by_mi) {
        const double knife_edge = 8.0 * std::numeric_limits<double>::epsilon() * report.sigma_e_sq;
        if (std::abs(report.sigma_b_sq - report.sigma_e_sq) > knife_edge) {
            throw std::logic_error("security predicates disagree; numerics bug");
        }
    }
    return report;
}

}  // namespace twqkd
