#pragma once

namespace twqkd {

/// Security threshold of the comparable one-way protocol, as channel noise
/// per quadrature: above 1/2 (one cloning-machine worth) it yields no key.
inline constexpr double kOneWayThreshold = 0.5;

/// Receiver-side error variance per quadrature under the two-cloner attack
/// of backward sent-clone noise omega_sq: 3/2 + omega_sq.
double sigma_b_sq(double omega_sq);

/// Eavesdropper error variance per quadrature under her best combination of
/// the kept clones: 2 + 1/(4 omega_sq).
double sigma_e_sq(double omega_sq);

/// Direct reconciliation is secure iff Bob's error variance does not exceed
/// Eve's at this attack strength.
bool is_secure_direct(double omega_sq);

struct Threshold {
    double sigma_ch_sq;  ///< observed channel noise per pass at the crossing
    double omega_sq;     ///< attack strength at the crossing
};

/// Crossing point of the two error variances, in closed form:
/// omega_sq = (1 + sqrt(5))/4, sigma_ch_sq = (3 + sqrt(5))/4.
Threshold threshold_closed_form();

/// Channel noise at the same crossing, found by bisection of
/// sigma_e_sq - sigma_b_sq (strictly decreasing) over omega_sq in [1e-6, 10]
/// to the given tolerance. Pure root-finding on the closed-form variances;
/// exists as an independent cross-check of threshold_closed_form.
double threshold_numeric(double tolerance);

struct MutualInformations {
    double i_ab_bits;
    double i_ae_bits;
};

/// Closed-form mutual informations (bits, both quadratures) for secret
/// modulation variance signal_var per quadrature.
MutualInformations mutual_informations(double signal_var, double omega_sq);

/// The full closed-form security picture at one attack strength. The three
/// equivalent orderings (error variances, SNRs, mutual informations) are
/// cross-checked against each other; disagreement means a numerics bug and
/// throws std::logic_error.
struct SecurityReport {
    double omega_sq = 0.0;
    double sigma_ch_sq = 0.0;  ///< channel noise per pass, 1/2 + omega_sq
    double sigma_b_sq = 0.0;
    double sigma_e_sq = 0.0;
    double gamma_ab = 0.0;  ///< signal_var / sigma_b_sq
    double gamma_ae = 0.0;
    double i_ab_bits = 0.0;
    double i_ae_bits = 0.0;
    double key_rate_gap_bits = 0.0;  ///< i_ab - i_ae
    bool secure = false;
    double threshold_sigma_ch_sq = 0.0;
    double one_way_threshold = kOneWayThreshold;
};

SecurityReport build_report(double signal_var, double omega_sq);

}  // namespace twqkd
