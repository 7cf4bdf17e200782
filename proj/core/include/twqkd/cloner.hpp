#pragma once

#include <Eigen/Dense>

#include "twqkd/complex_amplitude.hpp"
#include "twqkd/phase_space.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

/// Noise pair of a 1 -> 2 Gaussian cloner: clone i carries added isotropic
/// noise of per-quadrature variance sigma_i^2. Construction enforces the
/// uncertainty bound sigma1^2 * sigma2^2 >= 1/4; pairs meeting it with
/// equality (to 1e-12) are the optimal machines.
class GqcmParams {
public:
    GqcmParams(double sigma1_sq, double sigma2_sq);

    double sigma1_sq() const { return sigma1_sq_; }
    double sigma2_sq() const { return sigma2_sq_; }
    bool optimal() const;
    bool symmetric() const { return sigma1_sq_ == sigma2_sq_; }

    /// Optimal asymmetric machine: clone 1 noise s^2, clone 2 noise 1/(4 s^2).
    static GqcmParams optimal_pair(double sigma1_sq);

private:
    double sigma1_sq_;
    double sigma2_sq_;
};

/// Joint two-clone covariance of the optimal machine of clone-1 noise s^2
/// applied to a coherent input, modes ordered (clone1, clone2):
///
///   V = 1/2 [ (1 + 2 s^2) I        I      ]
///           [       I        (1 + 1/(2 s^2)) I ]
///
/// Both clones sit above vacuum noise, but the cross-correlation keeps the
/// joint state exactly on the physical boundary (smallest symplectic
/// eigenvalue 1/2 for every s^2 > 0).
Eigen::Matrix4d gqcm_joint_cm(double sigma_sq);

/// Joint Gaussian state of both clones for a coherent input label.
GaussianState joint_output_state(ComplexAmplitude input, double sigma_sq);

/// One draw of the symmetric optimal cloner (s^2 = 1/2) in its classical
/// form: both clones are coherent states displaced by one shared Gaussian
/// shift of per-quadrature variance 1/2. Only this symmetric point admits
/// such a mixture-of-products decomposition; it reproduces the joint
/// covariance above exactly, including the off-diagonal block.
struct ClonePairSample {
    ComplexAmplitude clone1;
    ComplexAmplitude clone2;
    ComplexAmplitude shared_shift;  ///< the one kernel draw both clones absorbed
};

ClonePairSample sample_symmetric_pair(ComplexAmplitude input, RandomStream& rng);

/// Marginal draw of one clone of the optimal machine with clone-"sent" noise
/// omega_sq: the coherent label handed onward, input + nu with
/// nu ~ kernel(omega_sq).
ComplexAmplitude sample_asymmetric_sent_clone(ComplexAmplitude input, double omega_sq,
                                              RandomStream& rng);

/// Marginal draw of the complementary kept clone: input + lambda with
/// lambda ~ kernel(1/(4 omega_sq)). Sampled independently of the sent clone;
/// the asymmetric machine has no classical joint decomposition, so only the
/// marginals are meaningful as coherent labels.
ComplexAmplitude sample_asymmetric_kept_clone(ComplexAmplitude input, double omega_sq,
                                              RandomStream& rng);

}  // namespace twqkd
