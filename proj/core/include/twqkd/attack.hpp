#pragma once

#include <optional>

#include "twqkd/complex_amplitude.hpp"
#include "twqkd/phase_space.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

/// How the eavesdropper digests her two kept clones at the end of a round.
enum class EveStrategy {
    /// Interfere the kept clones on a beam splitter, heterodyne both output
    /// ports; with the balanced splitter the minus port isolates the secret
    /// displacement up to a 1/sqrt(2) scale.
    BsCombine,
    /// Heterodyne each kept clone separately and subtract the outcomes.
    DirectHeterodyne,
};

struct AttackConfig {
    /// Per-quadrature noise the backward cloner adds to the clone sent on to
    /// the receiver; the kept clone then carries 1/(4 omega_sq). Must be > 0.
    double omega_sq = 0.5;
    BeamSplitter bs = BeamSplitter::balanced();
    EveStrategy strategy = EveStrategy::BsCombine;
};

/// Throws std::invalid_argument unless omega_sq is positive and finite.
void validate(const AttackConfig& cfg);

/// Everything the eavesdropper accumulates in one round. Fields fill in as
/// the round progresses: the intercepts set the kept clones, the measurement
/// stage sets the outcomes for its strategy plus (when defined) the final
/// displacement estimate.
struct EveRecord {
    std::optional<ComplexAmplitude> kept_forward_clone;
    std::optional<ComplexAmplitude> kept_backward_clone;

    // BsCombine outcomes.
    std::optional<ComplexAmplitude> plus_port_outcome;
    std::optional<ComplexAmplitude> minus_port_outcome;

    // DirectHeterodyne outcomes.
    std::optional<ComplexAmplitude> forward_outcome;
    std::optional<ComplexAmplitude> backward_outcome;

    /// Estimate of the sender's secret displacement; only defined when the
    /// strategy admits a canonical unbiased combination (balanced splitter,
    /// or the direct difference).
    std::optional<ComplexAmplitude> alpha_estimate;
};

struct InterceptResult {
    ComplexAmplitude passed_on;  ///< coherent label continuing down the line
    ComplexAmplitude kept;       ///< coherent label of the clone Eve stores
};

/// Forward-line intercept: the symmetric optimal cloner, so both the relayed
/// clone and the kept one are input + mu for one shared mu of per-quadrature
/// variance 1/2.
InterceptResult intercept_forward(ComplexAmplitude input, RandomStream& rng);

/// Backward-line intercept: the asymmetric optimal cloner with sent-clone
/// noise omega_sq and kept-clone noise 1/(4 omega_sq), drawn independently.
InterceptResult intercept_backward(ComplexAmplitude input, const AttackConfig& cfg,
                                   RandomStream& rng);

/// BsCombine measurement stage: interfere the two kept clones on cfg.bs
/// (backward clone on the plus-port input, forward clone on the other) and
/// heterodyne both ports. With the balanced splitter the minus-port mean is
/// (alpha + lambda)/sqrt(2), so alpha_estimate = sqrt(2) * minus outcome.
/// Throws std::logic_error when either kept clone is missing.
EveRecord combine_and_measure(EveRecord record, const AttackConfig& cfg, RandomStream& rng);

/// DirectHeterodyne measurement stage: heterodyne each kept clone; the
/// estimate is backward outcome minus forward outcome. Throws
/// std::logic_error when either kept clone is missing.
EveRecord direct_heterodyne(EveRecord record, RandomStream& rng);

/// Per-round channel adapter used by the protocol layer: the forward pass is
/// the symmetric cloner, the backward pass the asymmetric one, and finish()
/// runs the configured measurement stage.
class ChannelHook {
public:
    explicit ChannelHook(AttackConfig cfg);

    const AttackConfig& config() const { return cfg_; }

    ComplexAmplitude forward(ComplexAmplitude label, EveRecord& record, RandomStream& rng) const;
    ComplexAmplitude backward(ComplexAmplitude label, EveRecord& record, RandomStream& rng) const;
    EveRecord finish(EveRecord record, RandomStream& rng) const;

private:
    AttackConfig cfg_;
};

inline ChannelHook as_channel_hook(AttackConfig cfg) { return ChannelHook(std::move(cfg)); }

}  // namespace twqkd
