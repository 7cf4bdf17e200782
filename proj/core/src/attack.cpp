#include "twqkd/attack.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twqkd/cloner.hpp"

namespace twqkd {

namespace {

/// Heterodyne of a coherent-state label: the vacuum half-unit and the
/// measurement half-unit enter here, exactly once, as unit noise per
/// quadrature on top of the label.
ComplexAmplitude heterodyne_label(ComplexAmplitude label, RandomStream& rng) {
    const auto [gx, gp] = rng.standard_normal_pair();
    return {label.x + gx, label.p + gp};
}

}  // namespace

void validate(const AttackConfig& cfg) {
    if (!std::isfinite(cfg.omega_sq) || cfg.omega_sq <= 0.0) {
        throw std::invalid_argument("attack omega_sq must be finite and > 0");
    }
}

InterceptResult intercept_forward(ComplexAmplitude input, RandomStream& rng) {
    const ClonePairSample pair = sample_symmetric_pair(input, rng);
    return {pair.clone1, pair.clone2};
}

InterceptResult intercept_backward(ComplexAmplitude input, const AttackConfig& cfg,
                                   RandomStream& rng) {
    validate(cfg);
    InterceptResult result;
    result.passed_on = sample_asymmetric_sent_clone(input, cfg.omega_sq, rng);
    result.kept = sample_asymmetric_kept_clone(input, cfg.omega_sq, rng);
    return result;
}

EveRecord combine_and_measure(EveRecord record, const AttackConfig& cfg, RandomStream& rng) {
    if (!record.kept_forward_clone || !record.kept_backward_clone) {
        throw std::logic_error("combine_and_measure needs both kept clones");
    }
    // Backward clone on the plus-port input, forward clone on the other, so
    // the minus-port label is t * backward - r * forward; balanced, that is
    // (secret displacement + kept-clone noise) / sqrt(2) with the reference
    // and the forward-cloner shift both cancelled.
    const ComplexAmplitude bwd = *record.kept_backward_clone;
    const ComplexAmplitude fwd = *record.kept_forward_clone;
    const ComplexAmplitude plus_label = cfg.bs.r() * bwd + cfg.bs.t() * fwd;
    const ComplexAmplitude minus_label = cfg.bs.t() * bwd - cfg.bs.r() * fwd;

    record.plus_port_outcome = heterodyne_label(plus_label, rng);
    record.minus_port_outcome = heterodyne_label(minus_label, rng);
    if (cfg.bs.is_balanced()) {
        record.alpha_estimate = std::numbers::sqrt2 * (*record.minus_port_outcome);
    }
    return record;
}

EveRecord direct_heterodyne(EveRecord record, RandomStream& rng) {
    if (!record.kept_forward_clone || !record.kept_backward_clone) {
        throw std::logic_error("direct_heterodyne needs both kept clones");
    }
    record.forward_outcome = heterodyne_label(*record.kept_forward_clone, rng);
    record.backward_outcome = heterodyne_label(*record.kept_backward_clone, rng);
    // Best beta-cancelling linear combination without the beam splitter: the
    // backward clone carries alpha + beta (+ noise), the forward clone beta
    // (+ the same cloner shift), so their difference estimates alpha.
    record.alpha_estimate = *record.backward_outcome - *record.forward_outcome;
    return record;
}

ChannelHook::ChannelHook(AttackConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

ComplexAmplitude ChannelHook::forward(ComplexAmplitude label, EveRecord& record,
                                      RandomStream& rng) const {
    const InterceptResult result = intercept_forward(label, rng);
    record.kept_forward_clone = result.kept;
    return result.passed_on;
}

ComplexAmplitude ChannelHook::backward(ComplexAmplitude label, EveRecord& record,
                                       RandomStream& rng) const {
    const InterceptResult result = intercept_backward(label, cfg_, rng);
    record.kept_backward_clone = result.kept;
    return result.passed_on;
}

EveRecord ChannelHook::finish(EveRecord record, RandomStream& rng) const {
    switch (cfg_.strategy) {
        case EveStrategy::BsCombine:
            return combine_and_measure(std::move(record), cfg_, rng);
        case EveStrategy::DirectHeterodyne:
            return direct_heterodyne(std::move(record), rng);
    }
    throw std::logic_error("unknown eavesdropper strategy");
}

}  // namespace twqkd
