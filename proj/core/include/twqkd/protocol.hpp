#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "twqkd/attack.hpp"
#include "twqkd/complex_amplitude.hpp"
#include "twqkd/random.hpp"

namespace twqkd {

struct ProtocolConfig {
    double signal_var = 100.0;      ///< per-quadrature variance of the secret displacement
    double reference_var = 1000.0;  ///< per-quadrature variance of the reference preparation
    double off_probability = 0.1;   ///< chance a round runs in message (OFF) mode
    std::uint64_t rounds = 100000;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on non-positive variances, off_probability
/// outside [0, 1], or zero rounds.
void validate(const ProtocolConfig& cfg);

/// What happens between the two parties. Without an attack each pass adds
/// independent isotropic Gaussian noise of the given per-quadrature variance;
/// with an attack the hook replaces both passes entirely.
struct ChannelModel {
    double forward_noise = 0.0;
    double backward_noise = 0.0;
    std::optional<ChannelHook> attack;
};

void validate(const ChannelModel& channel);

enum class RoundKind { On, Off };

/// One protocol round. ON rounds carry `alpha` and `bob_estimate`; OFF rounds
/// carry `alice_outcome` and `retransmit`; no record carries both sets.
struct RoundRecord {
    RoundKind kind = RoundKind::On;

    ComplexAmplitude beta;                           ///< Bob's reference preparation
    std::optional<ComplexAmplitude> alpha;           ///< ON: Alice's secret displacement
    std::optional<ComplexAmplitude> alice_outcome;   ///< OFF: Alice's heterodyne of the arriving reference
    std::optional<ComplexAmplitude> retransmit;      ///< OFF: the fresh state Alice sends back
    ComplexAmplitude bob_outcome;                    ///< Bob's final heterodyne outcome
    std::optional<ComplexAmplitude> bob_estimate;    ///< ON: bob_outcome - beta
    std::optional<EveRecord> eve;                    ///< present iff the channel carried an attack
};

struct Transcript {
    ProtocolConfig config;
    ChannelModel channel;
    std::vector<RoundRecord> rounds;
};

/// Run one round against the channel. Draw order within the stream is fixed
/// (mode coin, Bob's preparation, forward pass, the in-station step, backward
/// pass, Bob's heterodyne, then Eve's measurements), so a round is
/// reproducible from its stream alone; run_session hands each round
/// RandomStream::substream(seed, round_index).
RoundRecord run_round(const ProtocolConfig& cfg, const ChannelModel& channel, RandomStream& rng);

/// Run a full session. Rounds are split across `workers` threads, but each
/// round's randomness comes only from its own substream, so the transcript is
/// byte-identical for every worker count. workers = 0 is invalid.
Transcript run_session(const ProtocolConfig& cfg, const ChannelModel& channel,
                       unsigned workers = 1);

/// Channel-noise estimate from the OFF rounds: excess variance (outcome
/// variance minus the unit coherent-heterodyne floor), pooled over x and p.
/// forward uses Alice's heterodyne of the arriving reference, backward Bob's
/// heterodyne of her retransmission. Throws InsufficientDataError when fewer
/// than two OFF rounds are available.
struct NoiseEstimate {
    double forward = 0.0;
    double backward = 0.0;
    double total = 0.0;  ///< forward + backward
    std::uint64_t off_rounds = 0;
};

NoiseEstimate estimate_channel_noise(const Transcript& transcript);

/// Per-quadrature (truth, estimate) pairs from the ON rounds.
struct QuadraturePairs {
    std::vector<std::pair<double, double>> x;
    std::vector<std::pair<double, double>> p;
};

/// Bob's view: (alpha, bob_estimate) per quadrature. Throws
/// InsufficientDataError when the transcript has no ON rounds.
QuadraturePairs extract_on_pairs(const Transcript& transcript);

/// Eve's view: (alpha, alpha_estimate) per quadrature, over ON rounds whose
/// record carries an estimate. Empty when the channel had no attack.
QuadraturePairs extract_eve_pairs(const Transcript& transcript);

/// Empirical counterparts of the closed-form security quantities, computed
/// from a transcript: error variances pooled over x and p, and plug-in
/// mutual informations (bits, both quadratures).
struct EmpiricalSummary {
    std::uint64_t on_rounds = 0;
    std::uint64_t off_rounds = 0;
    std::optional<double> sigma_b_sq;    ///< absent below two ON rounds
    std::optional<double> sigma_e_sq;    ///< absent without attack estimates
    std::optional<double> i_ab_bits;
    std::optional<double> i_ae_bits;
    std::optional<double> key_rate_gap_bits;
    std::optional<NoiseEstimate> noise;  ///< absent below two OFF rounds
};

EmpiricalSummary summarize_transcript(const Transcript& transcript);

}  // namespace twqkd
