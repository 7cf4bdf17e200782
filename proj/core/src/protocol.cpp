#include "twqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "twqkd/errors.hpp"
#include "twqkd/gaussian.hpp"
#include "twqkd/stats.hpp"

namespace twqkd {

namespace {

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(what) + " must be finite and > 0");
    }
}

void require_noise(double value, const char* what) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    }
}

/// Heterodyne of a coherent-state label: unit outcome noise per quadrature
/// (vacuum 1/2 + measurement 1/2), added exactly once, here.
ComplexAmplitude heterodyne_label(ComplexAmplitude label, RandomStream& rng) {
    const auto [gx, gp] = rng.standard_normal_pair();
    return {label.x + gx, label.p + gp};
}

ComplexAmplitude pass_forward(ComplexAmplitude label, const ChannelModel& channel,
                              RoundRecord& record, RandomStream& rng) {
    if (channel.attack) {
        if (!record.eve) record.eve.emplace();
        return channel.attack->forward(label, *record.eve, rng);
    }
    return label + sample_modulation(channel.forward_noise, rng);
}

ComplexAmplitude pass_backward(ComplexAmplitude label, const ChannelModel& channel,
                               RoundRecord& record, RandomStream& rng) {
    if (channel.attack) {
        return channel.attack->backward(label, *record.eve, rng);
    }
    return label + sample_modulation(channel.backward_noise, rng);
}

}  // namespace

void validate(const ProtocolConfig& cfg) {
    require_positive(cfg.signal_var, "signal_var");
    require_positive(cfg.reference_var, "reference_var");
    if (!std::isfinite(cfg.off_probability) || cfg.off_probability < 0.0 ||
        cfg.off_probability > 1.0) {
        throw std::invalid_argument("off_probability must lie in [0, 1]");
    }
    if (cfg.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
}

void validate(const ChannelModel& channel) {
    require_noise(channel.forward_noise, "forward_noise");
    require_noise(channel.backward_noise, "backward_noise");
    if (channel.attack) validate(channel.attack->config());
}

RoundRecord run_round(const ProtocolConfig& cfg, const ChannelModel& channel, RandomStream& rng) {
    RoundRecord record;
    record.kind = rng.uniform() < cfg.off_probability ? RoundKind::Off : RoundKind::On;
    record.beta = sample_modulation(cfg.reference_var, rng);

    const ComplexAmplitude at_alice = pass_forward(record.beta, channel, record, rng);

    ComplexAmplitude from_alice;
    if (record.kind == RoundKind::On) {
        // Encoding round: Alice displaces the arriving state by her secret.
        record.alpha = sample_modulation(cfg.signal_var, rng);
        from_alice = at_alice + *record.alpha;
    } else {
        // Check round: Alice heterodynes what arrived and re-prepares fresh.
        record.alice_outcome = heterodyne_label(at_alice, rng);
        record.retransmit = sample_modulation(cfg.reference_var, rng);
        from_alice = *record.retransmit;
    }

    const ComplexAmplitude at_bob = pass_backward(from_alice, channel, record, rng);
    record.bob_outcome = heterodyne_label(at_bob, rng);
    if (record.kind == RoundKind::On) {
        record.bob_estimate = record.bob_outcome - record.beta;
    }

    if (channel.attack) {
        record.eve = channel.attack->finish(std::move(*record.eve), rng);
    }
    return record;
}

Transcript run_session(const ProtocolConfig& cfg, const ChannelModel& channel, unsigned workers) {
    validate(cfg);
    validate(channel);
    if (workers == 0) throw std::invalid_argument("run_session needs at least one worker");

    Transcript transcript;
    transcript.config = cfg;
    transcript.channel = channel;
    transcript.rounds.resize(cfg.rounds);

    // Every round draws only from its own (seed, index) substream and writes
    // only its own slot, so any partition of the index range gives the same
    // transcript as the serial loop.
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng = RandomStream::substream(cfg.seed, i);
            transcript.rounds[i] = run_round(cfg, channel, rng);
        }
    };

    const std::uint64_t n = cfg.rounds;
    const std::uint64_t n_workers = std::min<std::uint64_t>(workers, n);
    if (n_workers == 1) {
        run_range(0, n);
        return transcript;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::uint64_t chunk = (n + n_workers - 1) / n_workers;
    for (std::uint64_t w = 0; w < n_workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run_range, begin, end);
    }
    for (auto& worker : pool) worker.join();
    return transcript;
}

NoiseEstimate estimate_channel_noise(const Transcript& transcript) {
    SampleStats forward_stats;   // beta' - beta, both quadratures pooled
    SampleStats backward_stats;  // zeta - theta, both quadratures pooled
    std::uint64_t off_rounds = 0;
    for (const RoundRecord& record : transcript.rounds) {
        if (record.kind != RoundKind::Off) continue;
        ++off_rounds;
        const ComplexAmplitude forward_err = *record.alice_outcome - record.beta;
        const ComplexAmplitude backward_err = record.bob_outcome - *record.retransmit;
        forward_stats.add(forward_err.x);
        forward_stats.add(forward_err.p);
        backward_stats.add(backward_err.x);
        backward_stats.add(backward_err.p);
    }
    if (off_rounds < 2) {
        throw InsufficientDataError("channel-noise estimation needs at least two OFF rounds");
    }
    NoiseEstimate estimate;
    estimate.off_rounds = off_rounds;
    // Subtract the unit heterodyne-plus-vacuum noise; slightly negative
    // values are legitimate finite-sample outcomes and are not clamped.
    estimate.forward = forward_stats.sample_variance() - 1.0;
    estimate.backward = backward_stats.sample_variance() - 1.0;
    estimate.total = estimate.forward + estimate.backward;
    return estimate;
}

QuadraturePairs extract_on_pairs(const Transcript& transcript) {
    QuadraturePairs pairs;
    for (const RoundRecord& record : transcript.rounds) {
        if (record.kind != RoundKind::On) continue;
        pairs.x.emplace_back(record.alpha->x, record.bob_estimate->x);
        pairs.p.emplace_back(record.alpha->p, record.bob_estimate->p);
    }
    if (pairs.x.empty()) throw InsufficientDataError("transcript has no ON rounds");
    return pairs;
}

QuadraturePairs extract_eve_pairs(const Transcript& transcript) {
    QuadraturePairs pairs;
    for (const RoundRecord& record : transcript.rounds) {
        if (record.kind != RoundKind::On || !record.eve || !record.eve->alpha_estimate) continue;
        pairs.x.emplace_back(record.alpha->x, record.eve->alpha_estimate->x);
        pairs.p.emplace_back(record.alpha->p, record.eve->alpha_estimate->p);
    }
    return pairs;
}

EmpiricalSummary summarize_transcript(const Transcript& transcript) {
    EmpiricalSummary summary;
    for (const RoundRecord& record : transcript.rounds) {
        if (record.kind == RoundKind::On) {
            ++summary.on_rounds;
        } else {
            ++summary.off_rounds;
        }
    }

    const double signal_var = transcript.config.signal_var;
    if (summary.on_rounds >= 2) {
        const QuadraturePairs bob = extract_on_pairs(transcript);
        SampleStats pooled;
        for (const auto& [truth, estimate] : bob.x) pooled.add(estimate - truth);
        for (const auto& [truth, estimate] : bob.p) pooled.add(estimate - truth);
        summary.sigma_b_sq = pooled.sample_variance();
        summary.i_ab_bits = empirical_mi(bob.x, signal_var) + empirical_mi(bob.p, signal_var);

        const QuadraturePairs eve = extract_eve_pairs(transcript);
        if (eve.x.size() >= 2) {
            SampleStats eve_pooled;
            for (const auto& [truth, estimate] : eve.x) eve_pooled.add(estimate - truth);
            for (const auto& [truth, estimate] : eve.p) eve_pooled.add(estimate - truth);
            summary.sigma_e_sq = eve_pooled.sample_variance();
            summary.i_ae_bits =
                empirical_mi(eve.x, signal_var) + empirical_mi(eve.p, signal_var);
            summary.key_rate_gap_bits = *summary.i_ab_bits - *summary.i_ae_bits;
        }
    }
    if (summary.off_rounds >= 2) {
        summary.noise = estimate_channel_noise(transcript);
    }
    return summary;
}

}  // namespace twqkd
