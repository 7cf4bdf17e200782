// Microbenchmarks for the hot paths: the per-round Monte Carlo cost, the
// Gaussian-state measurement update, and the closed-form security numerics.

#include <benchmark/benchmark.h>

#include <twqkd/cloner.hpp>
#include <twqkd/phase_space.hpp>
#include <twqkd/protocol.hpp>
#include <twqkd/security.hpp>

using namespace twqkd;

namespace {

void bm_raw_words(benchmark::State& state) {
    RandomStream rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(bm_raw_words);

void bm_normal_pair(benchmark::State& state) {
    RandomStream rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.standard_normal_pair());
    }
}
BENCHMARK(bm_normal_pair);

void bm_encoding_round_plain(benchmark::State& state) {
    ProtocolConfig cfg;
    cfg.off_probability = 0.0;
    ChannelModel channel;
    channel.forward_noise = 0.5;
    channel.backward_noise = 0.5;
    RandomStream rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_round(cfg, channel, rng));
    }
}
BENCHMARK(bm_encoding_round_plain);

void bm_encoding_round_attacked(benchmark::State& state) {
    ProtocolConfig cfg;
    cfg.off_probability = 0.0;
    ChannelModel channel;
    channel.attack = as_channel_hook(AttackConfig{});
    RandomStream rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_round(cfg, channel, rng));
    }
}
BENCHMARK(bm_encoding_round_attacked);

void bm_heterodyne_two_mode(benchmark::State& state) {
    const GaussianState joint = joint_output_state({1.0, -1.0}, 0.5);
    RandomStream rng(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(heterodyne(joint, 1, rng));
    }
}
BENCHMARK(bm_heterodyne_two_mode);

void bm_symplectic_eigenvalues_two_mode(benchmark::State& state) {
    const Eigen::Matrix4d cm = gqcm_joint_cm(0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(symplectic_eigenvalues(cm));
    }
}
BENCHMARK(bm_symplectic_eigenvalues_two_mode);

void bm_ppt_check(benchmark::State& state) {
    const Eigen::Matrix4d cm = gqcm_joint_cm(0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ppt_separable_two_mode(cm));
    }
}
BENCHMARK(bm_ppt_check);

void bm_threshold_numeric(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(threshold_numeric(1e-12));
    }
}
BENCHMARK(bm_threshold_numeric);

}  // namespace

BENCHMARK_MAIN();
