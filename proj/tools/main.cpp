// twqkd — command-line front end: closed-form security tables, Monte Carlo
// protocol runs with transcript/report persistence, threshold computation,
// and separability scans of the cloner's joint output.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twqkd/errors.hpp"
#include "twqkd/cloner.hpp"
#include "twqkd/gaussian.hpp"
#include "twqkd/io.hpp"
#include "twqkd/phase_space.hpp"
#include "twqkd/protocol.hpp"
#include "twqkd/security.hpp"
#include "twqkd/version.hpp"

namespace {

using namespace twqkd;

/// Table output convention: ten significant digits everywhere.
std::string fmt10(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

RunManifest make_manifest(std::string command, nlohmann::json parameters, std::uint64_t seed) {
    RunManifest manifest;
    manifest.command = std::move(command);
    manifest.parameters = std::move(parameters);
    manifest.seed = seed;
    manifest.tool_version = kVersion;
    manifest.timestamp = iso8601_utc_now();
    return manifest;
}

std::vector<double> positive_grid(const std::string& spec, const char* what) {
    const std::vector<double> grid = parse_range_spec(spec);
    for (double value : grid) {
        if (value <= 0.0) {
            throw std::invalid_argument(std::string(what) + " grid values must be > 0");
        }
    }
    return grid;
}

struct AnalyzeArgs {
    std::string grid = "0.1:1.6:16";
    double signal_var = 100.0;
    std::string svg_path;
};

struct SimulateArgs {
    std::uint64_t rounds = 100000;
    double signal_var = 100.0;
    double reference_var = 1000.0;
    double omega_sq = 0.5;
    double off_probability = 0.1;
    std::uint64_t seed = 0;
    std::string out = "run";
    unsigned workers = 1;
};

int cmd_analyze(const AnalyzeArgs& args) {
    const std::vector<double> grid = positive_grid(args.grid, "omega^2");

    std::printf("%12s %14s %14s %14s %14s %14s %7s\n", "omega_sq", "sigma_ch_sq", "sigma_b_sq",
                "sigma_e_sq", "i_ab_bits", "i_ae_bits", "secure");
    for (double omega_sq : grid) {
        const SecurityReport report = build_report(args.signal_var, omega_sq);
        std::printf("%12s %14s %14s %14s %14s %14s %7s\n", fmt10(report.omega_sq).c_str(),
                    fmt10(report.sigma_ch_sq).c_str(), fmt10(report.sigma_b_sq).c_str(),
                    fmt10(report.sigma_e_sq).c_str(), fmt10(report.i_ab_bits).c_str(),
                    fmt10(report.i_ae_bits).c_str(), report.secure ? "yes" : "no");
    }
    const Threshold threshold = threshold_closed_form();
    std::printf("# two-way threshold: sigma_ch_sq = %s (omega_sq = %s)\n",
                fmt10(threshold.sigma_ch_sq).c_str(), fmt10(threshold.omega_sq).c_str());
    std::printf("# one-way threshold: sigma_ch_sq = %s\n", fmt10(kOneWayThreshold).c_str());

    if (!args.svg_path.empty()) {
        const RunManifest manifest = make_manifest(
            "analyze",
            {{"grid", args.grid}, {"signal_var", args.signal_var}, {"svg", true}}, 0);
        write_text_file(args.svg_path, render_mi_chart_svg(grid, args.signal_var, manifest));
        std::printf("# chart written to %s\n", args.svg_path.c_str());
    }
    return 0;
}

/// One empirical-vs-closed-form comparison: passes when the empirical value
/// sits within the larger of 2%% and four standard errors of the expectation.
struct Verdict {
    double empirical = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

Verdict variance_verdict(double empirical, double expected, std::uint64_t samples) {
    Verdict v;
    v.empirical = empirical;
    v.expected = expected;
    const double rel = std::max(0.02, 4.0 / std::sqrt(static_cast<double>(samples)));
    v.tolerance = rel * expected;
    v.pass = std::abs(empirical - expected) <= v.tolerance;
    return v;
}

Verdict mi_verdict(double empirical_bits, double expected_bits, double signal_var,
                   double expected_noise, std::uint64_t samples) {
    Verdict v;
    v.empirical = empirical_bits;
    v.expected = expected_bits;
    const double rel = std::max(0.02, 4.0 / std::sqrt(static_cast<double>(samples)));
    const double lo = mi_two_quadratures(signal_var, expected_noise * (1.0 + rel));
    const double hi = mi_two_quadratures(signal_var, expected_noise * (1.0 - rel));
    v.tolerance = std::max(hi - expected_bits, expected_bits - lo);
    v.pass = std::abs(empirical_bits - expected_bits) <= v.tolerance;
    return v;
}

Verdict noise_verdict(double empirical, double expected, std::uint64_t off_rounds) {
    Verdict v;
    v.empirical = empirical;
    v.expected = expected;
    // The estimator subtracts the unit floor from a sample variance of
    // expected + 1, so four standard errors scale with that raw variance.
    const double four_se = 4.0 * (expected + 1.0) / std::sqrt(static_cast<double>(off_rounds));
    v.tolerance = std::max(0.02 * expected, four_se);
    v.pass = std::abs(empirical - expected) <= v.tolerance;
    return v;
}

nlohmann::json to_json(const Verdict& v) {
    return {{"empirical", v.empirical},
            {"expected", v.expected},
            {"tolerance", v.tolerance},
            {"pass", v.pass}};
}

void print_verdict(const char* name, const Verdict& v) {
    std::printf("  %-12s empirical %-14s expected %-14s tolerance %-12s %s\n", name,
                fmt10(v.empirical).c_str(), fmt10(v.expected).c_str(), fmt10(v.tolerance).c_str(),
                v.pass ? "ok" : "OUT OF BAND");
}

int cmd_simulate(const SimulateArgs& args) {
    ProtocolConfig cfg;
    cfg.signal_var = args.signal_var;
    cfg.reference_var = args.reference_var;
    cfg.off_probability = args.off_probability;
    cfg.rounds = args.rounds;
    cfg.seed = args.seed;

    AttackConfig attack;
    attack.omega_sq = args.omega_sq;
    ChannelModel channel;
    channel.attack = as_channel_hook(attack);

    const RunManifest manifest = make_manifest("simulate",
                                               {{"rounds", args.rounds},
                                                {"signal_var", args.signal_var},
                                                {"reference_var", args.reference_var},
                                                {"omega_sq", args.omega_sq},
                                                {"off_probability", args.off_probability}},
                                               args.seed);

    const Transcript transcript = run_session(cfg, channel, args.workers);
    const EmpiricalSummary empirical = summarize_transcript(transcript);
    const SecurityReport closed = build_report(args.signal_var, args.omega_sq);

    nlohmann::json verdicts = nlohmann::json::object();
    std::printf("simulate: %" PRIu64 " rounds (%" PRIu64 " ON / %" PRIu64
                " OFF), omega_sq = %s, seed = %" PRIu64 "\n",
                args.rounds, empirical.on_rounds, empirical.off_rounds,
                fmt10(args.omega_sq).c_str(), args.seed);
    if (empirical.sigma_b_sq) {
        const std::uint64_t n = empirical.on_rounds;
        const Verdict v = variance_verdict(*empirical.sigma_b_sq, closed.sigma_b_sq, n);
        verdicts["sigma_b_sq"] = to_json(v);
        print_verdict("sigma_b_sq", v);
    }
    if (empirical.sigma_e_sq) {
        const Verdict v = variance_verdict(*empirical.sigma_e_sq, closed.sigma_e_sq,
                                           empirical.on_rounds);
        verdicts["sigma_e_sq"] = to_json(v);
        print_verdict("sigma_e_sq", v);
    }
    if (empirical.i_ab_bits) {
        const Verdict v = mi_verdict(*empirical.i_ab_bits, closed.i_ab_bits, args.signal_var,
                                     closed.sigma_b_sq, empirical.on_rounds);
        verdicts["i_ab_bits"] = to_json(v);
        print_verdict("i_ab_bits", v);
    }
    if (empirical.i_ae_bits) {
        const Verdict v = mi_verdict(*empirical.i_ae_bits, closed.i_ae_bits, args.signal_var,
                                     closed.sigma_e_sq, empirical.on_rounds);
        verdicts["i_ae_bits"] = to_json(v);
        print_verdict("i_ae_bits", v);
    }
    if (empirical.noise) {
        const std::uint64_t m = empirical.noise->off_rounds;
        const Verdict fwd = noise_verdict(empirical.noise->forward, 0.5, m);
        const Verdict bwd = noise_verdict(empirical.noise->backward, args.omega_sq, m);
        const Verdict total = noise_verdict(empirical.noise->total, closed.sigma_ch_sq, m);
        verdicts["noise_forward"] = to_json(fwd);
        verdicts["noise_backward"] = to_json(bwd);
        verdicts["noise_total"] = to_json(total);
        std::printf("  channel-noise estimate from %" PRIu64 " OFF rounds:\n", m);
        print_verdict("forward", fwd);
        print_verdict("backward", bwd);
        print_verdict("total", total);
    }
    std::printf("  closed form: secure = %s (sigma_ch_sq %s vs threshold %s, one-way %s)\n",
                closed.secure ? "yes" : "no", fmt10(closed.sigma_ch_sq).c_str(),
                fmt10(closed.threshold_sigma_ch_sq).c_str(),
                fmt10(closed.one_way_threshold).c_str());

    const std::string csv_path = args.out + ".csv";
    const std::string json_path = args.out + ".json";
    write_text_file(csv_path, render_transcript_csv(transcript, manifest));
    nlohmann::json report{{"manifest", to_json(manifest)},
                          {"closed_form", to_json(closed)},
                          {"empirical", to_json(empirical)},
                          {"verdicts", verdicts}};
    write_text_file(json_path, report.dump(2) + "\n");
    std::printf("  transcript: %s\n  report:     %s\n", csv_path.c_str(), json_path.c_str());
    return 0;
}

int cmd_threshold(double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    constexpr double kResolutionFloor = 32.0 * std::numeric_limits<double>::epsilon();
    if (tolerance < kResolutionFloor) {
        std::printf("warning: tolerance %s is below double-precision resolution (~%s); "
                    "the numeric result is limited accordingly\n",
                    fmt10(tolerance).c_str(), fmt10(kResolutionFloor).c_str());
    }
    const Threshold closed = threshold_closed_form();
    const double numeric = threshold_numeric(tolerance);
    std::printf("two-way security threshold (channel noise per quadrature)\n");
    std::printf("  closed form: %s (omega_sq = %s)\n", fmt10(closed.sigma_ch_sq).c_str(),
                fmt10(closed.omega_sq).c_str());
    std::printf("  numeric:     %s (bisection tolerance %s)\n", fmt10(numeric).c_str(),
                fmt10(tolerance).c_str());
    std::printf("  difference:  %s\n", fmt10(std::abs(numeric - closed.sigma_ch_sq)).c_str());
    std::printf("  one-way baseline: %s\n", fmt10(kOneWayThreshold).c_str());
    return 0;
}

int cmd_ppt_scan(const std::string& grid_spec) {
    const std::vector<double> grid = positive_grid(grid_spec, "sigma^2");
    std::printf("%14s %18s %10s\n", "sigma_sq", "pt_min_eigenvalue", "separable");
    std::size_t separable_count = 0;
    for (double sigma_sq : grid) {
        const Eigen::Matrix4d cm = gqcm_joint_cm(sigma_sq);
        const double nu = pt_min_symplectic_eigenvalue(cm);
        const bool separable = ppt_separable_two_mode(cm);
        separable_count += separable ? 1 : 0;
        std::printf("%14s %18s %10s\n", fmt10(sigma_sq).c_str(), fmt10(nu).c_str(),
                    separable ? "yes" : "no");
    }
    std::printf("# %zu/%zu grid points separable\n", separable_count, grid.size());
    return separable_count == grid.size() ? 0 : 4;
}

double param_double(const RunManifest& m, const char* key) {
    try {
        return m.parameters.at(key).get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest parameter '") + key + "': " + e.what());
    }
}

std::uint64_t param_u64(const RunManifest& m, const char* key) {
    try {
        return m.parameters.at(key).get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest parameter '") + key + "': " + e.what());
    }
}

std::string param_string(const RunManifest& m, const char* key) {
    try {
        return m.parameters.at(key).get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest parameter '") + key + "': " + e.what());
    }
}

/// Re-run the command recorded in an output file's manifest. File outputs go
/// to the --out prefix; everything except manifest timestamps reproduces
/// byte-identically.
int run_replay(const std::string& path, const std::string& out_prefix) {
    const std::optional<RunManifest> manifest = extract_manifest(read_text_file(path));
    if (!manifest) {
        throw std::invalid_argument("no manifest found in '" + path + "'");
    }
    if (manifest->command == "simulate") {
        SimulateArgs args;
        args.rounds = param_u64(*manifest, "rounds");
        args.signal_var = param_double(*manifest, "signal_var");
        args.reference_var = param_double(*manifest, "reference_var");
        args.omega_sq = param_double(*manifest, "omega_sq");
        args.off_probability = param_double(*manifest, "off_probability");
        args.seed = manifest->seed;
        args.out = out_prefix;
        return cmd_simulate(args);
    }
    if (manifest->command == "analyze") {
        AnalyzeArgs args;
        args.grid = param_string(*manifest, "grid");
        args.signal_var = param_double(*manifest, "signal_var");
        args.svg_path = out_prefix + ".svg";
        return cmd_analyze(args);
    }
    throw std::invalid_argument("manifest command '" + manifest->command +
                                "' is not replayable");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way coherent-state QKD: closed-form security analysis and Monte Carlo "
                 "simulation under Gaussian-cloner attacks"};
    app.set_version_flag("--version", twqkd::kVersion);
    app.require_subcommand(0, 1);

    std::string replay_path;
    std::string replay_out = "replay";
    app.add_option("--replay", replay_path,
                   "re-run the command recorded in an output file's embedded manifest");
    app.add_option("--out", replay_out, "output prefix for replayed file outputs")
        ->capture_default_str();

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "closed-form security table over an "
                                                      "attack-strength grid");
    analyze->add_option("--grid", analyze_args.grid, "omega^2 grid, start:stop:count[:log]")
        ->capture_default_str();
    analyze->add_option("--signal-var", analyze_args.signal_var,
                        "per-quadrature signal modulation variance")
        ->capture_default_str();
    analyze->add_option("--svg", analyze_args.svg_path,
                        "also write an SVG chart of the mutual informations to this path");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run under the "
                                                        "two-cloner attack");
    simulate->add_option("-n,--rounds", simulate_args.rounds, "number of protocol rounds")
        ->capture_default_str();
    simulate->add_option("--signal-var", simulate_args.signal_var,
                         "per-quadrature signal modulation variance")
        ->capture_default_str();
    simulate->add_option("--reference-var", simulate_args.reference_var,
                         "per-quadrature reference modulation variance")
        ->capture_default_str();
    simulate->add_option("--omega-sq", simulate_args.omega_sq,
                         "attack strength: backward-cloner noise toward the receiver")
        ->capture_default_str();
    simulate->add_option("--off-prob", simulate_args.off_probability,
                         "probability of a check (OFF) round")
        ->capture_default_str();
    CLI::Option* seed_option =
        simulate->add_option("--seed", simulate_args.seed, "random seed (env TWQKD_SEED "
                                                           "overrides this default)")
            ->capture_default_str();
    simulate->add_option("--out", simulate_args.out, "output prefix for .csv and .json")
        ->capture_default_str();
    simulate->add_option("--workers", simulate_args.workers,
                         "worker threads (any count gives identical output)")
        ->capture_default_str();

    double threshold_tolerance = 1e-12;
    CLI::App* threshold = app.add_subcommand("threshold", "security threshold, closed form vs "
                                                          "numeric cross-check");
    threshold->add_option("--tolerance", threshold_tolerance, "bisection tolerance on omega^2")
        ->capture_default_str();

    std::string ppt_grid = "1e-3:1e3:100:log";
    CLI::App* ppt_scan = app.add_subcommand("ppt-scan", "separability scan of the cloner's "
                                                        "joint two-clone state");
    ppt_scan->add_option("--grid", ppt_grid, "sigma^2 grid, start:stop:count[:log]")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!replay_path.empty()) {
            return run_replay(replay_path, replay_out);
        }
        if (analyze->parsed()) return cmd_analyze(analyze_args);
        if (simulate->parsed()) {
            if (seed_option->count() == 0) {
                if (const char* env_seed = std::getenv("TWQKD_SEED")) {
                    try {
                        simulate_args.seed = std::stoull(env_seed);
                    } catch (const std::exception&) {
                        throw std::invalid_argument("TWQKD_SEED is not an unsigned integer");
                    }
                }
            }
            return cmd_simulate(simulate_args);
        }
        if (threshold->parsed()) return cmd_threshold(threshold_tolerance);
        if (ppt_scan->parsed()) return cmd_ppt_scan(ppt_grid);
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const twqkd::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const twqkd::InsufficientDataError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "internal consistency failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
}
