#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <twqkd/errors.hpp>
#include <twqkd/io.hpp>
#include <twqkd/random.hpp>

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace twqkd;
using nlohmann::json;

namespace {

RunManifest sample_manifest() {
    RunManifest m;
    m.command = "simulate";
    m.parameters = {{"rounds", 100}, {"omega_sq", 0.5}};
    m.seed = 42;
    m.tool_version = "0.1.0";
    m.timestamp = "2026-08-16T12:00:00Z";
    return m;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("twqkd_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("format_double round-trips arbitrary doubles") {
    RandomStream rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double value = std::exp(20.0 * rng.standard_normal()) *
                             (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const std::string text = format_double(value);
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
        REQUIRE(ec == std::errc());
        CHECK(ptr == text.data() + text.size());
        CHECK(parsed == value);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("manifest JSON round trip") {
    const RunManifest m = sample_manifest();
    const json j = to_json(m);
    const RunManifest back = manifest_from_json(j);
    CHECK(back.command == m.command);
    CHECK(back.parameters == m.parameters);
    CHECK(back.seed == m.seed);
    CHECK(back.tool_version == m.tool_version);
    CHECK(back.timestamp == m.timestamp);

    json missing = j;
    missing.erase("command");
    CHECK_THROWS_AS(manifest_from_json(missing), IoError);
    json wrong_type = j;
    wrong_type["seed"] = "not a number";
    CHECK_THROWS_AS(manifest_from_json(wrong_type), IoError);
}

TEST_CASE("manifests can be recovered from every output format") {
    const RunManifest m = sample_manifest();

    // CSV: first-line comment.
    const std::string csv = "# " + to_json(m).dump() + "\nround,kind\n0,on\n";
    const auto from_csv = extract_manifest(csv);
    REQUIRE(from_csv.has_value());
    CHECK(from_csv->command == "simulate");
    CHECK(from_csv->seed == 42);

    // JSON: nested under "manifest" or the whole document.
    json wrapper;
    wrapper["manifest"] = to_json(m);
    wrapper["results"] = {1, 2, 3};
    const auto from_json_doc = extract_manifest(wrapper.dump());
    REQUIRE(from_json_doc.has_value());
    CHECK(from_json_doc->parameters == m.parameters);
    const auto from_bare = extract_manifest(to_json(m).dump());
    REQUIRE(from_bare.has_value());
    CHECK(from_bare->command == "simulate");

    // Plain text without a marker: cleanly absent.
    CHECK_FALSE(extract_manifest("just,a,plain\ncsv,file,here\n").has_value());
    CHECK_FALSE(extract_manifest("").has_value());

    // Marker present but the payload is mangled: an error, not nullopt.
    CHECK_THROWS_AS(extract_manifest("# {\"command\": \n1,2\n"), IoError);
    CHECK_THROWS_AS(extract_manifest("{\"manifest\": {\"command\": 7}}"), IoError);
}

TEST_CASE("timestamps are ISO-8601 UTC") {
    const std::string ts = iso8601_utc_now();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[7] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts[13] == ':');
    CHECK(ts[16] == ':');
    CHECK(ts.back() == 'Z');
}

TEST_CASE("transcript CSV layout and round-trip precision") {
    ProtocolConfig cfg;
    cfg.rounds = 40;
    cfg.off_probability = 0.5;
    cfg.seed = 7;
    ChannelModel channel;
    channel.attack = as_channel_hook(AttackConfig{});
    const Transcript transcript = run_session(cfg, channel);

    const std::string csv = render_transcript_csv(transcript, sample_manifest());
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2 + cfg.rounds);

    CHECK(lines[0].rfind("# {", 0) == 0);
    CHECK(lines[1] ==
          "round,kind,beta_x,beta_p,alpha_x,alpha_p,zeta_x,zeta_p,est_x,est_p,eve_est_x,eve_est_p");

    for (std::size_t i = 0; i < cfg.rounds; ++i) {
        const auto fields = split_fields(lines[2 + i]);
        REQUIRE(fields.size() == 12);
        CHECK(fields[0] == std::to_string(i));
        const RoundRecord& r = transcript.rounds[i];
        if (r.kind == RoundKind::On) {
            CHECK(fields[1] == "on");
            CHECK(fields[4] == format_double(r.alpha->x));
            CHECK(fields[8] == format_double(r.bob_estimate->x));
        } else {
            CHECK(fields[1] == "off");
            CHECK(fields[4] == format_double(r.retransmit->x));
            CHECK(fields[8] == format_double(r.alice_outcome->x));
        }
        CHECK(fields[2] == format_double(r.beta.x));
        CHECK(fields[3] == format_double(r.beta.p));
        CHECK(fields[6] == format_double(r.bob_outcome.x));
        CHECK(fields[7] == format_double(r.bob_outcome.p));
        CHECK(fields[10] == format_double(r.eve->alpha_estimate->x));
        CHECK(fields[11] == format_double(r.eve->alpha_estimate->p));
    }

    // The embedded manifest survives the trip.
    const auto recovered = extract_manifest(csv);
    REQUIRE(recovered.has_value());
    CHECK(recovered->command == "simulate");
}

TEST_CASE("transcript CSV leaves non-applicable fields empty") {
    ProtocolConfig cfg;
    cfg.rounds = 10;
    cfg.off_probability = 0.0;
    cfg.seed = 3;
    const Transcript transcript = run_session(cfg, ChannelModel{});  // no attack
    const std::string csv = render_transcript_csv(transcript, sample_manifest());
    const auto lines = split_lines(csv);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        REQUIRE(fields.size() == 12);
        CHECK(fields[10].empty());
        CHECK(fields[11].empty());
    }
}

TEST_CASE("security report serialization carries the full picture") {
    const SecurityReport report = build_report(100.0, 0.5);
    const json j = to_json(report);
    CHECK(j.at("omega_sq").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("sigma_b_sq").get<double>() == doctest::Approx(2.0));
    CHECK(j.at("sigma_e_sq").get<double>() == doctest::Approx(2.5));
    CHECK(j.at("secure").get<bool>());
    CHECK(j.at("threshold_sigma_ch_sq").get<double>() ==
          doctest::Approx(1.3090169943749475).epsilon(1e-15));
}

TEST_CASE("empirical summary serialization uses null for absent values") {
    EmpiricalSummary summary;
    summary.on_rounds = 5;
    summary.off_rounds = 0;
    summary.sigma_b_sq = 2.0;
    const json j = to_json(summary);
    CHECK(j.at("on_rounds").get<std::uint64_t>() == 5);
    CHECK(j.at("sigma_b_sq").get<double>() == doctest::Approx(2.0));
    CHECK(j.at("sigma_e_sq").is_null());
    CHECK(j.at("noise").is_null());

    summary.noise = NoiseEstimate{0.3, 0.2, 0.5, 100};
    const json j2 = to_json(summary);
    CHECK(j2.at("noise").at("forward").get<double>() == doctest::Approx(0.3));
    CHECK(j2.at("noise").at("off_rounds").get<std::uint64_t>() == 100);
}

TEST_CASE("range specs parse to inclusive grids") {
    const std::vector<double> lin = parse_range_spec("1:2:5");
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lin[2] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(lin.back() == doctest::Approx(2.0).epsilon(1e-15));

    const std::vector<double> logg = parse_range_spec("1e-3:1e3:7:log");
    REQUIRE(logg.size() == 7);
    CHECK(logg.front() == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(logg.back() == doctest::Approx(1e3).epsilon(1e-12));
    for (std::size_t i = 1; i + 1 < logg.size(); ++i) {
        CHECK(logg[i + 1] / logg[i] == doctest::Approx(logg[1] / logg[0]).epsilon(1e-9));
    }

    const std::vector<double> point = parse_range_spec("0.75");
    REQUIRE(point.size() == 1);
    CHECK(point[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("range spec rejects malformed input") {
    CHECK_THROWS_AS(parse_range_spec(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("1:2:1"), std::invalid_argument);      // count < 2
    CHECK_THROWS_AS(parse_range_spec("2:1:5"), std::invalid_argument);      // start >= stop
    CHECK_THROWS_AS(parse_range_spec("1:1:5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("0:1:5:log"), std::invalid_argument);  // log needs start > 0
    CHECK_THROWS_AS(parse_range_spec("1:2:5:cubic"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("1:2:5:log:extra"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("a:2:5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("1:2:5.5"), std::invalid_argument);    // count not integral
    CHECK_THROWS_AS(parse_range_spec("1:2:"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range_spec("1,2,5"), std::invalid_argument);
}

TEST_CASE("mi chart SVG embeds its manifest and both curves") {
    const std::vector<double> grid = parse_range_spec("0.1:1.6:16");
    const std::string svg = render_mi_chart_svg(grid, 100.0, sample_manifest());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("threshold") != std::string::npos);  // crossing marker label

    const auto recovered = extract_manifest(svg);
    REQUIRE(recovered.has_value());
    CHECK(recovered->command == "simulate");
    CHECK(recovered->seed == 42);

    CHECK_THROWS_AS(render_mi_chart_svg({}, 100.0, sample_manifest()), std::invalid_argument);
}

TEST_CASE("text file IO round trip and failure modes") {
    TempDir tmp;
    const std::string path = (tmp.path / "roundtrip.txt").string();
    const std::string payload = "line one\nline two\n";
    write_text_file(path, payload);
    CHECK(read_text_file(path) == payload);

    CHECK_THROWS_AS(write_text_file((tmp.path / "missing" / "f.txt").string(), "x"), IoError);
    CHECK_THROWS_AS(read_text_file((tmp.path / "nonexistent.txt").string()), IoError);
}
