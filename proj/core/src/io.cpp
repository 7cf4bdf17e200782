#include "twqkd/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <system_error>

#include "twqkd/errors.hpp"

namespace twqkd {

namespace {

std::string csv_field(const std::optional<ComplexAmplitude>& amp, bool x_component) {
    if (!amp) return {};
    return format_double(x_component ? amp->x : amp->p);
}

double parse_strict_double(std::string_view token, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("range spec: bad ") + what + " '" +
                                    std::string(token) + "'");
    }
    return value;
}

/// Fixed two-decimal pixel coordinate for SVG geometry; deterministic and
/// compact, unlike shortest-round-trip floats.
std::string px(double value) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", value);
    return buf.data();
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw IoError("failed to format a double");
    return std::string(buf.data(), ptr);
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf.data();
}

nlohmann::json to_json(const RunManifest& manifest) {
    return nlohmann::json{{"command", manifest.command},
                          {"parameters", manifest.parameters},
                          {"seed", manifest.seed},
                          {"tool_version", manifest.tool_version},
                          {"timestamp", manifest.timestamp}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    try {
        RunManifest manifest;
        manifest.command = j.at("command").get<std::string>();
        manifest.parameters = j.at("parameters");
        if (!manifest.parameters.is_object()) throw IoError("manifest parameters must be an object");
        manifest.seed = j.at("seed").get<std::uint64_t>();
        manifest.tool_version = j.at("tool_version").get<std::string>();
        manifest.timestamp = j.at("timestamp").get<std::string>();
        return manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

std::optional<RunManifest> extract_manifest(std::string_view content) {
    // Skip a UTF-8 BOM and leading whitespace before sniffing the format.
    if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
    while (!content.empty() && (content.front() == ' ' || content.front() == '\n' ||
                                content.front() == '\r' || content.front() == '\t')) {
        content.remove_prefix(1);
    }
    if (content.empty()) return std::nullopt;

    std::string payload;
    if (content.starts_with("#")) {
        // CSV: manifest JSON rides on the first comment line.
        const auto line_end = content.find('\n');
        payload = std::string(content.substr(1, line_end == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : line_end - 1));
    } else if (content.starts_with("<")) {
        // SVG: manifest JSON inside the first XML comment.
        const auto begin = content.find("<!--");
        const auto end = content.find("-->", begin == std::string_view::npos ? 0 : begin);
        if (begin == std::string_view::npos || end == std::string_view::npos) return std::nullopt;
        payload = std::string(content.substr(begin + 4, end - begin - 4));
    } else if (content.starts_with("{")) {
        // JSON report: manifest under its own key, or the document is one.
        try {
            const nlohmann::json doc = nlohmann::json::parse(content);
            if (doc.contains("manifest")) return manifest_from_json(doc.at("manifest"));
            if (doc.contains("command") && doc.contains("parameters")) {
                return manifest_from_json(doc);
            }
            return std::nullopt;
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError(std::string("unparseable JSON document: ") + e.what());
        }
    } else {
        return std::nullopt;
    }

    try {
        return manifest_from_json(nlohmann::json::parse(payload));
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("unparseable embedded manifest: ") + e.what());
    }
}

std::string render_transcript_csv(const Transcript& transcript, const RunManifest& manifest) {
    std::string out = "# " + to_json(manifest).dump() + "\n";
    out += "round,kind,beta_x,beta_p,alpha_x,alpha_p,zeta_x,zeta_p,est_x,est_p,eve_est_x,eve_est_p\n";
    for (std::size_t i = 0; i < transcript.rounds.size(); ++i) {
        const RoundRecord& r = transcript.rounds[i];
        const bool on = r.kind == RoundKind::On;
        // ON rows: alpha = the secret displacement, est = Bob's estimate.
        // OFF rows reuse the same columns for Alice's side of the check:
        // alpha = her retransmission, est = her heterodyne outcome.
        const std::optional<ComplexAmplitude>& alpha_cols = on ? r.alpha : r.retransmit;
        const std::optional<ComplexAmplitude>& est_cols = on ? r.bob_estimate : r.alice_outcome;
        const std::optional<ComplexAmplitude> eve_est =
            r.eve ? r.eve->alpha_estimate : std::nullopt;
        out += std::to_string(i);
        out += on ? ",on," : ",off,";
        out += format_double(r.beta.x) + ',' + format_double(r.beta.p) + ',';
        out += csv_field(alpha_cols, true) + ',' + csv_field(alpha_cols, false) + ',';
        out += format_double(r.bob_outcome.x) + ',' + format_double(r.bob_outcome.p) + ',';
        out += csv_field(est_cols, true) + ',' + csv_field(est_cols, false) + ',';
        out += csv_field(eve_est, true) + ',' + csv_field(eve_est, false);
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const SecurityReport& report) {
    return nlohmann::json{{"omega_sq", report.omega_sq},
                          {"sigma_ch_sq", report.sigma_ch_sq},
                          {"sigma_b_sq", report.sigma_b_sq},
                          {"sigma_e_sq", report.sigma_e_sq},
                          {"gamma_ab", report.gamma_ab},
                          {"gamma_ae", report.gamma_ae},
                          {"i_ab_bits", report.i_ab_bits},
                          {"i_ae_bits", report.i_ae_bits},
                          {"key_rate_gap_bits", report.key_rate_gap_bits},
                          {"secure", report.secure},
                          {"threshold_sigma_ch_sq", report.threshold_sigma_ch_sq},
                          {"one_way_threshold", report.one_way_threshold}};
}

nlohmann::json to_json(const EmpiricalSummary& summary) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j{{"on_rounds", summary.on_rounds},
                     {"off_rounds", summary.off_rounds},
                     {"sigma_b_sq", opt(summary.sigma_b_sq)},
                     {"sigma_e_sq", opt(summary.sigma_e_sq)},
                     {"i_ab_bits", opt(summary.i_ab_bits)},
                     {"i_ae_bits", opt(summary.i_ae_bits)},
                     {"key_rate_gap_bits", opt(summary.key_rate_gap_bits)}};
    if (summary.noise) {
        j["noise"] = nlohmann::json{{"forward", summary.noise->forward},
                                    {"backward", summary.noise->backward},
                                    {"total", summary.noise->total},
                                    {"off_rounds", summary.noise->off_rounds}};
    } else {
        j["noise"] = nullptr;
    }
    return j;
}

std::vector<double> parse_range_spec(const std::string& spec) {
    std::vector<std::string_view> parts;
    std::string_view rest = spec;
    while (true) {
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            parts.push_back(rest);
            break;
        }
        parts.push_back(rest.substr(0, colon));
        rest.remove_prefix(colon + 1);
    }

    if (parts.size() == 1) {
        // Degenerate grid: a bare number is the one-point grid.
        return {parse_strict_double(parts[0], "value")};
    }
    if (parts.size() != 3 && parts.size() != 4) {
        throw std::invalid_argument("range spec must be 'start:stop:count[:log]'");
    }
    const bool log_scale = parts.size() == 4;
    if (log_scale && parts[3] != "log") {
        throw std::invalid_argument("range spec: unknown suffix '" + std::string(parts[3]) + "'");
    }

    const double start = parse_strict_double(parts[0], "start");
    const double stop = parse_strict_double(parts[1], "stop");
    long count = 0;
    {
        const auto token = parts[2];
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), count);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw std::invalid_argument("range spec: bad count '" + std::string(token) + "'");
        }
    }
    if (count < 2) throw std::invalid_argument("range spec: count must be >= 2");
    if (!(start < stop)) throw std::invalid_argument("range spec: start must be < stop");
    if (log_scale && start <= 0.0) {
        throw std::invalid_argument("range spec: log grids need start > 0");
    }

    std::vector<double> grid(static_cast<std::size_t>(count));
    if (log_scale) {
        const double log_start = std::log(start);
        const double step = (std::log(stop) - log_start) / static_cast<double>(count - 1);
        for (long i = 0; i < count; ++i) {
            grid[static_cast<std::size_t>(i)] = std::exp(log_start + step * static_cast<double>(i));
        }
    } else {
        const double step = (stop - start) / static_cast<double>(count - 1);
        for (long i = 0; i < count; ++i) {
            grid[static_cast<std::size_t>(i)] = start + step * static_cast<double>(i);
        }
    }
    grid.front() = start;
    grid.back() = stop;  // pin endpoints against accumulated roundoff
    return grid;
}

std::string render_mi_chart_svg(std::span<const double> omega_grid, double signal_var,
                                const RunManifest& manifest) {
    if (omega_grid.empty()) throw std::invalid_argument("chart needs a non-empty grid");

    constexpr double kWidth = 720.0;
    constexpr double kHeight = 480.0;
    constexpr double kMargin = 64.0;

    const double w_min = omega_grid.front();
    const double w_max = omega_grid.back();
    double i_max = 0.0;
    std::vector<std::pair<double, double>> points;  // (i_ab, i_ae) per grid value
    points.reserve(omega_grid.size());
    for (double w : omega_grid) {
        const MutualInformations mi = mutual_informations(signal_var, w);
        points.emplace_back(mi.i_ab_bits, mi.i_ae_bits);
        i_max = std::max({i_max, mi.i_ab_bits, mi.i_ae_bits});
    }
    const double span_w = w_max > w_min ? w_max - w_min : 1.0;
    const double span_i = i_max > 0.0 ? i_max : 1.0;

    auto to_x = [&](double w) {
        return kMargin + (w - w_min) / span_w * (kWidth - 2.0 * kMargin);
    };
    auto to_y = [&](double bits) {
        return kHeight - kMargin - bits / span_i * (kHeight - 2.0 * kMargin);
    };
    auto polyline = [&](bool first_field) {
        std::string path;
        for (std::size_t k = 0; k < omega_grid.size(); ++k) {
            const double bits = first_field ? points[k].first : points[k].second;
            path += px(to_x(omega_grid[k])) + ',' + px(to_y(bits)) + ' ';
        }
        if (!path.empty()) path.pop_back();
        return path;
    };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<!-- " + to_json(manifest).dump() + " -->\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n";
    svg += "  <rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    svg += "  <line x1=\"" + px(kMargin) + "\" y1=\"" + px(kHeight - kMargin) + "\" x2=\"" +
           px(kWidth - kMargin) + "\" y2=\"" + px(kHeight - kMargin) +
           "\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"" + px(kMargin) + "\" y1=\"" + px(kMargin) + "\" x2=\"" + px(kMargin) +
           "\" y2=\"" + px(kHeight - kMargin) + "\" stroke=\"black\"/>\n";

    // Axis ticks: four intervals on each axis.
    for (int k = 0; k <= 4; ++k) {
        const double w = w_min + span_w * k / 4.0;
        const double bits = span_i * k / 4.0;
        svg += "  <text x=\"" + px(to_x(w)) + "\" y=\"" + px(kHeight - kMargin + 20.0) +
               "\" font-size=\"12\" text-anchor=\"middle\">" + px(w) + "</text>\n";
        svg += "  <text x=\"" + px(kMargin - 8.0) + "\" y=\"" + px(to_y(bits) + 4.0) +
               "\" font-size=\"12\" text-anchor=\"end\">" + px(bits) + "</text>\n";
    }

    const double threshold_w = threshold_closed_form().omega_sq;
    if (threshold_w >= w_min && threshold_w <= w_max) {
        svg += "  <line x1=\"" + px(to_x(threshold_w)) + "\" y1=\"" + px(kMargin) + "\" x2=\"" +
               px(to_x(threshold_w)) + "\" y2=\"" + px(kHeight - kMargin) +
               "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
        svg += "  <text x=\"" + px(to_x(threshold_w) + 6.0) + "\" y=\"" + px(kMargin + 14.0) +
               "\" font-size=\"12\" fill=\"gray\">threshold</text>\n";
    }

    svg += "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"" +
           polyline(true) + "\"/>\n";
    svg += "  <polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"" +
           polyline(false) + "\"/>\n";
    svg += "  <text x=\"" + px(kWidth - kMargin - 140.0) + "\" y=\"" + px(kMargin + 16.0) +
           "\" font-size=\"13\" fill=\"#1f77b4\">I_AB (bits)</text>\n";
    svg += "  <text x=\"" + px(kWidth - kMargin - 140.0) + "\" y=\"" + px(kMargin + 34.0) +
           "\" font-size=\"13\" fill=\"#d62728\">I_AE (bits)</text>\n";
    svg += "  <text x=\"" + px(kWidth / 2.0) + "\" y=\"" + px(kHeight - 18.0) +
           "\" font-size=\"13\" text-anchor=\"middle\">attack strength (omega^2, per-quadrature "
           "noise)</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return content;
}

}  // namespace twqkd
