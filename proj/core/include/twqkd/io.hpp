#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "twqkd/protocol.hpp"
#include "twqkd/security.hpp"

namespace twqkd {

/// Reproducibility manifest embedded in every output file. `parameters` is a
/// flat JSON object holding exactly the effective parameter set of the run,
/// so a run can be replayed from any of its outputs. Timestamps are excluded
/// from replay comparison.
struct RunManifest {
    std::string command;        ///< subcommand name, e.g. "simulate"
    nlohmann::json parameters;  ///< flat object: name -> value
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string timestamp;  ///< ISO-8601 UTC, e.g. 2026-08-16T12:00:00Z
};

nlohmann::json to_json(const RunManifest& manifest);
/// Throws IoError on missing or ill-typed fields.
RunManifest manifest_from_json(const nlohmann::json& j);

/// Pull the manifest back out of a produced file: JSON documents by key,
/// CSV/SVG by their embedded comment line. Empty optional when absent.
std::optional<RunManifest> extract_manifest(std::string_view file_content);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// e.g. "2026-08-16T12:34:56Z"
std::string iso8601_utc_now();

/// Transcript as CSV. First line is the manifest as a `# `-prefixed JSON
/// comment, second the header
///   round,kind,beta_x,beta_p,alpha_x,alpha_p,zeta_x,zeta_p,est_x,est_p,eve_est_x,eve_est_p
/// then one row per round, full round-trip precision, fields that do not
/// apply to the round's mode left empty. OFF rounds reuse the alpha columns
/// for the retransmitted state and the est columns for Alice's heterodyne
/// outcome (the kind column disambiguates).
std::string render_transcript_csv(const Transcript& transcript, const RunManifest& manifest);

/// Security-report JSON body shared by the CLI's table and file outputs.
nlohmann::json to_json(const SecurityReport& report);
nlohmann::json to_json(const EmpiricalSummary& summary);

/// "start:stop:count" with an optional ":log" suffix -> the inclusive grid.
/// count >= 2, start < stop, and log grids need 0 < start. Throws
/// std::invalid_argument on malformed input.
std::vector<double> parse_range_spec(const std::string& spec);

/// Standalone SVG line chart of the closed-form mutual informations over an
/// attack-strength grid, threshold crossing marked; the manifest rides along
/// as an XML comment on the first line after the declaration.
std::string render_mi_chart_svg(std::span<const double> omega_grid, double signal_var,
                                const RunManifest& manifest);

/// Throws IoError on any failure.
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace twqkd
