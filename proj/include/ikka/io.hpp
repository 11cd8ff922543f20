#pragma once

#include "ikka/simulator.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ikka::io {

using Json = nlohmann::ordered_json;

// Rounds to `digits` decimals so that written numbers do not depend on the
// last bits of a platform's arithmetic.
double fixed(double x, int digits = 6);
std::string format_fixed(double x, int digits = 6);

// ---- manifest ---------------------------------------------------------------

inline constexpr const char* kManifestHeader = "run_id,group,condition,tracker,seed,duration_s";

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string run_id;
    std::string message;
};

struct ManifestParse {
    std::vector<simulator::ScenarioEntry> entries;
    std::vector<RowError> errors;
};

// Bad rows and duplicate run ids are reported and skipped. A missing or
// wrong header throws SchemaError.
ManifestParse parse_manifest_csv(std::istream& in);
ManifestParse read_manifest_csv(const std::filesystem::path& path);
void write_manifest_csv(std::ostream& out, std::span<const simulator::ScenarioEntry> entries);

// ---- run logs ---------------------------------------------------------------

inline constexpr const char* kRunLogHeader =
    "t,e_true,e_meas,psr,csi,E,T,M,W,w,tau,tracked,occluded,active_tracker";

void write_run_log_csv(std::ostream& out, const simulator::RunLog& log);
// Columns are found by name; a missing one throws SchemaError naming it.
std::vector<simulator::LogRow> parse_run_log_csv(std::istream& in);
std::vector<simulator::LogRow> read_run_log_csv(const std::filesystem::path& path);

// ---- metrics and configuration ---------------------------------------------

Json metrics_to_json(const simulator::RunMetrics& m);
// Throws SchemaError on missing or mistyped fields.
simulator::RunMetrics metrics_from_json(const Json& j);

Json config_to_json(const simulator::SimulationConfig& config);
// Overlays the keys present in `j` on `base`. Unknown keys and bad values
// throw ConfigError.
simulator::SimulationConfig config_from_json(const Json& j, simulator::SimulationConfig base = {});
simulator::SimulationConfig read_config(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
// Two-space indent and a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ikka::io
