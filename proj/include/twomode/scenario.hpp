#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "twomode/witnesses.hpp"

namespace twomode {

inline constexpr const char* kVersion = "0.1.0";

// Parsed scenario file: a space spec, a tagged-union state spec and the
// witness configuration. The raw JSON is kept for echoing into reports.
struct Scenario {
  std::optional<std::int64_t> n_max;  // required by dense-path states
  nlohmann::json state;               // validated tagged union
  WitnessConfig tests;
  std::optional<std::uint64_t> seed;  // present when the state spec samples
  nlohmann::json echo;                // the full validated scenario object
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// A state ready for witness evaluation: fixed-N pure states stay on the
// O(N) sector path, everything else is a dense density operator.
struct BuiltState {
  std::optional<SectorState> sector;
  std::optional<DensityOperator> dense;
};

BuiltState build_state(const Scenario& scenario);

struct Provenance {
  std::string version = kVersion;
  std::optional<std::uint64_t> seed;
  std::string timestamp;
};

struct RunReport {
  nlohmann::json scenario_echo;
  std::string path;  // "sector" or "dense"
  WitnessReport report;
  Provenance provenance;
};

RunReport run_scenario(const Scenario& scenario);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& doc);

std::string iso_timestamp_now();

// full-precision decimal rendering used in CSV output
std::string format_double(double value);

}  // namespace twomode
