#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdsim/analysis.hpp"
#include "qdsim/protocol.hpp"

namespace qdsim::cli {

using Json = nlohmann::json;

// Exit codes are a stable contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAbort = 2;
inline constexpr int kExitSelftestFailure = 3;

struct SweepRow {
  AttackModel attack;
  std::int64_t trials = 0;
};

struct RunConfig {
  ProtocolConfig protocol;
  AttackModel attack;
  std::int64_t trials = 1000;
  std::string output_path;
  std::string format = "doc";  // doc | table
  std::vector<SweepRow> sweep;  // attack-sweep rows; default catalog if empty

  // Every violated field, empty when valid.
  std::vector<std::string> violations() const;
};

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::string> format;
  std::optional<std::string> output_path;
};

// Throws std::invalid_argument / nlohmann::json exceptions on bad input.
RunConfig parse_run_config(const Json& doc);
RunConfig load_run_config(const std::string& path, const Overrides& overrides);

Json config_to_json(const RunConfig& config);
Json attack_to_json(const AttackModel& attack);
AttackModel attack_from_json(const Json& doc);

// Report skeleton: schema_version, run id (content hash of config + seed),
// seed, config echo. Numeric results go under "results".
Json report_skeleton(const RunConfig& config);

// Flattens a report into "section,key,value" lines.
std::string report_to_table(const Json& report);

// Writes the report to config.output_path (or stdout when empty) honoring the
// configured format.
void emit_report(const RunConfig& config, const Json& report);

int cmd_simulate(const std::string& config_path, const Overrides& overrides);
int cmd_attack_sweep(const std::string& config_path, const Overrides& overrides);
int cmd_selftest();

}  // namespace qdsim::cli
