#pragma once

// Strict JSON schema for experiment configs and schedule specs. Unknown keys
// and type mismatches raise ConfigError carrying the JSON pointer of the
// offending value.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "banditlab/diagnostics.hpp"
#include "banditlab/experiments.hpp"
#include "banditlab/schedules.hpp"

namespace banditlab {

using Json = nlohmann::json;

struct OutputConfig {
  std::string dir = "out";
  bool csv = true;
  bool svg = false;
  std::size_t smoothing_window = 1;
  RankBy rank_by = RankBy::kTrueRegret;
};

struct GridConfig {
  GridAxis axis;
  RankBy rank_by = RankBy::kTrueRegret;
};

// A variant of the base experiment with a different arm count and/or reward
// model, written to <output.dir>/<name>/.
struct ScenarioConfig {
  std::string name;
  std::optional<std::size_t> k;
  std::optional<RewardSpec> reward;
};

struct ConfigFile {
  ExperimentConfig experiment;
  std::optional<GridConfig> grid;
  std::vector<ScenarioConfig> scenarios;
  OutputConfig output;

  // The experiments this file describes: the base one, or one per scenario.
  std::vector<std::pair<std::string, ExperimentConfig>> expand() const;
};

ConfigFile parse_config(const Json& doc);
// Read errors and JSON syntax errors are reported as ConfigError at "".
ConfigFile load_config(const std::filesystem::path& path);

ScheduleSpec parse_schedule(const Json& j, const std::string& pointer = "");
RewardSpec parse_reward(const Json& j, const std::string& pointer = "");
AgentConfig parse_agent(const Json& j, const std::string& pointer = "");
ExperimentConfig parse_experiment(const Json& j, const std::string& pointer = "");

Json to_json(const ScheduleSpec& spec);
Json to_json(const RewardSpec& spec);
Json to_json(const AgentConfig& agent);
Json to_json(const ExperimentConfig& config);
Json to_json(const HypothesisReport& report);
Json to_json(const ConvergenceReport& report);

// Agent names become file names: [A-Za-z0-9_.-]+.
bool is_valid_agent_name(const std::string& name);

}  // namespace banditlab
