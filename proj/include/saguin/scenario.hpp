#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saguin/env.hpp"
#include "saguin/mappo.hpp"
#include "saguin/radio.hpp"
#include "saguin/topology.hpp"

namespace saguin {

/// How user positions are produced.
struct UserGenerator {
  enum class Kind { Explicit, Grid, Uniform } kind = Kind::Explicit;
  std::vector<Vec3> positions;  // explicit
  int count = 0;                // grid, uniform
  Vec3 origin;                  // grid: first point; uniform: lower corner
  double spacing_m = 100.0;     // grid
  int columns = 0;              // grid; 0 means ceil(sqrt(count))
  Vec3 extent;                  // uniform: box size
  std::uint64_t seed = 0;       // uniform
};

struct ApConfig {
  ApKind kind = ApKind::BaseStation;
  Vec3 position;
  double radius_m = 1.0;
  std::optional<int> delay_frames;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  int channels = 1;
  double frame_len_s = 1e-3;
  std::vector<ApConfig> aps;
  UserGenerator users;
  LinkParams link;
  RewardWeights weights;
  ArrivalIndexing indexing = ArrivalIndexing::AoiIndicator;
  std::string policy = "round-robin";
  TrainConfig training;
  int evaluation_episodes = 5;

  int num_uavs() const;
  int num_base_stations() const;
};

ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario_file(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& config);

/// Canonical serialization used for echoes and hashing.
std::string canonical_text(const ScenarioConfig& config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

std::vector<UserNode> generate_users(const UserGenerator& gen);
NetworkSpec to_network_spec(const ScenarioConfig& config);
Topology build_topology(const ScenarioConfig& config);

/// Everything a run needs, built once from a scenario.
struct World {
  ScenarioConfig config;
  std::shared_ptr<const Topology> topology;
  EnergyTable energy;

  EnvConfig env_config(ObservationMode mode = ObservationMode::Delayed) const;
};

World make_world(const ScenarioConfig& config);

/// Named scenarios with synthesized geometry.
const std::map<std::string, ScenarioConfig>& preset_library();
ScenarioConfig preset(const std::string& name);

/// Problems that make a scenario unusable; empty when it is fine.
std::vector<std::string> lint_scenario(const ScenarioConfig& config);

}  // namespace saguin
