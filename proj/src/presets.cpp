#include <stdexcept>

#include "saguin/errors.hpp"
#include "saguin/scenario.hpp"

namespace saguin {

namespace {

constexpr double kSatAltitude = 550e3;
constexpr double kUavAltitude = 100.0;
constexpr double kBsHeight = 30.0;

ApConfig satellite(int delay) {
  return {ApKind::Satellite, {0.0, 0.0, kSatAltitude}, 1e6, delay};
}
ApConfig uav(double x, double y, double radius, int delay) {
  return {ApKind::Uav, {x, y, kUavAltitude}, radius, delay};
}
ApConfig bs(double x, double y, double radius) {
  return {ApKind::BaseStation, {x, y, kBsHeight}, radius, std::nullopt};
}

ScenarioConfig base(std::string name, std::string description, int channels) {
  ScenarioConfig cfg;
  cfg.name = std::move(name);
  cfg.description = std::move(description);
  cfg.channels = channels;
  cfg.policy = "mappo";
  return cfg;
}

UserGenerator explicit_users(std::vector<Vec3> positions) {
  UserGenerator gen;
  gen.kind = UserGenerator::Kind::Explicit;
  gen.count = static_cast<int>(positions.size());
  gen.positions = std::move(positions);
  return gen;
}

ScenarioConfig small() {
  ScenarioConfig cfg = base(
      "small",
      "1 satellite (20 frames), 1 UAV (5 frames), 1 BS, 3 channels, 5 users. "
      "Users 1-3 sit under the UAV, user 4 under both UAV and BS, user 5 under "
      "the BS only; the satellite reaches everyone.",
      3);
  cfg.aps = {satellite(20), uav(3000.0, 0.0, 1600.0, 5), bs(0.0, 0.0, 1500.0)};
  cfg.users = explicit_users({{2500.0, 300.0, 0.0},
                              {3400.0, -200.0, 0.0},
                              {3800.0, 400.0, 0.0},
                              {1450.0, 0.0, 0.0},
                              {-800.0, 500.0, 0.0}});
  return cfg;
}

ScenarioConfig full_coverage() {
  ScenarioConfig cfg = base(
      "full-coverage",
      "1 satellite (20 frames), 1 UAV (5 frames), 1 BS, 3 channels, 5 users, "
      "every AP covering every user.",
      3);
  cfg.aps = {satellite(20), uav(0.0, 0.0, 2000.0, 5), bs(0.0, 0.0, 2000.0)};
  cfg.users = explicit_users({{300.0, 0.0, 0.0},
                              {-400.0, 300.0, 0.0},
                              {0.0, -600.0, 0.0},
                              {800.0, 700.0, 0.0},
                              {-900.0, -500.0, 0.0}});
  return cfg;
}

ScenarioConfig partial_coverage() {
  ScenarioConfig cfg = base(
      "partial-coverage",
      "1 satellite (20 frames), 1 UAV (5 frames), 1 BS, 3 channels, 5 users; "
      "the UAV covers 3 users and the BS covers 2.",
      3);
  cfg.aps = {satellite(20), uav(3000.0, 0.0, 1200.0, 5), bs(0.0, 0.0, 1200.0)};
  cfg.users = explicit_users({{2600.0, 300.0, 0.0},
                              {3400.0, -200.0, 0.0},
                              {3700.0, 500.0, 0.0},
                              {500.0, 200.0, 0.0},
                              {-700.0, -400.0, 0.0}});
  return cfg;
}

ScenarioConfig medium() {
  ScenarioConfig cfg = base(
      "medium",
      "1 satellite (20 frames), 2 UAVs (5 and 1 frames), 3 BSs, 5 channels, "
      "8 users spread over three BS cells and two UAV spots.",
      5);
  cfg.aps = {satellite(20),
             uav(2000.0, 2500.0, 1800.0, 5),
             uav(6000.0, 2500.0, 1800.0, 1),
             bs(0.0, 0.0, 1200.0),
             bs(4000.0, 0.0, 1200.0),
             bs(8000.0, 0.0, 1200.0)};
  cfg.users = explicit_users({{300.0, 200.0, 0.0},
                              {4200.0, -300.0, 0.0},
                              {7700.0, 400.0, 0.0},
                              {2000.0, 2200.0, 0.0},
                              {1200.0, 1500.0, 0.0},
                              {6000.0, 3000.0, 0.0},
                              {5000.0, 1000.0, 0.0},
                              {3500.0, 800.0, 0.0}});
  return cfg;
}

ScenarioConfig medium_6u() {
  ScenarioConfig cfg = base(
      "medium-6u",
      "1 satellite (20 frames), 2 UAVs (5 and 1 frames), 2 BSs, 5 channels, 6 users.",
      5);
  cfg.aps = {satellite(20),
             uav(2000.0, 2500.0, 1800.0, 5),
             uav(6000.0, 2500.0, 1800.0, 1),
             bs(0.0, 0.0, 1200.0),
             bs(4000.0, 0.0, 1200.0)};
  cfg.users = explicit_users({{300.0, 200.0, 0.0},
                              {4200.0, -300.0, 0.0},
                              {2000.0, 2200.0, 0.0},
                              {6000.0, 3000.0, 0.0},
                              {5000.0, 1000.0, 0.0},
                              {3500.0, 800.0, 0.0}});
  return cfg;
}

ScenarioConfig large(int channels) {
  ScenarioConfig cfg = base(
      channels == 10 ? "large" : "large-" + std::to_string(channels) + "ch",
      "1 satellite (20 frames), 3 UAVs (5, 5 and 1 frames), 4 BSs, " +
          std::to_string(channels) + " channels, 10 users along a corridor.",
      channels);
  cfg.aps = {satellite(20),
             uav(2000.0, 2500.0, 1800.0, 5),
             uav(6000.0, 2500.0, 1800.0, 5),
             uav(10000.0, 2500.0, 1800.0, 1),
             bs(0.0, 0.0, 1200.0),
             bs(4000.0, 0.0, 1200.0),
             bs(8000.0, 0.0, 1200.0),
             bs(12000.0, 0.0, 1200.0)};
  cfg.users = explicit_users({{300.0, 200.0, 0.0},
                              {4200.0, -300.0, 0.0},
                              {7700.0, 400.0, 0.0},
                              {12300.0, -200.0, 0.0},
                              {2000.0, 2200.0, 0.0},
                              {6000.0, 3000.0, 0.0},
                              {10400.0, 2600.0, 0.0},
                              {5000.0, 1000.0, 0.0},
                              {3500.0, 800.0, 0.0},
                              {9000.0, 1200.0, 0.0}});
  return cfg;
}

std::map<std::string, ScenarioConfig> build_library() {
  std::map<std::string, ScenarioConfig> lib;
  for (ScenarioConfig cfg : {small(), full_coverage(), partial_coverage(), medium(),
                             medium_6u(), large(10), large(6)})
    lib.emplace(cfg.name, cfg);
  return lib;
}

}  // namespace

const std::map<std::string, ScenarioConfig>& preset_library() {
  static const std::map<std::string, ScenarioConfig> lib = build_library();
  return lib;
}

ScenarioConfig preset(const std::string& name) {
  const auto& lib = preset_library();
  const auto it = lib.find(name);
  if (it == lib.end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace saguin
