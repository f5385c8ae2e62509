#include "saguin/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "saguin/errors.hpp"

namespace saguin {

using nlohmann::json;

namespace {

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback,
         const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

Vec3 parse_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() < 2 || v.size() > 3)
    throw ConfigError(where + ": expected [x, y] or [x, y, z]");
  for (const auto& c : v)
    if (!c.is_number()) throw ConfigError(where + ": coordinates must be numbers");
  return {v[0].get<double>(), v[1].get<double>(), v.size() == 3 ? v[2].get<double>() : 0.0};
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::string indexing_name(ArrivalIndexing idx) {
  return idx == ArrivalIndexing::AoiIndicator ? "aoi-indicator" : "interference";
}

ArrivalIndexing parse_indexing(const std::string& text) {
  if (text == "aoi-indicator") return ArrivalIndexing::AoiIndicator;
  if (text == "interference") return ArrivalIndexing::Interference;
  throw ConfigError("unknown arrival indexing '" + text + "'");
}

UserGenerator parse_users(const json& u) {
  const std::string where = "users";
  UserGenerator gen;
  const auto kind = get<std::string>(u, "generator", where);
  if (kind == "explicit") {
    expect_keys(u, where, {"generator", "positions"});
    const json& pos = u.at("positions");
    if (!pos.is_array()) throw ConfigError("users.positions: expected a list");
    for (size_t i = 0; i < pos.size(); ++i)
      gen.positions.push_back(parse_vec(pos[i], "users.positions[" + std::to_string(i) + "]"));
    gen.count = static_cast<int>(gen.positions.size());
  } else if (kind == "grid") {
    expect_keys(u, where, {"generator", "count", "origin", "spacing_m", "columns"});
    gen.kind = UserGenerator::Kind::Grid;
    gen.count = get<int>(u, "count", where);
    gen.origin = parse_vec(get<json>(u, "origin", where), "users.origin");
    gen.spacing_m = get_or<double>(u, "spacing_m", 100.0, where);
    gen.columns = get_or<int>(u, "columns", 0, where);
  } else if (kind == "uniform") {
    expect_keys(u, where, {"generator", "count", "origin", "extent", "seed"});
    gen.kind = UserGenerator::Kind::Uniform;
    gen.count = get<int>(u, "count", where);
    gen.origin = parse_vec(get<json>(u, "origin", where), "users.origin");
    gen.extent = parse_vec(get<json>(u, "extent", where), "users.extent");
    gen.seed = get<std::uint64_t>(u, "seed", where);
  } else {
    throw ConfigError("users: unknown generator '" + kind + "'");
  }
  if (gen.count < 0) throw ConfigError("users: count must be >= 0");
  return gen;
}

json users_json(const UserGenerator& gen) {
  switch (gen.kind) {
    case UserGenerator::Kind::Explicit: {
      json pos = json::array();
      for (const Vec3& p : gen.positions) pos.push_back(vec_json(p));
      return {{"generator", "explicit"}, {"positions", pos}};
    }
    case UserGenerator::Kind::Grid:
      return {{"generator", "grid"},
              {"count", gen.count},
              {"origin", vec_json(gen.origin)},
              {"spacing_m", gen.spacing_m},
              {"columns", gen.columns}};
    case UserGenerator::Kind::Uniform:
      return {{"generator", "uniform"},
              {"count", gen.count},
              {"origin", vec_json(gen.origin)},
              {"extent", vec_json(gen.extent)},
              {"seed", gen.seed}};
  }
  return {};
}

void parse_training(const json& t, TrainConfig& cfg) {
  const std::string where = "training";
  expect_keys(t, where,
              {"episodes", "episode_length", "buffer_size", "epochs", "entropy_beta",
               "learning_rate", "gamma", "clip", "hidden", "seed", "ablation",
               "checkpoint_interval"});
  cfg.episodes = get_or<int>(t, "episodes", cfg.episodes, where);
  cfg.episode_length = get_or<int>(t, "episode_length", cfg.episode_length, where);
  cfg.buffer_size = get_or<int>(t, "buffer_size", cfg.buffer_size, where);
  cfg.seed = get_or<std::uint64_t>(t, "seed", cfg.seed, where);
  cfg.checkpoint_interval = get_or<int>(t, "checkpoint_interval", cfg.checkpoint_interval, where);
  if (t.contains("ablation"))
    cfg.ablation = parse_observation_mode(get<std::string>(t, "ablation", where));
  PpoHyper& h = cfg.ppo;
  h.epochs = get_or<int>(t, "epochs", h.epochs, where);
  h.entropy_beta = get_or<double>(t, "entropy_beta", h.entropy_beta, where);
  h.learning_rate = get_or<double>(t, "learning_rate", h.learning_rate, where);
  h.gamma = get_or<double>(t, "gamma", h.gamma, where);
  h.clip = get_or<double>(t, "clip", h.clip, where);
  h.hidden = get_or<int>(t, "hidden", h.hidden, where);
}

json training_json(const TrainConfig& cfg) {
  return {{"episodes", cfg.episodes},
          {"episode_length", cfg.episode_length},
          {"buffer_size", cfg.buffer_size},
          {"epochs", cfg.ppo.epochs},
          {"entropy_beta", cfg.ppo.entropy_beta},
          {"learning_rate", cfg.ppo.learning_rate},
          {"gamma", cfg.ppo.gamma},
          {"clip", cfg.ppo.clip},
          {"hidden", cfg.ppo.hidden},
          {"seed", cfg.seed},
          {"ablation", std::string(to_string(cfg.ablation))},
          {"checkpoint_interval", cfg.checkpoint_interval}};
}

}  // namespace

int ScenarioConfig::num_uavs() const {
  int n = 0;
  for (const ApConfig& ap : aps) n += ap.kind == ApKind::Uav;
  return n;
}

int ScenarioConfig::num_base_stations() const {
  int n = 0;
  for (const ApConfig& ap : aps) n += ap.kind == ApKind::BaseStation;
  return n;
}

ScenarioConfig parse_scenario(const json& doc) {
  expect_keys(doc, "scenario",
              {"format_version", "name", "description", "channels", "frame_len_s", "aps",
               "users", "link", "reward", "arrival_indexing", "policy", "training",
               "evaluation_episodes"});
  if (doc.contains("format_version") && get<int>(doc, "format_version", "scenario") != 1)
    throw ConfigError("scenario: unsupported format_version");
  ScenarioConfig cfg;
  cfg.name = get_or<std::string>(doc, "name", "", "scenario");
  cfg.description = get_or<std::string>(doc, "description", "", "scenario");
  cfg.channels = get<int>(doc, "channels", "scenario");
  cfg.frame_len_s = get_or<double>(doc, "frame_len_s", 1e-3, "scenario");
  cfg.policy = get_or<std::string>(doc, "policy", cfg.policy, "scenario");
  cfg.evaluation_episodes =
      get_or<int>(doc, "evaluation_episodes", cfg.evaluation_episodes, "scenario");
  if (doc.contains("arrival_indexing"))
    cfg.indexing = parse_indexing(get<std::string>(doc, "arrival_indexing", "scenario"));

  const json& aps = get<json>(doc, "aps", "scenario");
  if (!aps.is_array()) throw ConfigError("aps: expected a list");
  for (size_t i = 0; i < aps.size(); ++i) {
    const std::string where = "aps[" + std::to_string(i) + "]";
    expect_keys(aps[i], where, {"kind", "position", "radius_m", "delay_frames"});
    ApConfig ap;
    try {
      ap.kind = parse_ap_kind(get<std::string>(aps[i], "kind", where));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    ap.position = parse_vec(get<json>(aps[i], "position", where), where + ".position");
    ap.radius_m = get<double>(aps[i], "radius_m", where);
    if (aps[i].contains("delay_frames"))
      ap.delay_frames = get<int>(aps[i], "delay_frames", where);
    cfg.aps.push_back(ap);
  }
  cfg.users = parse_users(get<json>(doc, "users", "scenario"));

  if (doc.contains("link")) {
    const json& l = doc.at("link");
    expect_keys(l, "link", {"bandwidth_hz", "noise_power_w", "payload_bits"});
    cfg.link.bandwidth_hz = get_or<double>(l, "bandwidth_hz", cfg.link.bandwidth_hz, "link");
    cfg.link.noise_power_w = get_or<double>(l, "noise_power_w", cfg.link.noise_power_w, "link");
    cfg.link.payload_bits = get_or<double>(l, "payload_bits", cfg.link.payload_bits, "link");
  }
  cfg.link.frame_len_s = cfg.frame_len_s;
  if (doc.contains("reward")) {
    const json& r = doc.at("reward");
    expect_keys(r, "reward", {"aoi_weight", "energy_weight"});
    cfg.weights.aoi = get_or<double>(r, "aoi_weight", cfg.weights.aoi, "reward");
    cfg.weights.energy = get_or<double>(r, "energy_weight", cfg.weights.energy, "reward");
  }
  if (doc.contains("training")) parse_training(doc.at("training"), cfg.training);

  if (cfg.channels < 1) throw ConfigError("channels must be >= 1");
  if (!(cfg.frame_len_s > 0.0)) throw ConfigError("frame_len_s must be > 0");
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const ScenarioConfig& cfg) {
  json aps = json::array();
  for (const ApConfig& ap : cfg.aps) {
    json a = {{"kind", std::string(to_string(ap.kind))},
              {"position", vec_json(ap.position)},
              {"radius_m", ap.radius_m}};
    if (ap.delay_frames) a["delay_frames"] = *ap.delay_frames;
    aps.push_back(a);
  }
  return {{"format_version", 1},
          {"name", cfg.name},
          {"description", cfg.description},
          {"channels", cfg.channels},
          {"frame_len_s", cfg.frame_len_s},
          {"aps", aps},
          {"users", users_json(cfg.users)},
          {"link",
           {{"bandwidth_hz", cfg.link.bandwidth_hz},
            {"noise_power_w", cfg.link.noise_power_w},
            {"payload_bits", cfg.link.payload_bits}}},
          {"reward", {{"aoi_weight", cfg.weights.aoi}, {"energy_weight", cfg.weights.energy}}},
          {"arrival_indexing", indexing_name(cfg.indexing)},
          {"policy", cfg.policy},
          {"evaluation_episodes", cfg.evaluation_episodes},
          {"training", training_json(cfg.training)}};
}

std::string canonical_text(const ScenarioConfig& cfg) {
  // nlohmann objects iterate in key order, so dump() is canonical.
  return to_json(cfg).dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<UserNode> generate_users(const UserGenerator& gen) {
  std::vector<UserNode> users;
  switch (gen.kind) {
    case UserGenerator::Kind::Explicit:
      for (const Vec3& p : gen.positions)
        users.push_back({static_cast<int>(users.size()), p});
      break;
    case UserGenerator::Kind::Grid: {
      const int cols = gen.columns > 0
                           ? gen.columns
                           : static_cast<int>(std::ceil(std::sqrt(std::max(gen.count, 1))));
      for (int i = 0; i < gen.count; ++i)
        users.push_back({i, {gen.origin.x + gen.spacing_m * (i % cols),
                             gen.origin.y + gen.spacing_m * (i / cols), gen.origin.z}});
      break;
    }
    case UserGenerator::Kind::Uniform: {
      std::mt19937_64 rng(gen.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < gen.count; ++i) {
        const double x = gen.origin.x + gen.extent.x * unit(rng);
        const double y = gen.origin.y + gen.extent.y * unit(rng);
        users.push_back({i, {x, y, gen.origin.z}});
      }
      break;
    }
  }
  return users;
}

NetworkSpec to_network_spec(const ScenarioConfig& cfg) {
  NetworkSpec spec;
  spec.channels = cfg.channels;
  spec.frame_len_s = cfg.frame_len_s;
  for (size_t i = 0; i < cfg.aps.size(); ++i) {
    const ApConfig& a = cfg.aps[i];
    spec.aps.push_back({static_cast<int>(i), a.kind, a.position, a.radius_m, a.delay_frames});
  }
  spec.users = generate_users(cfg.users);
  return spec;
}

Topology build_topology(const ScenarioConfig& cfg) {
  return build_topology(to_network_spec(cfg));
}

EnvConfig World::env_config(ObservationMode mode) const {
  return EnvConfig{config.weights, mode, config.indexing};
}

World make_world(const ScenarioConfig& cfg) {
  auto topo = std::make_shared<const Topology>(build_topology(cfg));
  LinkParams link = cfg.link;
  link.frame_len_s = cfg.frame_len_s;
  EnergyTable energy = build_energy_table(*topo, link);
  return World{cfg, std::move(topo), std::move(energy)};
}

std::vector<std::string> lint_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> problems;
  try {
    const World world = make_world(cfg);
    const Topology& topo = *world.topology;
    if (topo.num_users() == 0) problems.push_back("scenario has no users");
    for (int k = 1; k < topo.num_aps(); ++k)
      if (topo.covered_users(k).empty())
        problems.push_back("AP " + std::to_string(k) + " covers no user");
    for (int k = 0; k < topo.num_aps(); ++k)
      for (int u : topo.covered_users(k))
        if (!std::isfinite(world.energy.at(k, u)))
          problems.push_back("non-finite energy for AP " + std::to_string(k) + ", user " +
                             std::to_string(u + 1));
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  const TrainConfig& t = cfg.training;
  if (t.episodes < 1) problems.push_back("training.episodes must be >= 1");
  if (t.episode_length < 1) problems.push_back("training.episode_length must be >= 1");
  if (t.buffer_size < 1 || t.buffer_size > t.episode_length)
    problems.push_back("training.buffer_size must lie in [1, episode_length]");
  if (t.ppo.epochs < 1) problems.push_back("training.epochs must be >= 1");
  if (!(t.ppo.clip > 0.0 && t.ppo.clip < 1.0)) problems.push_back("training.clip must lie in (0, 1)");
  if (!(t.ppo.gamma >= 0.0 && t.ppo.gamma < 1.0)) problems.push_back("training.gamma must lie in [0, 1)");
  if (!(t.ppo.learning_rate > 0.0)) problems.push_back("training.learning_rate must be > 0");
  if (t.ppo.entropy_beta < 0.0) problems.push_back("training.entropy_beta must be >= 0");
  if (t.ppo.hidden < 1) problems.push_back("training.hidden must be >= 1");
  if (cfg.weights.aoi < 0.0 || cfg.weights.energy < 0.0)
    problems.push_back("reward weights must be >= 0");
  return problems;
}

}  // namespace saguin
