#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>

#include "json.hpp"
#include "saguin/cli.hpp"
#include "saguin/env.hpp"
#include "saguin/errors.hpp"
#include "saguin/metrics.hpp"
#include "saguin/scenario.hpp"
#include "saguin/schedulers.hpp"

namespace py = pybind11;
using namespace saguin;

namespace {

ScenarioConfig config_from(const std::string& preset_name, const std::string& scenario_json) {
  if (!scenario_json.empty()) return parse_scenario(nlohmann::json::parse(scenario_json));
  return preset(preset_name);
}

py::dict episode_dict(const EpisodeMetrics& m) {
  py::dict d;
  d["episode"] = m.episode;
  d["mean_reward"] = m.mean_reward;
  d["mean_ap_reward"] = m.mean_ap_reward;
  d["aoi_sum"] = m.aoi_sum;
  d["energy_sum"] = m.energy_sum;
  d["interference"] = m.interference;
  d["objective"] = m.objective;
  d["mean_aoi"] = m.mean_aoi;
  d["mean_energy"] = m.mean_energy;
  return d;
}

py::dict stats_dict(const FrameStats& s) {
  py::dict d;
  d["frame"] = s.frame;
  d["aoi"] = s.aoi;
  d["ap_energy"] = s.ap_energy;
  d["ap_rewards"] = s.ap_rewards;
  d["interference"] = s.interference;
  d["aoi_sum"] = s.aoi_sum;
  d["energy_sum"] = s.energy_sum;
  d["reward"] = s.reward;
  return d;
}

// Environment bundled with the world that owns its topology.
class PyEnv {
 public:
  PyEnv(const std::string& preset_name, const std::string& scenario_json,
        const std::string& ablation)
      : world_(make_world(config_from(preset_name, scenario_json))),
        env_(world_.topology, world_.energy,
             world_.env_config(parse_observation_mode(ablation))) {}

  void reset(std::uint64_t seed) {
    env_.reset(seed);
    policies_.clear();
  }
  py::dict step(const JointAssignment& joint) { return stats_dict(env_.step(joint).stats); }
  py::dict observe(int k) const {
    const LocalObservation o = env_.observe(k);
    py::dict d;
    d["y"] = o.y;
    d["v"] = o.v;
    return d;
  }
  // One persistent policy per name until the next reset, so cursors advance.
  JointAssignment baseline_action(const std::string& policy, std::uint64_t seed) {
    auto it = policies_.find(policy);
    if (it == policies_.end())
      it = policies_.emplace(policy, BaselinePolicy(parse_scheduler_kind(policy), env_.topology(), seed)).first;
    return it->second.act(env_);
  }
  std::vector<double> global_observation() const { return env_.global_observation(); }
  const std::vector<long>& aoi() const { return env_.aoi(); }
  int frame() const { return env_.frame(); }
  int num_aps() const { return env_.topology().num_aps(); }
  int num_users() const { return env_.topology().num_users(); }
  int channels() const { return env_.topology().channels(); }
  std::vector<int> covered_users(int k) const { return env_.topology().covered_users(k); }

 private:
  World world_;
  Environment env_;
  std::map<std::string, BaselinePolicy> policies_;
};

}  // namespace

PYBIND11_MODULE(_saguin, m) {
  m.doc() = "Scheduling simulator and MAPPO trainer for space-air-ground networks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SchedulingError>(m, "SchedulingError", PyExc_ValueError);

  m.def("presets", [] {
    std::vector<std::string> names;
    for (const auto& [name, cfg] : preset_library()) names.push_back(name);
    return names;
  });

  m.def("scenario_json", [](const std::string& name) { return to_json(preset(name)).dump(2); },
        py::arg("preset"));

  m.def(
      "simulate",
      [](const std::string& policy, const std::string& preset_name, const std::string& scenario_json,
         std::uint64_t seed, int episodes, int frames) {
        const World world = make_world(config_from(preset_name, scenario_json));
        py::list out;
        for (const auto& e : run_baseline(world, parse_scheduler_kind(policy), seed, episodes, frames))
          out.append(episode_dict(e));
        return out;
      },
      py::arg("policy"), py::arg("preset") = "small", py::arg("scenario_json") = "",
      py::arg("seed") = 1, py::arg("episodes") = 1, py::arg("frames") = 1000);

  m.def(
      "aoi_bound",
      [](const std::string& preset_name, const std::string& scenario_json, int horizon) {
        const World world = make_world(config_from(preset_name, scenario_json));
        const AoiBound b = horizon > 0 ? aoi_lower_bound_finite(*world.topology, horizon)
                                       : aoi_lower_bound(*world.topology);
        py::dict d;
        d["total"] = b.total;
        d["per_user"] = b.per_user;
        return d;
      },
      py::arg("preset") = "small", py::arg("scenario_json") = "", py::arg("horizon") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli_main(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a `saguin` subcommand in process; returns (exit code, stdout, stderr).");

  py::class_<PyEnv>(m, "Environment")
      .def(py::init<const std::string&, const std::string&, const std::string&>(),
           py::arg("preset") = "small", py::arg("scenario_json") = "",
           py::arg("ablation") = "delayed")
      .def("reset", &PyEnv::reset, py::arg("seed") = 0)
      .def("step", &PyEnv::step, py::arg("joint"),
           "Rows per AP; entry p is 0 for idle or u + 1 to serve user u.")
      .def("observe", &PyEnv::observe, py::arg("k"))
      .def("baseline_action", &PyEnv::baseline_action, py::arg("policy"), py::arg("seed") = 0)
      .def("global_observation", &PyEnv::global_observation)
      .def("covered_users", &PyEnv::covered_users, py::arg("k"))
      .def_property_readonly("aoi", &PyEnv::aoi)
      .def_property_readonly("frame", &PyEnv::frame)
      .def_property_readonly("num_aps", &PyEnv::num_aps)
      .def_property_readonly("num_users", &PyEnv::num_users)
      .def_property_readonly("channels", &PyEnv::channels);
}
