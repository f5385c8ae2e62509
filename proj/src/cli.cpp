#include "saguin/cli.hpp"

#include <algorithm>
#if defined(__GLIBC__)
#include <malloc.h>
#endif
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "saguin/errors.hpp"
#include "saguin/mappo.hpp"
#include "saguin/metrics.hpp"
#include "saguin/scenario.hpp"
#include "saguin/schedulers.hpp"

namespace saguin {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string scenario;
  std::string preset;
  std::string policy;
  std::uint64_t seed = 1;
  std::optional<int> episodes;
  std::optional<int> frames;
  std::string out;
  std::string ablation = "delayed";
  std::string checkpoint;
  std::optional<int> horizon;
  bool print_config = false;
  bool quiet = false;
};

ScenarioConfig load_config(const Options& o) {
  if (o.scenario.empty() == o.preset.empty())
    throw CLI::ValidationError("exactly one of --scenario or --preset is required");
  return o.scenario.empty() ? preset(o.preset) : load_scenario_file(o.scenario);
}

// A shortened episode caps the update buffer at one episode.
void set_episode_length(ScenarioConfig& cfg, int frames) {
  cfg.training.episode_length = frames;
  cfg.training.buffer_size = std::min(cfg.training.buffer_size, std::max(frames, 1));
}

void apply_overrides(const Options& o, ScenarioConfig& cfg) {
  if (o.episodes) cfg.training.episodes = *o.episodes;
  if (o.frames) set_episode_length(cfg, *o.frames);
  cfg.training.seed = o.seed;
  cfg.training.ablation = parse_observation_mode(o.ablation);
  const auto problems = lint_scenario(cfg);
  if (!problems.empty()) throw ConfigError(problems.front());
}

std::string run_id(const std::string& command, const ScenarioConfig& cfg,
                   const std::string& policy, std::uint64_t seed) {
  return command + "-" + (cfg.name.empty() ? "scenario" : cfg.name) + "-" + policy + "-s" +
         std::to_string(seed) + "-" + config_hash(cfg).substr(0, 8);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_final(std::ostream& out, const RunRecord& run) {
  const auto& eps = run.episodes;
  const size_t tail = std::min<size_t>(eps.size(), 50);
  double reward = 0.0, aoi = 0.0, energy = 0.0;
  long interference = 0;
  for (size_t i = eps.size() - tail; i < eps.size(); ++i) {
    reward += eps[i].mean_reward / static_cast<double>(tail);
    aoi += eps[i].aoi_sum / static_cast<double>(tail);
    energy += eps[i].energy_sum / static_cast<double>(tail);
    interference += eps[i].interference;
  }
  out << run.policy << ": last " << tail << " episodes mean_reward=" << format_double(reward)
      << " aoi_sum=" << format_double(aoi) << " energy_sum=" << format_double(energy)
      << " interference=" << interference << '\n';
}

int cmd_simulate(const Options& o, std::ostream& out) {
  ScenarioConfig cfg = load_config(o);
  apply_overrides(o, cfg);
  const std::string policy = o.policy.empty() ? "round-robin" : o.policy;
  if (policy == "mappo")
    throw CLI::ValidationError("simulate runs baselines; use train or evaluate for mappo");
  const SchedulerKind kind = parse_scheduler_kind(policy);
  cfg.policy = std::string(to_string(kind));
  const World world = make_world(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunRecord run;
  run.command = "simulate";
  run.policy = cfg.policy;
  run.ablation = o.ablation;
  run.seed = o.seed;
  run.config = cfg;
  run.episodes = run_baseline(world, kind, o.seed, cfg.training.episodes,
                              cfg.training.episode_length, cfg.training.ablation);
  run.wall_clock_s = seconds_since(start);
  run.run_id = run_id(run.command, cfg, run.policy, o.seed);
  if (!o.out.empty()) emit_metrics(run, o.out);
  print_final(out, run);
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg = load_config(o);
  apply_overrides(o, cfg);
  cfg.policy = "mappo";
  const World world = make_world(cfg);
  TrainConfig tc = cfg.training;
  if (!o.out.empty() && tc.checkpoint_interval > 0)
    tc.checkpoint_dir = (fs::path(o.out) / "checkpoints").string();
  const auto start = std::chrono::steady_clock::now();
  MappoTrainer trainer(world.topology, world.energy, world.env_config(), tc);
  RunRecord run;
  run.command = "train";
  run.policy = "mappo";
  run.ablation = o.ablation;
  run.seed = o.seed;
  run.config = cfg;
  run.run_id = run_id(run.command, cfg, run.policy, o.seed);
  const bool quiet = o.quiet;
  run.episodes = trainer.train([&](const EpisodeMetrics& m) {
    if (!quiet && (m.episode % 10 == 0 || m.episode == 1))
      err << "episode " << m.episode << " reward=" << format_double(m.mean_reward)
          << " aoi_sum=" << format_double(m.aoi_sum)
          << " interference=" << m.interference << '\n';
  });
  run.wall_clock_s = seconds_since(start);
  if (!o.out.empty()) {
    emit_metrics(run, o.out);
    trainer.bundle().save((fs::path(o.out) / "checkpoint").string());
  }
  print_final(out, run);
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  if (o.checkpoint.empty()) throw CLI::ValidationError("--checkpoint is required");
  ScenarioConfig cfg = load_config(o);
  if (!o.episodes) cfg.training.episodes = cfg.evaluation_episodes;
  apply_overrides(o, cfg);
  const PolicyBundle bundle = PolicyBundle::load(o.checkpoint);
  cfg.training.ablation = bundle.mode;
  cfg.policy = "mappo";
  const World world = make_world(cfg);
  const int E = cfg.training.episodes;
  const int T = cfg.training.episode_length;
  const auto start = std::chrono::steady_clock::now();

  RunRecord run;
  run.command = "evaluate";
  run.policy = "mappo";
  run.ablation = std::string(to_string(bundle.mode));
  run.seed = o.seed;
  run.config = cfg;
  run.episodes = evaluate(bundle, world.topology, world.energy, world.env_config(), E, T, o.seed);
  run.wall_clock_s = seconds_since(start);
  run.run_id = run_id(run.command, cfg, run.policy, o.seed);

  // Benchmark table: the checkpoint against every baseline and the bound.
  std::ostringstream table;
  table << "# saguin benchmark v" << kMetricsFormatVersion << '\n'
        << "policy,mean_reward,aoi_sum,energy_sum,interference,objective\n";
  auto row = [&](const std::string& name, const std::vector<EpisodeMetrics>& eps) {
    double r = 0.0, a = 0.0, e = 0.0, f = 0.0;
    long i = 0;
    for (const EpisodeMetrics& m : eps) {
      r += m.mean_reward / static_cast<double>(eps.size());
      a += m.aoi_sum / static_cast<double>(eps.size());
      e += m.energy_sum / static_cast<double>(eps.size());
      f += m.objective / static_cast<double>(eps.size());
      i += m.interference;
    }
    table << name << ',' << format_double(r) << ',' << format_double(a) << ','
          << format_double(e) << ',' << i << ',' << format_double(f) << '\n';
  };
  row("mappo", run.episodes);
  for (SchedulerKind kind : {SchedulerKind::RoundRobin, SchedulerKind::AoiPriority,
                             SchedulerKind::Random, SchedulerKind::Idle})
    row(std::string(to_string(kind)), run_baseline(world, kind, o.seed, E, T));
  const AoiBound bound = aoi_lower_bound_finite(*world.topology, T);
  table << "bound,," << format_double(bound.total) << ",,,\n";

  if (!o.out.empty()) {
    emit_metrics(run, o.out);
    std::ofstream os(fs::path(o.out) / "benchmark.csv", std::ios::binary);
    os << table.str();
  }
  out << table.str();
  return kExitOk;
}

int cmd_bound(const Options& o, std::ostream& out) {
  ScenarioConfig cfg = load_config(o);
  const World world = make_world(cfg);
  const int horizon = o.horizon.value_or(cfg.training.episode_length);
  const AoiBound asymptotic = aoi_lower_bound(*world.topology);
  const AoiBound finite = aoi_lower_bound_finite(*world.topology, horizon);
  const json doc = {{"format_version", kMetricsFormatVersion},
                    {"scenario", cfg.name},
                    {"per_user", asymptotic.per_user},
                    {"total", asymptotic.total},
                    {"horizon", horizon},
                    {"finite_per_user", finite.per_user},
                    {"finite_total", finite.total}};
  const std::string text = doc.dump(2) + "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream os(fs::path(o.out) / "bound.json", std::ios::binary);
    os << text;
  }
  out << text;
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg = load_config(o);
  if (o.print_config) {
    out << canonical_text(cfg);
    return kExitOk;
  }
  const auto problems = lint_scenario(cfg);
  if (!problems.empty()) {
    for (const std::string& p : problems) err << "error: " << p << '\n';
    return kExitConfig;
  }
  const World world = make_world(cfg);
  const Topology& topo = *world.topology;
  out << "scenario " << (cfg.name.empty() ? "(unnamed)" : cfg.name) << ": "
      << topo.num_aps() << " APs (" << topo.num_uavs() << " UAV, "
      << topo.num_base_stations() << " BS), " << topo.num_users() << " users, "
      << topo.channels() << " channels\n";
  out << "coverage / delay (frames) / energy (J) per AP, users 1.." << topo.num_users() << '\n';
  for (int k = 0; k < topo.num_aps(); ++k) {
    out << "  ap " << k << " " << to_string(topo.kind(k)) << ":";
    for (int u = 0; u < topo.num_users(); ++u) {
      if (!topo.covers(k, u)) {
        out << " -";
        continue;
      }
      out << " " << topo.delay(k, u) << "/" << format_double(world.energy.at(k, u));
    }
    out << '\n';
  }
  out << "ok\n";
  return kExitOk;
}

int cmd_trace(const Options& o, std::ostream& out) {
  ScenarioConfig cfg = load_config(o);
  if (!o.frames) set_episode_length(cfg, 200);
  apply_overrides(o, cfg);
  if (o.out.empty()) throw CLI::ValidationError("--out is required for trace");
  const World world = make_world(cfg);
  const int T = cfg.training.episode_length;
  fs::create_directories(o.out);
  std::ofstream ledger_log(fs::path(o.out) / "ledger.log", std::ios::binary);
  ledger_log << "# saguin ledger v" << kMetricsFormatVersion << '\n'
             << "frame,ap,user,channel,accum,delay\n";

  std::optional<PolicyBundle> bundle;
  if (!o.checkpoint.empty()) bundle = PolicyBundle::load(o.checkpoint);
  const ObservationMode mode = bundle ? bundle->mode : cfg.training.ablation;
  Environment env(world.topology, world.energy, world.env_config(mode));
  env.reset(o.seed);
  std::optional<BaselinePolicy> baseline;
  std::vector<PpoInstance> actors;
  if (bundle) {
    for (int k = 0; k < world.topology->num_aps(); ++k)
      actors.emplace_back(k, bundle->actors.at(static_cast<size_t>(k)), nn::Mlp({1, 1}),
                          bundle->layouts.at(static_cast<size_t>(k)), PpoHyper{});
  } else {
    baseline.emplace(parse_scheduler_kind(o.policy.empty() ? "round-robin" : o.policy),
                     *world.topology, o.seed);
  }
  std::mt19937_64 unused(o.seed);
  std::vector<FrameStats> frames;
  for (int t = 0; t < T; ++t) {
    JointAssignment joint;
    if (baseline) {
      joint = baseline->act(env);
    } else {
      for (size_t k = 0; k < actors.size(); ++k)
        joint.push_back(actors[k].act(env.observe(static_cast<int>(k)).flat(), unused, true).executed);
    }
    frames.push_back(env.step(joint).stats);
    env.ledger().write_log(ledger_log);
  }
  {
    std::ofstream os(fs::path(o.out) / "frames.csv", std::ios::binary);
    write_frames_csv(os, frames);
  }
  {
    std::ofstream os(fs::path(o.out) / "frames.bin", std::ios::binary);
    write_frames_binary(os, frames);
  }
  long interference = 0;
  for (const FrameStats& s : frames) interference += s.interference;
  out << "traced " << T << " frames, interference " << interference << '\n';
  return kExitOk;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, cfg] : preset_library()) names.push_back(name);
  return names;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scheduling simulator and MAPPO trainer for space-air-ground networks", "saguin"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file (JSON)");
    sub->add_option("--preset", o.preset, "Built-in scenario")
        ->check(CLI::IsMember(preset_names()));
    sub->add_option("--seed", o.seed, "Seed")->capture_default_str();
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--episodes", o.episodes, "Episode count");
    sub->add_option("--frames", o.frames, "Frames per episode");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--ablation", o.ablation, "Observation mode of the actors")
        ->check(CLI::IsMember({"delayed", "instant", "no-aoi"}))
        ->capture_default_str();
  };
  const std::vector<std::string> policies = {"mappo", "round-robin", "rr", "priority",
                                             "random", "idle"};

  CLI::App* simulate = app.add_subcommand("simulate", "Roll out a baseline policy");
  add_common(simulate);
  add_run(simulate);
  simulate->add_option("--policy", o.policy, "Policy")->check(CLI::IsMember(policies));

  CLI::App* train = app.add_subcommand("train", "Train MAPPO");
  add_common(train);
  add_run(train);
  train->add_option("--policy", o.policy, "Policy")->check(CLI::IsMember({"mappo"}));
  train->add_flag("--quiet", o.quiet, "No progress output");

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Benchmark a checkpoint");
  add_common(evaluate_cmd);
  add_run(evaluate_cmd);
  evaluate_cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint directory");
  evaluate_cmd->add_option("--policy", o.policy, "Policy")->check(CLI::IsMember({"mappo"}));

  CLI::App* bound = app.add_subcommand("bound", "AoI lower bound");
  add_common(bound);
  bound->add_option("--horizon", o.horizon, "Frames for the finite-horizon bound");
  bound->add_option("--out", o.out, "Output directory");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario");
  add_common(validate);
  validate->add_flag("--print-config", o.print_config, "Print the canonical scenario");

  CLI::App* trace = app.add_subcommand("trace", "Dump per-frame records and the ledger log");
  add_common(trace);
  add_run(trace);
  trace->add_option("--policy", o.policy, "Baseline policy")->check(CLI::IsMember(policies));
  trace->add_option("--checkpoint", o.checkpoint, "Trace a checkpoint instead");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (train->parsed()) return cmd_train(o, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (bound->parsed()) return cmd_bound(o, out);
    if (validate->parsed()) return cmd_validate(o, out, err);
    if (trace->parsed()) return cmd_trace(o, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

void configure_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 16 << 20);
  mallopt(M_TRIM_THRESHOLD, 64 << 20);
#endif
}

}  // namespace saguin
