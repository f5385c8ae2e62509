// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "saguin/cli.hpp"
#include "saguin/env.hpp"
#include "saguin/mappo.hpp"
#include "saguin/neural.hpp"
#include "saguin/radio.hpp"
#include "saguin/ripple.hpp"
#include "saguin/scenario.hpp"
#include "saguin/schedulers.hpp"

using namespace saguin;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path work_dir;
  int seeds = 5;
  int episodes = 300;
  int baseline_episodes = 50;
  int final_window = 50;
  std::set<int> only;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  if (out_text) *out_text = out.str();
  if (code != kExitOk) std::cerr << "saguin exited " << code << ": " << err.str() << '\n';
  return code;
}

// Rows of a versioned CSV as column-name -> value maps.
std::vector<std::map<std::string, double>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);  // version comment
  std::getline(is, line);
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::vector<std::map<std::string, double>> rows;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::map<std::string, double> row;
    for (const auto& name : names) {
      std::getline(ss, cell, ',');
      row[name] = std::stod(cell);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double tail_mean(const std::vector<std::map<std::string, double>>& rows,
                 const std::string& column, int window) {
  const size_t n = std::min(rows.size(), static_cast<size_t>(window));
  double sum = 0.0;
  for (size_t i = rows.size() - n; i < rows.size(); ++i) sum += rows[i].at(column);
  return n ? sum / static_cast<double>(n) : 0.0;
}

// ---------------------------------------------------------------- 1

Verdict ripple_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  long mismatches = 0, landings = 0, collisions = 0;
  const int schedules = 1200, frames = 50;
  for (int trial = 0; trial < schedules; ++trial) {
    const Topology topo = oracle::random_topology(rng, 2, 3, 4, 6, 8);
    const bool plus_d = trial % 2 == 1;
    const auto sched = oracle::random_schedule(topo, frames, 0.5, rng);
    const auto expected = oracle::recount_ripple(topo, sched, plus_d);
    PropagationLedger ledger(plus_d ? ArrivalIndexing::Interference
                                    : ArrivalIndexing::AoiIndicator);
    for (int t = 0; t < frames; ++t) {
      ledger.launch(sched[t], topo);
      const ArrivalReport r = ledger.advance();
      std::vector<oracle::Landing> got;
      for (const auto& cell : r.cells)
        for (const auto& a : cell.packets) got.push_back({a.ap, cell.user, cell.channel, a.launch_frame});
      std::sort(got.begin(), got.end());
      if (r.interference_count != expected.counts[t] || got != expected.frames[t]) ++mismatches;
      landings += static_cast<long>(got.size());
      collisions += r.interference_count;
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 60.0,
          std::to_string(schedules) + " schedules, " + std::to_string(landings) + " landings, " +
              std::to_string(collisions) + " collisions, " + std::to_string(mismatches) +
              " mismatched frames, " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 2

std::shared_ptr<const Topology> worked_topology() {
  NetworkSpec spec;
  spec.channels = 1;
  spec.aps = {{0, ApKind::Satellite, {0, 0, 550e3}, 1e6, 5},
              {1, ApKind::Uav, {0, 0, 100}, 1000, 2},
              {2, ApKind::BaseStation, {0, 0, 30}, 1000, std::nullopt}};
  spec.users = {{0, {0, 0, 0}}};
  return std::make_shared<const Topology>(build_topology(spec));
}

struct WorkedOutcome {
  std::vector<int> collisions_per_frame;
  std::vector<std::pair<int, int>> cells;  // (frame, channel) of each collision
  long aoi_after_frame5 = 0;
};

WorkedOutcome run_worked_example(ArrivalIndexing indexing) {
  const auto topo = worked_topology();
  EnvConfig cfg;
  cfg.indexing = indexing;
  Environment env(topo, build_energy_table(*topo, LinkParams{}), cfg);
  WorkedOutcome out;
  for (int t = 0; t < 8; ++t) {
    JointAssignment j = idle_assignment(*topo);
    if (t == 0) j[0][0] = 1;
    if (t == 3) j[1][0] = 1;
    if (t == 5) j[2][0] = 1;
    const StepOutcome s = env.step(j);
    out.collisions_per_frame.push_back(s.stats.interference);
    for (const auto& cell : s.arrivals.cells)
      if (cell.collided) out.cells.emplace_back(t, cell.channel);
    if (t == 5) out.aoi_after_frame5 = env.aoi()[0];
  }
  return out;
}

Verdict worked_example() {
  const WorkedOutcome w = run_worked_example(ArrivalIndexing::Interference);
  int total = 0;
  for (int c : w.collisions_per_frame) total += c;
  // x = 5 before frame 5; a delivery would reset it, a collision leaves x + 1
  const bool pass = total == 1 && w.cells.size() == 1 && w.cells[0] == std::pair{5, 0} &&
                    w.aoi_after_frame5 == 6;
  std::string where = w.cells.empty() ? "none"
                                      : "frame " + std::to_string(w.cells[0].first) +
                                            " channel " + std::to_string(w.cells[0].second + 1);
  return {pass, std::to_string(total) + " collision(s), at " + where +
                    ", AoI after frame 5 = " + std::to_string(w.aoi_after_frame5)};
}

std::string worked_example_default_indexing() {
  const WorkedOutcome w = run_worked_example(ArrivalIndexing::AoiIndicator);
  std::string s;
  for (const auto& [frame, channel] : w.cells)
    s += " frame " + std::to_string(frame) + " channel " + std::to_string(channel + 1);
  return "with arrival at t0 + d - 1 the collisions are:" + (s.empty() ? " none" : s) +
         ", AoI after frame 5 = " + std::to_string(w.aoi_after_frame5);
}

// ---------------------------------------------------------------- 3

Verdict aoi_interpreter() {
  const auto start = Clock::now();
  std::mt19937_64 rng(3003);
  long frames = 0, mismatches = 0;
  const int rollouts = 1000, T = 60;
  for (int trial = 0; trial < rollouts; ++trial) {
    auto topo = std::make_shared<const Topology>(oracle::random_topology(rng, 2, 2, 3, 5, 6));
    const EnergyTable energy = build_energy_table(*topo, LinkParams{});
    const bool plus_d = trial % 2 == 0;
    EnvConfig cfg;
    cfg.indexing = plus_d ? ArrivalIndexing::Interference : ArrivalIndexing::AoiIndicator;
    Environment env(topo, energy, cfg);
    const auto sched = oracle::random_schedule(*topo, T, 0.4, rng);
    const auto ref = oracle::interpret_aoi(*topo, energy, cfg.weights, sched, plus_d);
    for (int t = 0; t < T; ++t) {
      const FrameStats s = env.step(sched[t]).stats;
      ++frames;
      if (s.aoi != ref.aoi[t] || s.interference != ref.interference[t] ||
          s.ap_energy != ref.energy[t] ||
          std::abs(s.reward - ref.reward[t]) > 1e-12 * std::max(1.0, std::abs(ref.reward[t])))
        ++mismatches;
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 60.0,
          std::to_string(rollouts) + " rollouts, " + std::to_string(frames) + " frames, " +
              std::to_string(mismatches) + " mismatched, " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 4

struct ToyProblem {
  nn::Mlp actor;
  nn::Mlp critic;
  HeadLayout layout;
  PpoBatch batch;
  Eigen::VectorXd adv;
  PpoHyper hyper;
};

// Behavior probabilities come from a perturbed actor so ratios differ from 1.
ToyProblem toy_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  ToyProblem tp;
  tp.layout = HeadLayout{3, {0, 1, 3}};
  const int W = tp.layout.width();
  const int heads = tp.layout.channels;
  tp.hyper.entropy_beta = 0.05;
  tp.actor = nn::Mlp::orthogonal({6, 8, 8, W * heads}, 1.0, 1.0, rng);
  tp.critic = nn::Mlp::orthogonal({9, 8, 8, 1}, 1.0, 1.0, rng);
  nn::Mlp behavior = tp.actor;
  auto flat = behavior.flat_parameters();
  for (double& v : flat) v += 0.02 * n01(rng);
  behavior.set_flat_parameters(flat);

  const int N = 16;
  std::vector<Experience> buffer;
  for (int i = 0; i < N; ++i) {
    Experience e;
    for (int j = 0; j < 6; ++j) e.local_obs.push_back(n01(rng));
    for (int j = 0; j < 9; ++j) e.global_obs.push_back(n01(rng));
    for (int j = 0; j < 9; ++j) e.next_global_obs.push_back(n01(rng));
    const Eigen::VectorXd probs =
        nn::softmax_heads(behavior.forward(Eigen::MatrixXd(
                              Eigen::Map<Eigen::VectorXd>(e.local_obs.data(), 6))),
                          W)
            .col(0);
    const ActResult a = sample_action(probs, tp.layout, rng, false);
    e.options = a.options;
    e.executed = a.executed;
    e.behavior_probs = a.probs;
    e.reward = n01(rng);
    buffer.push_back(e);
  }
  tp.batch = PpoBatch::from(buffer, 0.95);
  tp.adv = Eigen::VectorXd(N);
  for (int i = 0; i < N; ++i) tp.adv(i) = n01(rng);
  return tp;
}

double total_loss(const ToyProblem& tp) {
  return ppo_loss(tp.actor, tp.critic, tp.layout, tp.batch, tp.adv, tp.hyper).terms.total;
}

// Largest relative gap between analytic and central-difference gradients.
double worst_gradient_gap(ToyProblem& tp, nn::Mlp& net, const nn::Gradients& g, long& count) {
  const double h = 1e-5;
  double worst = 0.0;
  auto check_one = [&](double& param, double analytic) {
    const double keep = param;
    param = keep + h;
    const double up = total_loss(tp);
    param = keep - h;
    const double down = total_loss(tp);
    param = keep;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(fd - analytic) /
                                std::max({std::abs(fd), std::abs(analytic), 1e-6}));
    ++count;
  };
  for (size_t l = 0; l < net.layers().size(); ++l) {
    for (Eigen::Index i = 0; i < net.layers()[l].weight.size(); ++i)
      check_one(net.layers()[l].weight(i), g.weight[l](i));
    for (Eigen::Index i = 0; i < net.layers()[l].bias.size(); ++i)
      check_one(net.layers()[l].bias(i), g.bias[l](i));
  }
  return worst;
}

Verdict gradient_integrity() {
  const auto start = Clock::now();
  double worst = 0.0;
  long count = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ToyProblem tp = toy_problem(seed);
    const LossGradients lg = ppo_loss(tp.actor, tp.critic, tp.layout, tp.batch, tp.adv, tp.hyper);
    worst = std::max(worst, worst_gradient_gap(tp, tp.actor, lg.actor, count));
    worst = std::max(worst, worst_gradient_gap(tp, tp.critic, lg.critic, count));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-4 && secs < 60.0,
          std::to_string(count) + " parameters, worst relative gap " + fmt("%.2e", worst) + ", " +
              fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 5-7

struct TrainRun {
  double final_reward = 0.0;
  double final_aoi = 0.0;
  double first_interference = 0.0;
  double last_interference = 0.0;
  bool ok = false;
};

TrainRun train_run(const Options& opt, const std::string& preset_name, const std::string& ablation,
                   int seed) {
  const fs::path dir = opt.work_dir / ("train-" + preset_name + "-" + ablation + "-s" + std::to_string(seed));
  TrainRun run;
  const auto start = Clock::now();
  if (run_cli({"train", "--preset", preset_name, "--ablation", ablation, "--seed",
               std::to_string(seed), "--episodes", std::to_string(opt.episodes), "--quiet",
               "--out", dir.string()}) != kExitOk)
    return run;
  const auto episodes = read_csv(dir / "episodes.csv");
  const auto smoothed = read_csv(dir / "smoothed.csv");
  run.final_reward = tail_mean(episodes, "mean_reward", opt.final_window);
  run.final_aoi = tail_mean(episodes, "aoi_sum", opt.final_window);
  run.first_interference = smoothed.front().at("interference");
  run.last_interference = smoothed.back().at("interference");
  run.ok = true;
  std::cerr << "  trained " << dir.filename().string() << " in " << fmt("%.0f s", seconds_since(start))
            << ": final reward " << run.final_reward << ", AoI " << run.final_aoi
            << ", interference " << run.first_interference << " -> " << run.last_interference
            << '\n';
  return run;
}

struct BaselineRun {
  double reward = 0.0;
  double aoi = 0.0;
  long interference = 0;
  bool ok = false;
};

BaselineRun baseline_run(const Options& opt, const std::string& preset_name,
                         const std::string& policy, int seed, int episodes) {
  const fs::path dir = opt.work_dir / ("simulate-" + preset_name + "-" + policy + "-s" + std::to_string(seed));
  BaselineRun run;
  if (run_cli({"simulate", "--preset", preset_name, "--policy", policy, "--seed",
               std::to_string(seed), "--episodes", std::to_string(episodes), "--out",
               dir.string()}) != kExitOk)
    return run;
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  run.reward = summary["mean_reward"].get<double>();
  run.aoi = summary["aoi_sum"].get<double>();
  run.interference = summary["interference_total"].get<long>();
  run.ok = true;
  return run;
}

std::vector<TrainRun> train_seeds(const Options& opt, const std::string& preset_name,
                                  const std::string& ablation) {
  std::vector<TrainRun> runs;
  for (int s = 1; s <= opt.seeds; ++s) runs.push_back(train_run(opt, preset_name, ablation, s));
  return runs;
}

bool all_ok(const std::vector<TrainRun>& runs) {
  return std::all_of(runs.begin(), runs.end(), [](const TrainRun& r) { return r.ok; });
}

std::vector<double> column(const std::vector<TrainRun>& runs, double TrainRun::*field) {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.*field);
  return out;
}

Verdict reward_and_interference(const Options& opt, const std::vector<TrainRun>& mappo) {
  if (!all_ok(mappo)) return {false, "a training run failed"};
  std::vector<double> rr, pr;
  for (int s = 1; s <= opt.seeds; ++s) {
    const BaselineRun a = baseline_run(opt, "small", "round-robin", s, opt.baseline_episodes);
    const BaselineRun b = baseline_run(opt, "small", "priority", s, opt.baseline_episodes);
    if (!a.ok || !b.ok) return {false, "a baseline run failed"};
    rr.push_back(a.reward);
    pr.push_back(b.reward);
  }
  const double m = median(column(mappo, &TrainRun::final_reward));
  const double m_rr = median(rr), m_pr = median(pr);
  std::vector<double> ratios;
  for (const auto& r : mappo)
    ratios.push_back(r.first_interference > 0 ? r.last_interference / r.first_interference : 0.0);
  const double ratio = median(ratios);
  const bool reward_ok = m > m_rr && m > m_pr;
  const bool interference_ok = ratio <= 0.05;
  return {reward_ok && interference_ok,
          "median final reward MAPPO " + fmt("%.3f", m) + " vs round-robin " + fmt("%.3f", m_rr) +
              " and priority " + fmt("%.3f", m_pr) + (reward_ok ? " (ok)" : " (not above)") +
              "; median final/first smoothed interference " + fmt("%.3f", ratio) +
              (interference_ok ? " (ok)" : " (above 0.05)")};
}

Verdict ablation_ordering(const Options& opt, const std::vector<TrainRun>& delayed) {
  const auto instant = train_seeds(opt, "small", "instant");
  const auto blind = train_seeds(opt, "small", "no-aoi");
  if (!all_ok(delayed) || !all_ok(instant) || !all_ok(blind))
    return {false, "a training run failed"};
  const double a_inst = median(column(instant, &TrainRun::final_aoi));
  const double a_del = median(column(delayed, &TrainRun::final_aoi));
  const double a_none = median(column(blind, &TrainRun::final_aoi));
  const bool order = a_inst <= a_del && a_del <= a_none;
  const bool close = a_del <= 1.10 * a_inst;
  return {order && close, "median final AoI instant " + fmt("%.3f", a_inst) + ", delayed " +
                              fmt("%.3f", a_del) + ", no-aoi " + fmt("%.3f", a_none) +
                              (order ? " (ordered)" : " (out of order)") + ", delayed/instant " +
                              fmt("%.3f", a_inst > 0 ? a_del / a_inst : 0.0)};
}

Verdict lower_bound_sanity(const Options& opt) {
  const ScenarioConfig cfg = preset("full-coverage");
  const World world = make_world(cfg);
  const double bound = aoi_lower_bound_finite(*world.topology, cfg.training.episode_length).total;
  std::string detail = "bound " + fmt("%.3f", bound) + ";";
  bool above = true;
  for (const char* policy : {"round-robin", "priority", "random", "idle"}) {
    const BaselineRun r = baseline_run(opt, "full-coverage", policy, 1, 5);
    if (!r.ok) return {false, std::string("baseline ") + policy + " failed"};
    above = above && r.aoi >= bound;
    detail += std::string(" ") + policy + " " + fmt("%.3f", r.aoi);
  }
  const auto mappo = train_seeds(opt, "full-coverage", "delayed");
  if (!all_ok(mappo)) return {false, "a training run failed"};
  for (const auto& r : mappo) above = above && r.final_aoi >= bound;
  const double m = median(column(mappo, &TrainRun::final_aoi));
  const bool within = m <= 2.0 * bound;
  detail += "; MAPPO median " + fmt("%.3f", m) + " (" + fmt("%.2f", m / bound) + "x bound)";
  return {above && within, detail};
}

// ---------------------------------------------------------------- 8

Verdict baseline_cleanliness(const Options& opt) {
  const auto start = Clock::now();
  long total = 0;
  int runs = 0;
  std::string dirty;
  for (const auto& [name, cfg] : preset_library()) {
    for (const char* policy : {"round-robin", "priority"}) {
      const BaselineRun r = baseline_run(opt, name, policy, 1, 100);
      if (!r.ok) return {false, "run " + name + " " + policy + " failed"};
      total += r.interference;
      ++runs;
      if (r.interference != 0) dirty += " " + name + "/" + policy;
    }
  }
  return {total == 0, std::to_string(runs) + " runs of 100 episodes, " + std::to_string(total) +
                          " collisions" + (dirty.empty() ? "" : " in" + dirty) + ", " +
                          fmt("%.0f s", seconds_since(start))};
}

// ---------------------------------------------------------------- 9

Verdict determinism(const Options& opt) {
  struct Case {
    std::string label;
    std::vector<std::string> args;
    std::vector<std::string> files;
  };
  const std::vector<std::string> metrics = {"episodes.csv", "smoothed.csv", "summary.json",
                                            "config.echo"};
  const fs::path ckpt = opt.work_dir / "det-train-a" / "checkpoint";
  const std::vector<Case> cases = {
      {"train", {"train", "--preset", "small", "--episodes", "3", "--frames", "300", "--seed", "11", "--quiet"}, metrics},
      {"simulate", {"simulate", "--preset", "medium", "--policy", "random", "--episodes", "3", "--frames", "300", "--seed", "12"}, metrics},
      {"evaluate", {"evaluate", "--preset", "small", "--checkpoint", ckpt.string(), "--episodes", "2", "--frames", "300", "--seed", "13"}, metrics},
      {"trace", {"trace", "--preset", "partial-coverage", "--policy", "random", "--frames", "200", "--seed", "14"}, {"frames.bin", "ledger.log"}},
  };
  int compared = 0;
  std::string differing;
  for (const Case& c : cases) {
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = opt.work_dir / ("det-" + c.label + (i ? "-b" : "-a"));
      fs::remove_all(dir);
      auto args = c.args;
      args.insert(args.end(), {"--out", dir.string()});
      if (run_cli(args, &text[i]) != kExitOk) return {false, c.label + " failed"};
    }
    for (const auto& f : c.files) {
      const fs::path a = opt.work_dir / ("det-" + c.label + "-a") / f;
      const fs::path b = opt.work_dir / ("det-" + c.label + "-b") / f;
      if (!fs::exists(a) || slurp(a) != slurp(b)) differing += " " + c.label + "/" + f;
      ++compared;
    }
  }
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bound", "--preset", "large"}, {"validate", "--preset", "medium", "--print-config"}}) {
    std::string a, b;
    if (run_cli(args, &a) != kExitOk || run_cli(args, &b) != kExitOk) return {false, args[0] + " failed"};
    if (a != b) differing += " " + args[0] + "/stdout";
    ++compared;
  }
  return {differing.empty(), std::to_string(compared) + " outputs compared" +
                                 (differing.empty() ? ", all byte-identical" : ", differing:" + differing)};
}

}  // namespace

int main(int argc, char** argv) {
  configure_allocator();
  Options opt;
  std::string work_dir = (fs::temp_directory_path() / "saguin_acceptance").string();
  std::vector<int> only;
  CLI::App app{"Acceptance checks"};
  app.add_option("--work-dir", work_dir, "Directory for run outputs");
  app.add_option("--seeds", opt.seeds, "Training seeds per configuration")->check(CLI::PositiveNumber);
  app.add_option("--episodes", opt.episodes, "Training episodes per run")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  opt.work_dir = work_dir;
  opt.only.insert(only.begin(), only.end());
  fs::create_directories(opt.work_dir);

  auto wanted = [&](int c) { return opt.only.empty() || opt.only.count(c) > 0; };
  int failures = 0;
  auto report = [&](int c, const std::string& name, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << c << " (" << name << "): " << v.detail
              << std::endl;
    if (!v.pass) ++failures;
  };

  if (wanted(1)) report(1, "ripple oracle equivalence", ripple_equivalence());
  if (wanted(2)) {
    report(2, "three-launch collision example", worked_example());
    std::cout << "INFO  criterion 2: " << worked_example_default_indexing() << std::endl;
  }
  if (wanted(3)) report(3, "AoI dynamics oracle", aoi_interpreter());
  if (wanted(4)) report(4, "gradient integrity", gradient_integrity());
  std::vector<TrainRun> delayed;
  if (wanted(5) || wanted(6)) delayed = train_seeds(opt, "small", "delayed");
  if (wanted(5)) report(5, "small-preset reward and interference", reward_and_interference(opt, delayed));
  if (wanted(6)) report(6, "ablation ordering", ablation_ordering(opt, delayed));
  if (wanted(7)) report(7, "lower-bound sanity", lower_bound_sanity(opt));
  if (wanted(8)) report(8, "baseline cleanliness", baseline_cleanliness(opt));
  if (wanted(9)) report(9, "determinism", determinism(opt));
  return failures == 0 ? 0 : 1;
}
