#include "saguin/metrics.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace saguin {

namespace {

constexpr char kTraceMagic[8] = {'S', 'A', 'G', 'T', 'R', 'A', 'C', 'E'};
constexpr std::uint32_t kTraceVersion = 1;

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T take(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof value))
    throw std::runtime_error("truncated frame trace");
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<EpisodeMetrics> run_baseline(const World& world, SchedulerKind kind,
                                         std::uint64_t seed, int episodes,
                                         int episode_length, ObservationMode mode) {
  if (episodes < 1 || episode_length < 1)
    throw std::invalid_argument("need at least one episode and one frame");
  Environment env(world.topology, world.energy, world.env_config(mode));
  BaselinePolicy policy(kind, *world.topology, seed);
  std::vector<EpisodeMetrics> out;
  std::vector<FrameStats> stats;
  for (int e = 0; e < episodes; ++e) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(e);
    env.reset(s);
    policy.reset(s);
    stats.clear();
    for (int t = 0; t < episode_length; ++t) stats.push_back(env.step(policy.act(env)).stats);
    out.push_back(summarize_frames(stats, world.config.weights, e + 1));
  }
  return out;
}

std::vector<SmoothedRow> smooth(std::span<const EpisodeMetrics> episodes, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<SmoothedRow> rows;
  for (size_t start = 0; start < episodes.size(); start += static_cast<size_t>(window)) {
    const size_t end = std::min(episodes.size(), start + static_cast<size_t>(window));
    const double n = static_cast<double>(end - start);
    SmoothedRow row;
    row.first_episode = episodes[start].episode;
    row.last_episode = episodes[end - 1].episode;
    for (size_t i = start; i < end; ++i) {
      row.mean_reward += episodes[i].mean_reward / n;
      row.aoi_sum += episodes[i].aoi_sum / n;
      row.energy_sum += episodes[i].energy_sum / n;
      row.interference += static_cast<double>(episodes[i].interference) / n;
      row.objective += episodes[i].objective / n;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_episodes_csv(std::ostream& os, std::span<const EpisodeMetrics> episodes) {
  const size_t K = episodes.empty() ? 0 : episodes.front().mean_ap_reward.size();
  os << "# saguin episodes v" << kMetricsFormatVersion << '\n';
  os << "episode,mean_reward";
  for (size_t k = 0; k < K; ++k) os << ",reward_ap" << k;
  os << ",aoi_sum,energy_sum,interference,objective\n";
  for (const EpisodeMetrics& m : episodes) {
    os << m.episode << ',' << format_double(m.mean_reward);
    for (double r : m.mean_ap_reward) os << ',' << format_double(r);
    os << ',' << format_double(m.aoi_sum) << ',' << format_double(m.energy_sum) << ','
       << m.interference << ',' << format_double(m.objective) << '\n';
  }
}

void write_smoothed_csv(std::ostream& os, std::span<const SmoothedRow> rows) {
  os << "# saguin smoothed v" << kMetricsFormatVersion << '\n';
  os << "first_episode,last_episode,mean_reward,aoi_sum,energy_sum,interference,objective\n";
  for (const SmoothedRow& r : rows)
    os << r.first_episode << ',' << r.last_episode << ',' << format_double(r.mean_reward)
       << ',' << format_double(r.aoi_sum) << ',' << format_double(r.energy_sum) << ','
       << format_double(r.interference) << ',' << format_double(r.objective) << '\n';
}

std::string summary_json(const RunRecord& run) {
  using nlohmann::json;
  const auto& eps = run.episodes;
  const double n = static_cast<double>(eps.size());
  std::vector<double> aoi, energy;
  double aoi_sum = 0.0, energy_sum = 0.0, objective = 0.0, reward = 0.0;
  long interference = 0;
  if (!eps.empty()) {
    aoi.assign(eps.front().mean_aoi.size(), 0.0);
    energy.assign(eps.front().mean_energy.size(), 0.0);
  }
  for (const EpisodeMetrics& m : eps) {
    for (size_t u = 0; u < aoi.size(); ++u) aoi[u] += m.mean_aoi[u] / n;
    for (size_t k = 0; k < energy.size(); ++k) energy[k] += m.mean_energy[k] / n;
    aoi_sum += m.aoi_sum / n;
    energy_sum += m.energy_sum / n;
    objective += m.objective / n;
    reward += m.mean_reward / n;
    interference += m.interference;
  }
  const size_t tail = std::min<size_t>(eps.size(), 50);
  double tail_reward = 0.0, tail_aoi = 0.0;
  for (size_t i = eps.size() - tail; i < eps.size(); ++i) {
    tail_reward += eps[i].mean_reward / static_cast<double>(tail);
    tail_aoi += eps[i].aoi_sum / static_cast<double>(tail);
  }
  json doc = {{"format_version", kMetricsFormatVersion},
              {"run_id", run.run_id},
              {"command", run.command},
              {"scenario", run.config.name},
              {"config_hash", config_hash(run.config)},
              {"policy", run.policy},
              {"ablation", run.ablation},
              {"seed", run.seed},
              {"episodes", eps.size()},
              {"mean_aoi_per_user", aoi},
              {"mean_energy_per_ap", energy},
              {"aoi_sum", aoi_sum},
              {"energy_sum", energy_sum},
              {"objective", objective},
              {"mean_reward", reward},
              {"interference_total", interference},
              {"final_window",
               {{"episodes", tail}, {"mean_reward", tail_reward}, {"aoi_sum", tail_aoi}}}};
  return doc.dump(2) + "\n";
}

void emit_metrics(const RunRecord& run, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "'");
  {
    std::ofstream os(fs::path(dir) / "episodes.csv", std::ios::binary);
    write_episodes_csv(os, run.episodes);
    if (!os) throw std::runtime_error("cannot write episodes.csv in " + dir);
  }
  {
    const auto rows = smooth(run.episodes);
    std::ofstream os(fs::path(dir) / "smoothed.csv", std::ios::binary);
    write_smoothed_csv(os, rows);
    if (!os) throw std::runtime_error("cannot write smoothed.csv in " + dir);
  }
  write_file(fs::path(dir) / "summary.json", summary_json(run));
  write_file(fs::path(dir) / "config.echo", canonical_text(run.config));
  const nlohmann::json timing = {{"run_id", run.run_id}, {"wall_clock_s", run.wall_clock_s}};
  write_file(fs::path(dir) / "timing.json", timing.dump(2) + "\n");
}

void write_frames_csv(std::ostream& os, std::span<const FrameStats> frames) {
  const size_t U = frames.empty() ? 0 : frames.front().aoi.size();
  const size_t K = frames.empty() ? 0 : frames.front().ap_energy.size();
  os << "# saguin frames v" << kMetricsFormatVersion << '\n';
  os << "frame";
  for (size_t u = 0; u < U; ++u) os << ",aoi_u" << u + 1;
  for (size_t k = 0; k < K; ++k) os << ",energy_ap" << k;
  for (size_t k = 0; k < K; ++k) os << ",reward_ap" << k;
  os << ",interference,reward\n";
  for (const FrameStats& s : frames) {
    os << s.frame;
    for (long a : s.aoi) os << ',' << a;
    for (double e : s.ap_energy) os << ',' << format_double(e);
    for (double r : s.ap_rewards) os << ',' << format_double(r);
    os << ',' << s.interference << ',' << format_double(s.reward) << '\n';
  }
}

void write_frames_binary(std::ostream& os, std::span<const FrameStats> frames) {
  const auto U = static_cast<std::uint32_t>(frames.empty() ? 0 : frames.front().aoi.size());
  const auto K =
      static_cast<std::uint32_t>(frames.empty() ? 0 : frames.front().ap_energy.size());
  os.write(kTraceMagic, sizeof kTraceMagic);
  put(os, kTraceVersion);
  put(os, static_cast<std::uint32_t>(frames.size()));
  put(os, U);
  put(os, K);
  for (const FrameStats& s : frames) {
    put(os, static_cast<std::int32_t>(s.frame));
    put(os, static_cast<std::int32_t>(s.interference));
    for (long a : s.aoi) put(os, static_cast<std::int64_t>(a));
    for (double e : s.ap_energy) put(os, e);
    for (double r : s.ap_rewards) put(os, r);
    put(os, s.reward);
  }
}

std::vector<FrameStats> read_frames_binary(std::istream& is) {
  char magic[sizeof kTraceMagic];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kTraceMagic, sizeof magic) != 0)
    throw std::runtime_error("not a frame trace");
  if (take<std::uint32_t>(is) != kTraceVersion)
    throw std::runtime_error("unsupported frame trace version");
  const auto n = take<std::uint32_t>(is);
  const auto U = take<std::uint32_t>(is);
  const auto K = take<std::uint32_t>(is);
  std::vector<FrameStats> out(n);
  for (FrameStats& s : out) {
    s.frame = take<std::int32_t>(is);
    s.interference = take<std::int32_t>(is);
    for (std::uint32_t u = 0; u < U; ++u) {
      s.aoi.push_back(static_cast<long>(take<std::int64_t>(is)));
      s.aoi_sum += static_cast<double>(s.aoi.back());
    }
    for (std::uint32_t k = 0; k < K; ++k) {
      s.ap_energy.push_back(take<double>(is));
      if (k >= 1) s.energy_sum += s.ap_energy.back();
    }
    for (std::uint32_t k = 0; k < K; ++k) s.ap_rewards.push_back(take<double>(is));
    s.reward = take<double>(is);
  }
  return out;
}

}  // namespace saguin
