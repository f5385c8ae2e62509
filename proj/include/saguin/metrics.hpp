#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "saguin/env.hpp"
#include "saguin/mappo.hpp"
#include "saguin/scenario.hpp"
#include "saguin/schedulers.hpp"

namespace saguin {

inline constexpr int kMetricsFormatVersion = 1;
inline constexpr int kSmoothingWindow = 10;

/// Everything emitted for one run.
struct RunRecord {
  std::string run_id;
  std::string command;
  std::string policy;
  std::string ablation;
  std::uint64_t seed = 0;
  ScenarioConfig config;
  std::vector<EpisodeMetrics> episodes;
  double wall_clock_s = 0.0;
};

/// Rolls out a baseline policy; episode e resets the environment and the
/// policy with seed + e.
std::vector<EpisodeMetrics> run_baseline(const World& world, SchedulerKind kind,
                                         std::uint64_t seed, int episodes,
                                         int episode_length,
                                         ObservationMode mode = ObservationMode::Delayed);

/// Row per window of `window` consecutive episodes (the last may be short).
struct SmoothedRow {
  int first_episode = 0;
  int last_episode = 0;
  double mean_reward = 0.0;
  double aoi_sum = 0.0;
  double energy_sum = 0.0;
  double interference = 0.0;  // mean per episode
  double objective = 0.0;
};
std::vector<SmoothedRow> smooth(std::span<const EpisodeMetrics> episodes,
                                int window = kSmoothingWindow);

void write_episodes_csv(std::ostream& os, std::span<const EpisodeMetrics> episodes);
void write_smoothed_csv(std::ostream& os, std::span<const SmoothedRow> rows);
std::string summary_json(const RunRecord& run);

/// Writes episodes.csv, smoothed.csv, summary.json and config.echo into dir,
/// plus timing.json, which holds the only non-deterministic field.
void emit_metrics(const RunRecord& run, const std::string& dir);

/// Per-frame records as CSV and as a compact little-endian binary trace.
void write_frames_csv(std::ostream& os, std::span<const FrameStats> frames);
void write_frames_binary(std::ostream& os, std::span<const FrameStats> frames);
std::vector<FrameStats> read_frames_binary(std::istream& is);

/// Shortest round-trip decimal form, so emitted numbers are reproducible.
std::string format_double(double v);

}  // namespace saguin
