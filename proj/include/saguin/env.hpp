#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "saguin/radio.hpp"
#include "saguin/ripple.hpp"
#include "saguin/topology.hpp"

namespace saguin {

struct RewardWeights {
  double aoi = 0.5;
  double energy = 0.5;
};

/// What AoI the satellite and UAV actors get to see.
enum class ObservationMode {
  Delayed,  // lagged by the AP's own propagation delay
  Instant,  // every AP sees x(t); not realizable, used as a reference
  NoAoi,    // satellite/UAV actors see only their in-flight vectors
};

struct EnvConfig {
  RewardWeights weights;
  ObservationMode mode = ObservationMode::Delayed;
  ArrivalIndexing indexing = ArrivalIndexing::AoiIndicator;
};

/// What one AP sees at the start of a frame: AoI of its covered users and,
/// for delayed APs, the accumulative propagation times of its own packets.
struct LocalObservation {
  std::vector<double> y;
  std::vector<double> v;

  std::vector<double> flat() const;
  size_t size() const { return y.size() + v.size(); }
};

struct FrameStats {
  int frame = 0;
  std::vector<long> aoi;           // x_u(t) before this frame's update
  std::vector<double> ap_energy;   // joules spent per AP (satellite = 0)
  std::vector<double> ap_rewards;  // per-AP game rewards
  int interference = 0;
  double aoi_sum = 0.0;
  double energy_sum = 0.0;  // excludes the satellite
  double reward = 0.0;      // MDP reward r(t)
};

struct StepOutcome {
  FrameStats stats;
  ArrivalReport arrivals;
};

struct WorldState {
  int frame = 0;
  std::vector<long> aoi;
  PropagationLedger ledger{ArrivalIndexing::AoiIndicator};
  std::vector<std::vector<long>> history;  // ring buffer of x over max-delay frames
  std::uint64_t seed = 0;
};

class Environment {
 public:
  Environment(std::shared_ptr<const Topology> topology, EnergyTable energy,
              EnvConfig config = {});

  void reset(std::uint64_t seed = 0);

  /// Applies one frame. Rejects malformed or uncovered assignments with
  /// std::invalid_argument / SchedulingError and leaves the state untouched.
  StepOutcome step(const JointAssignment& joint);

  LocalObservation observe(int k) const;
  /// Observation under the delayed-AoI rule, independent of the actor mode.
  LocalObservation observe_delayed(int k) const;
  std::vector<double> global_observation() const;

  int observation_size(int k) const;
  int global_observation_size() const;

  /// x_u(t - lag), with frames before reset reading as zero.
  long lagged_aoi(int u, int lag) const;

  const Topology& topology() const { return *topology_; }
  std::shared_ptr<const Topology> topology_ptr() const { return topology_; }
  const EnergyTable& energy() const { return energy_; }
  const EnvConfig& config() const { return config_; }
  const WorldState& state() const { return state_; }
  int frame() const { return state_.frame; }
  const std::vector<long>& aoi() const { return state_.aoi; }
  const PropagationLedger& ledger() const { return state_.ledger; }

 private:
  LocalObservation build_observation(int k, ObservationMode mode) const;

  std::shared_ptr<const Topology> topology_;
  EnergyTable energy_;
  EnvConfig config_;
  WorldState state_;
  std::vector<int> v_offsets_;  // per (k, u) start in v_k
};

/// Time-averaged objective over a finite run:
/// w_aoi * sum_u mean x_u + w_energy * sum_{k>=1} mean E_k.
double mdp_objective(std::span<const FrameStats> stats,
                     const RewardWeights& weights);

}  // namespace saguin
