#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They share no code with the library beyond its data types.

#include <cstdint>
#include <random>
#include <vector>

#include "saguin/env.hpp"
#include "saguin/radio.hpp"
#include "saguin/ripple.hpp"
#include "saguin/topology.hpp"

namespace saguin::oracle {

struct Landing {
  int ap = 0;
  int user = 0;
  int channel = 0;
  int launch = 0;
  bool operator==(const Landing&) const = default;
  auto operator<=>(const Landing&) const = default;
};

/// Tensor recount of the interference constraint over a whole schedule.
/// frames[t] lists every packet landing in frame t, sorted; counts[t] is the
/// number of (user, channel) cells holding two or more of them.
struct RippleRecount {
  std::vector<std::vector<Landing>> frames;
  std::vector<int> counts;
};

RippleRecount recount_ripple(const Topology& topo,
                             const std::vector<JointAssignment>& schedule,
                             bool arrive_at_t0_plus_d);

/// Straight-line interpreter of the AoI transition and the MDP reward.
struct AoiTrace {
  std::vector<std::vector<long>> aoi;  // x(t) before frame t's update
  std::vector<double> reward;
  std::vector<std::vector<double>> energy;  // per frame, per AP
  std::vector<int> interference;
};

AoiTrace interpret_aoi(const Topology& topo, const EnergyTable& energy,
                       const RewardWeights& weights,
                       const std::vector<JointAssignment>& schedule,
                       bool arrive_at_t0_plus_d);

/// Uniformly random covered-user schedule; duplicates within a row allowed
/// unless `distinct_rows`.
std::vector<JointAssignment> random_schedule(const Topology& topo, int frames,
                                             double busy_prob, std::mt19937_64& rng,
                                             bool distinct_rows = false);

/// Random small topology: 1 satellite, up to max_uavs UAVs and max_bs BSs,
/// geometry drawn so every AP covers at least one user.
Topology random_topology(std::mt19937_64& rng, int max_uavs, int max_bs,
                         int max_channels, int max_users, int max_delay);

/// Smallest steady-state total average AoI over every periodic joint
/// schedule with period <= max_period (rows with distinct users only).
/// APs listed in silent stay idle throughout.
double best_periodic_aoi(const Topology& topo, int max_period,
                         const std::vector<int>& silent = {});

}  // namespace saguin::oracle
