#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "saguin/env.hpp"
#include "saguin/ripple.hpp"
#include "saguin/topology.hpp"

namespace saguin {

enum class SchedulerKind { RoundRobin, AoiPriority, Random, Idle };

std::string_view to_string(SchedulerKind kind);
SchedulerKind parse_scheduler_kind(std::string_view text);

/// Per-AP round-robin state: position in the AP's covered-user list.
struct RoundRobinCursor {
  size_t next = 0;
};

/// Serves up to P covered users in cyclic order starting at the cursor, each
/// on the lowest channel where the launch cannot collide; users with no safe
/// channel lose their turn. The cursor moves past the last user served.
AssignmentRow round_robin_act(int k, RoundRobinCursor& cursor,
                              const Topology& topology,
                              RippleLookahead& lookahead);

/// Serves covered users in descending observed AoI (ties to the lower
/// index), skipping launches the lookahead flags.
AssignmentRow priority_act(int k, const LocalObservation& obs,
                           const Topology& topology,
                           RippleLookahead& lookahead);

/// Non-learning joint policy. RoundRobin and AoiPriority never cause a
/// collision; Random ignores the ripple constraint on purpose.
class BaselinePolicy {
 public:
  BaselinePolicy(SchedulerKind kind, const Topology& topology,
                 std::uint64_t seed = 0);

  JointAssignment act(const Environment& env);
  void reset(std::uint64_t seed);
  SchedulerKind kind() const { return kind_; }

 private:
  SchedulerKind kind_;
  std::vector<RoundRobinCursor> cursors_;
  std::mt19937_64 rng_;
};

struct AoiBound {
  std::vector<double> per_user;
  double total = 0.0;
};

/// Long-run lower bound on the time-averaged AoI of every user.
///
/// At any frame, a user with AoI <= a must have been reached by a delivery
/// launched within a window whose length depends on the serving AP's delay
/// (a + 1 frames for a base station, a - d + 1 for a delayed AP), and each
/// AP reaches at most min(P, covered) users per launch frame. Users covered
/// only by delayed APs can never drop below their smallest delay. Filling
/// the age levels greedily under those capacities gives the smallest
/// feasible AoI sum.
AoiBound aoi_lower_bound(const Topology& topology);

/// Same bound averaged over frames 0..horizon-1 from an all-zero start, the
/// quantity a finite simulation measures.
AoiBound aoi_lower_bound_finite(const Topology& topology, int horizon);

}  // namespace saguin
