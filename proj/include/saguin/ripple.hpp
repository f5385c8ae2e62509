#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "saguin/topology.hpp"

namespace saguin {

/// One AP's channel row: entry p is 0 for idle or u + 1 to serve user u.
using AssignmentRow = std::vector<int>;
/// Rows for every AP, indexed by k.
using JointAssignment = std::vector<AssignmentRow>;

JointAssignment idle_assignment(const Topology& topology);

/// When a delayed packet is delivered relative to its launch frame.
///
/// AoiIndicator follows the AoI transition's arrival test (v = d - 1), so a
/// packet launched at t0 lands in frame t0 + d - 1. Interference follows the
/// per-channel collision constraint, landing at t0 + d. Base stations always
/// deliver in the launch frame.
enum class ArrivalIndexing { AoiIndicator, Interference };

int arrival_frame(int launch_frame, int delay, ArrivalIndexing indexing);

struct Violation {
  int ap = 0;
  int channel = 0;
  int value = 0;
  std::string reason;
};

/// Shape and range checks on a joint assignment. Coverage and ripple
/// collisions are not checked here.
std::vector<Violation> validate_assignment(const Topology& topology,
                                           const JointAssignment& joint);

struct InFlightPacket {
  int ap = 0;
  int user = 0;
  int channel = 0;
  int launch_frame = 0;
  int accum = 0;        // frames elapsed since launch
  int total_delay = 0;  // d_{k,u}
  int arrival = 0;      // frame in which the packet lands
};

struct Arrival {
  int ap = 0;
  int launch_frame = 0;
  int delay = 0;  // 0 for base stations
};

struct CellArrivals {
  int user = 0;
  int channel = 0;
  std::vector<Arrival> packets;
  bool collided = false;
};

struct ArrivalReport {
  int frame = 0;
  std::vector<CellArrivals> cells;  // sorted by (user, channel)
  int interference_count = 0;
};

/// Tracks every transmission between launch and delivery.
class PropagationLedger {
 public:
  explicit PropagationLedger(
      ArrivalIndexing indexing = ArrivalIndexing::AoiIndicator)
      : indexing_(indexing) {}

  int frame() const { return frame_; }
  ArrivalIndexing indexing() const { return indexing_; }
  const std::vector<InFlightPacket>& in_flight() const { return in_flight_; }
  const std::vector<InFlightPacket>& landing_now() const { return landing_now_; }
  size_t size() const { return in_flight_.size(); }

  /// Registers this frame's launches. Throws SchedulingError when a row
  /// targets a user outside the AP's coverage.
  void launch(const JointAssignment& joint, const Topology& topology);

  /// Delivers everything landing in the current frame, ages the rest and
  /// moves to the next frame.
  ArrivalReport advance();

  /// One line per in-flight packet: frame,k,u,p,v,d (1-based u and p).
  void write_log(std::ostream& os) const;

 private:
  ArrivalIndexing indexing_;
  int frame_ = 0;
  std::vector<InFlightPacket> in_flight_;
  std::vector<InFlightPacket> landing_now_;
};

struct CollisionCell {
  int frame = 0;
  int user = 0;
  int channel = 0;
  auto operator<=>(const CollisionCell&) const = default;
};

/// Future-arrival occupancy built from a ledger; lets a scheduler test
/// launches one at a time before committing them.
class RippleLookahead {
 public:
  RippleLookahead(const PropagationLedger& ledger, const Topology& topology);

  /// True when launching (k, u, p) now lands on an already-occupied cell.
  bool would_collide(int k, int u, int p) const;
  void add(int k, int u, int p);
  std::vector<CollisionCell> collisions() const;

 private:
  const Topology* topology_;
  int frame_;
  ArrivalIndexing indexing_;
  std::map<std::tuple<int, int, int>, int> occupancy_;
};

/// Cells (frame, user, channel) at or after the current frame that would
/// receive two or more packets if the proposed launches were committed.
std::vector<CollisionCell> check_ripple_constraint(
    const PropagationLedger& ledger, const JointAssignment& joint,
    const Topology& topology);

}  // namespace saguin
