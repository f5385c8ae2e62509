#include "saguin/ripple.hpp"

#include <algorithm>
#include <ostream>

#include "saguin/errors.hpp"

namespace saguin {

JointAssignment idle_assignment(const Topology& topology) {
  return JointAssignment(static_cast<size_t>(topology.num_aps()),
                         AssignmentRow(static_cast<size_t>(topology.channels()), 0));
}

int arrival_frame(int launch_frame, int delay, ArrivalIndexing indexing) {
  if (delay == 0) return launch_frame;
  return indexing == ArrivalIndexing::AoiIndicator ? launch_frame + delay - 1
                                                   : launch_frame + delay;
}

std::vector<Violation> validate_assignment(const Topology& topology,
                                           const JointAssignment& joint) {
  std::vector<Violation> out;
  if (joint.size() != static_cast<size_t>(topology.num_aps())) {
    out.push_back({-1, -1, static_cast<int>(joint.size()),
                   "expected one row per AP"});
    return out;
  }
  const int users = topology.num_users();
  for (size_t k = 0; k < joint.size(); ++k) {
    const AssignmentRow& row = joint[k];
    if (row.size() != static_cast<size_t>(topology.channels())) {
      out.push_back({static_cast<int>(k), -1, static_cast<int>(row.size()),
                     "row length differs from channel count"});
      continue;
    }
    for (size_t p = 0; p < row.size(); ++p) {
      if (row[p] < 0 || row[p] > users)
        out.push_back({static_cast<int>(k), static_cast<int>(p), row[p],
                       "user index out of range"});
    }
  }
  return out;
}

void PropagationLedger::launch(const JointAssignment& joint,
                               const Topology& topology) {
  std::vector<InFlightPacket> fresh;
  for (int k = 0; k < static_cast<int>(joint.size()); ++k) {
    const AssignmentRow& row = joint[static_cast<size_t>(k)];
    for (int p = 0; p < static_cast<int>(row.size()); ++p) {
      const int target = row[static_cast<size_t>(p)];
      if (target == 0) continue;
      const int u = target - 1;
      if (!topology.covers(k, u))
        throw SchedulingError("AP " + std::to_string(k) +
                              " does not cover user " + std::to_string(target));
      InFlightPacket pkt;
      pkt.ap = k;
      pkt.user = u;
      pkt.channel = p;
      pkt.launch_frame = frame_;
      pkt.total_delay = topology.delay(k, u);
      pkt.arrival = arrival_frame(frame_, pkt.total_delay, indexing_);
      fresh.push_back(pkt);
    }
  }
  for (const InFlightPacket& pkt : fresh) {
    if (pkt.arrival == frame_)
      landing_now_.push_back(pkt);
    else
      in_flight_.push_back(pkt);
  }
}

ArrivalReport PropagationLedger::advance() {
  ArrivalReport report;
  report.frame = frame_;

  std::map<std::pair<int, int>, CellArrivals> cells;
  auto deliver = [&](const InFlightPacket& pkt) {
    CellArrivals& cell = cells[{pkt.user, pkt.channel}];
    cell.user = pkt.user;
    cell.channel = pkt.channel;
    cell.packets.push_back({pkt.ap, pkt.launch_frame, pkt.total_delay});
  };
  for (const InFlightPacket& pkt : landing_now_) deliver(pkt);
  landing_now_.clear();

  std::vector<InFlightPacket> remaining;
  remaining.reserve(in_flight_.size());
  for (InFlightPacket& pkt : in_flight_) {
    if (pkt.arrival == frame_) {
      deliver(pkt);
    } else {
      pkt.accum = frame_ + 1 - pkt.launch_frame;
      remaining.push_back(pkt);
    }
  }
  in_flight_ = std::move(remaining);

  report.cells.reserve(cells.size());
  for (auto& [key, cell] : cells) {
    std::sort(cell.packets.begin(), cell.packets.end(),
              [](const Arrival& a, const Arrival& b) {
                return std::tie(a.ap, a.launch_frame) <
                       std::tie(b.ap, b.launch_frame);
              });
    cell.collided = cell.packets.size() >= 2;
    if (cell.collided) ++report.interference_count;
    report.cells.push_back(std::move(cell));
  }
  ++frame_;
  return report;
}

void PropagationLedger::write_log(std::ostream& os) const {
  std::vector<InFlightPacket> sorted = in_flight_;
  std::sort(sorted.begin(), sorted.end(),
            [](const InFlightPacket& a, const InFlightPacket& b) {
              return std::tie(a.ap, a.user, a.launch_frame, a.channel) <
                     std::tie(b.ap, b.user, b.launch_frame, b.channel);
            });
  for (const InFlightPacket& pkt : sorted)
    os << frame_ << ',' << pkt.ap << ',' << (pkt.user + 1) << ','
       << (pkt.channel + 1) << ',' << pkt.accum << ',' << pkt.total_delay
       << '\n';
}

RippleLookahead::RippleLookahead(const PropagationLedger& ledger,
                                 const Topology& topology)
    : topology_(&topology),
      frame_(ledger.frame()),
      indexing_(ledger.indexing()) {
  for (const InFlightPacket& pkt : ledger.in_flight())
    ++occupancy_[{pkt.arrival, pkt.user, pkt.channel}];
  for (const InFlightPacket& pkt : ledger.landing_now())
    ++occupancy_[{pkt.arrival, pkt.user, pkt.channel}];
}

bool RippleLookahead::would_collide(int k, int u, int p) const {
  const int at = arrival_frame(frame_, topology_->delay(k, u), indexing_);
  auto it = occupancy_.find({at, u, p});
  return it != occupancy_.end() && it->second > 0;
}

void RippleLookahead::add(int k, int u, int p) {
  ++occupancy_[{arrival_frame(frame_, topology_->delay(k, u), indexing_), u,
                p}];
}

std::vector<CollisionCell> RippleLookahead::collisions() const {
  std::vector<CollisionCell> out;
  for (const auto& [key, count] : occupancy_) {
    if (count < 2) continue;
    const auto& [frame, user, channel] = key;
    if (frame < frame_) continue;
    out.push_back({frame, user, channel});
  }
  return out;
}

std::vector<CollisionCell> check_ripple_constraint(
    const PropagationLedger& ledger, const JointAssignment& joint,
    const Topology& topology) {
  RippleLookahead lookahead(ledger, topology);
  for (int k = 0; k < static_cast<int>(joint.size()); ++k) {
    const AssignmentRow& row = joint[static_cast<size_t>(k)];
    for (int p = 0; p < static_cast<int>(row.size()); ++p) {
      const int target = row[static_cast<size_t>(p)];
      if (target == 0 || !topology.covers(k, target - 1)) continue;
      lookahead.add(k, target - 1, p);
    }
  }
  return lookahead.collisions();
}

}  // namespace saguin
