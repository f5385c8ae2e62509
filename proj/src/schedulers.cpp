#include "saguin/schedulers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "saguin/errors.hpp"

namespace saguin {

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::RoundRobin:
      return "round-robin";
    case SchedulerKind::AoiPriority:
      return "priority";
    case SchedulerKind::Random:
      return "random";
    case SchedulerKind::Idle:
      return "idle";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(std::string_view text) {
  if (text == "round-robin" || text == "rr") return SchedulerKind::RoundRobin;
  if (text == "priority") return SchedulerKind::AoiPriority;
  if (text == "random") return SchedulerKind::Random;
  if (text == "idle") return SchedulerKind::Idle;
  throw ConfigError("unknown scheduler '" + std::string(text) + "'");
}

namespace {

// Walks users in the given order; each takes the lowest channel that is
// still free in this row and will not collide on arrival.
AssignmentRow fill_channels(int k, const std::vector<int>& order,
                            const Topology& topology,
                            RippleLookahead& lookahead,
                            std::vector<int>* served = nullptr) {
  const int P = topology.channels();
  AssignmentRow row(static_cast<size_t>(P), 0);
  int used = 0;
  for (int u : order) {
    if (used == P) break;
    for (int p = 0; p < P; ++p) {
      if (row[static_cast<size_t>(p)] != 0) continue;
      if (lookahead.would_collide(k, u, p)) continue;
      row[static_cast<size_t>(p)] = u + 1;
      lookahead.add(k, u, p);
      ++used;
      if (served) served->push_back(u);
      break;
    }
  }
  return row;
}

}  // namespace

AssignmentRow round_robin_act(int k, RoundRobinCursor& cursor,
                              const Topology& topology,
                              RippleLookahead& lookahead) {
  const std::vector<int>& covered = topology.covered_users(k);
  const size_t n = covered.size();
  if (n == 0) return AssignmentRow(static_cast<size_t>(topology.channels()), 0);
  std::vector<int> order;
  order.reserve(n);
  for (size_t i = 0; i < n; ++i) order.push_back(covered[(cursor.next + i) % n]);
  std::vector<int> served;
  AssignmentRow row = fill_channels(k, order, topology, lookahead, &served);
  if (!served.empty()) {
    const auto pos = std::find(covered.begin(), covered.end(), served.back()) - covered.begin();
    cursor.next = (static_cast<size_t>(pos) + 1) % n;
  }
  return row;
}

AssignmentRow priority_act(int k, const LocalObservation& obs,
                           const Topology& topology,
                           RippleLookahead& lookahead) {
  const std::vector<int>& covered = topology.covered_users(k);
  if (obs.y.size() != covered.size())
    throw std::invalid_argument("observation does not match AP coverage");
  std::vector<size_t> idx(covered.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return obs.y[a] > obs.y[b]; });
  std::vector<int> order;
  order.reserve(idx.size());
  for (size_t i : idx) order.push_back(covered[i]);
  return fill_channels(k, order, topology, lookahead);
}

BaselinePolicy::BaselinePolicy(SchedulerKind kind, const Topology& topology,
                               std::uint64_t seed)
    : kind_(kind),
      cursors_(static_cast<size_t>(topology.num_aps())),
      rng_(seed) {}

void BaselinePolicy::reset(std::uint64_t seed) {
  for (RoundRobinCursor& c : cursors_) c = RoundRobinCursor{};
  rng_.seed(seed);
}

JointAssignment BaselinePolicy::act(const Environment& env) {
  const Topology& topo = env.topology();
  JointAssignment joint = idle_assignment(topo);
  if (kind_ == SchedulerKind::Idle) return joint;

  if (kind_ == SchedulerKind::Random) {
    for (int k = 0; k < topo.num_aps(); ++k) {
      const auto& covered = topo.covered_users(k);
      std::uniform_int_distribution<int> pick(0, static_cast<int>(covered.size()));
      AssignmentRow& row = joint[static_cast<size_t>(k)];
      for (int& entry : row) {
        const int draw = pick(rng_);
        const int target = draw == 0 ? 0 : covered[static_cast<size_t>(draw - 1)] + 1;
        if (target != 0 && std::find(row.begin(), row.end(), target) != row.end())
          continue;
        entry = target;
      }
    }
    return joint;
  }

  RippleLookahead lookahead(env.ledger(), topo);
  for (int k = 0; k < topo.num_aps(); ++k) {
    joint[static_cast<size_t>(k)] =
        kind_ == SchedulerKind::RoundRobin
            ? round_robin_act(k, cursors_[static_cast<size_t>(k)], topo, lookahead)
            : priority_act(k, env.observe(k), topo, lookahead);
  }
  return joint;
}

namespace {

struct Capacity {
  int slots;      // distinct users per launch frame
  int min_delay;  // 0 for base stations
};

std::vector<Capacity> capacities(const Topology& topology) {
  std::vector<Capacity> out;
  for (int k = 0; k < topology.num_aps(); ++k) {
    const auto& covered = topology.covered_users(k);
    if (covered.empty()) continue;
    int d = std::numeric_limits<int>::max();
    for (int u : covered) d = std::min(d, topology.delay(k, u));
    out.push_back({std::min(topology.channels(), static_cast<int>(covered.size())), d});
  }
  return out;
}

// Users with AoI <= level at some frame, bounded by recent launch windows.
long capacity_at(const std::vector<Capacity>& caps, long level) {
  long total = 0;
  for (const Capacity& c : caps) {
    const long window = c.min_delay == 0 ? level + 1
                                         : std::max(0L, level - c.min_delay + 1);
    total += static_cast<long>(c.slots) * window;
  }
  return total;
}

std::vector<long> floors(const Topology& topology) {
  std::vector<long> out(static_cast<size_t>(topology.num_users()),
                        std::numeric_limits<long>::max());
  for (int k = 0; k < topology.num_aps(); ++k)
    for (int u : topology.covered_users(k))
      out[static_cast<size_t>(u)] =
          std::min<long>(out[static_cast<size_t>(u)], topology.delay(k, u));
  return out;
}

// Minimal age per user at one frame; ages are capped at `cap` (the frame
// index, since AoI starts at zero) unless cap < 0.
std::vector<long> greedy_ages(const std::vector<long>& floor,
                              const std::vector<Capacity>& caps, long cap) {
  const size_t U = floor.size();
  std::vector<size_t> order(U);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return floor[a] < floor[b]; });
  std::vector<long> age(U, cap);
  size_t next = 0;
  long assigned = 0;
  for (long level = 0; next < U && (cap < 0 || level < cap); ++level) {
    const long room = capacity_at(caps, level) - assigned;
    for (long i = 0; i < room && next < U && floor[order[next]] <= level; ++i) {
      age[order[next++]] = level;
      ++assigned;
    }
  }
  return age;
}

}  // namespace

AoiBound aoi_lower_bound(const Topology& topology) {
  if (topology.num_users() == 0)
    throw std::invalid_argument("AoI bound needs at least one user");
  const auto ages = greedy_ages(floors(topology), capacities(topology), -1);
  AoiBound bound;
  for (long a : ages) {
    bound.per_user.push_back(static_cast<double>(a));
    bound.total += static_cast<double>(a);
  }
  return bound;
}

AoiBound aoi_lower_bound_finite(const Topology& topology, int horizon) {
  if (topology.num_users() == 0)
    throw std::invalid_argument("AoI bound needs at least one user");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const auto floor = floors(topology);
  const auto caps = capacities(topology);
  const auto limit = aoi_lower_bound(topology);
  const long settle = static_cast<long>(
      *std::max_element(limit.per_user.begin(), limit.per_user.end()));

  std::vector<double> sums(floor.size(), 0.0);
  for (long t = 0; t < horizon; ++t) {
    // Beyond the settling frame the per-frame bound no longer changes.
    const std::vector<long> ages =
        t > settle + 1 ? greedy_ages(floor, caps, -1) : greedy_ages(floor, caps, t);
    if (t > settle + 1) {
      const double remaining = static_cast<double>(horizon - t);
      for (size_t u = 0; u < ages.size(); ++u)
        sums[u] += remaining * static_cast<double>(ages[u]);
      break;
    }
    for (size_t u = 0; u < ages.size(); ++u) sums[u] += static_cast<double>(ages[u]);
  }
  AoiBound bound;
  for (double s : sums) {
    bound.per_user.push_back(s / horizon);
    bound.total += s / horizon;
  }
  return bound;
}

}  // namespace saguin
