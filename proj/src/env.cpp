#include "saguin/env.hpp"

#include <algorithm>
#include <stdexcept>

#include "saguin/errors.hpp"

namespace saguin {

std::vector<double> LocalObservation::flat() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), y.begin(), y.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

Environment::Environment(std::shared_ptr<const Topology> topology,
                         EnergyTable energy, EnvConfig config)
    : topology_(std::move(topology)),
      energy_(std::move(energy)),
      config_(config) {
  if (!topology_) throw std::invalid_argument("null topology");
  if (energy_.num_aps() != topology_->num_aps() ||
      energy_.num_users() != topology_->num_users())
    throw std::invalid_argument("energy table does not match topology");
  const int K = topology_->num_aps();
  const int U = topology_->num_users();
  v_offsets_.assign(static_cast<size_t>(K * U), 0);
  for (int k = 0; k < K; ++k) {
    int offset = 0;
    for (int u : topology_->covered_users(k)) {
      v_offsets_[static_cast<size_t>(k * U + u)] = offset;
      offset += topology_->delay(k, u);
    }
  }
  reset(0);
}

void Environment::reset(std::uint64_t seed) {
  const size_t U = static_cast<size_t>(topology_->num_users());
  state_ = WorldState{};
  state_.seed = seed;
  state_.aoi.assign(U, 0);
  state_.ledger = PropagationLedger(config_.indexing);
  state_.history.assign(static_cast<size_t>(topology_->max_delay() + 1),
                        std::vector<long>(U, 0));
}

long Environment::lagged_aoi(int u, int lag) const {
  const int at = state_.frame - lag;
  if (at < 0) return 0;
  const auto depth = static_cast<int>(state_.history.size());
  return state_.history[static_cast<size_t>(at % depth)]
                       [static_cast<size_t>(u)];
}

LocalObservation Environment::build_observation(int k,
                                                ObservationMode mode) const {
  const Topology& topo = *topology_;
  const bool delayed_ap = topo.kind(k) != ApKind::BaseStation;
  LocalObservation obs;
  const auto& covered = topo.covered_users(k);
  obs.y.reserve(covered.size());
  for (int u : covered) {
    if (mode == ObservationMode::NoAoi && delayed_ap) {
      obs.y.push_back(0.0);
    } else {
      const int lag = mode == ObservationMode::Instant ? 0 : topo.delay(k, u);
      obs.y.push_back(static_cast<double>(lagged_aoi(u, lag)));
    }
  }
  if (!delayed_ap) return obs;

  int total = 0;
  for (int u : covered) total += topo.delay(k, u);
  obs.v.assign(static_cast<size_t>(total), 0.0);
  const int t = state_.frame;
  const int U = topo.num_users();
  for (const InFlightPacket& pkt : state_.ledger.in_flight()) {
    if (pkt.ap != k) continue;
    // window holds launch frames t - d + 1 .. t
    const int slot = pkt.launch_frame - (t - pkt.total_delay + 1);
    if (slot < 0 || slot >= pkt.total_delay) continue;
    obs.v[static_cast<size_t>(v_offsets_[static_cast<size_t>(k * U + pkt.user)] +
                              slot)] = static_cast<double>(t - pkt.launch_frame);
  }
  return obs;
}

LocalObservation Environment::observe(int k) const {
  return build_observation(k, config_.mode);
}

LocalObservation Environment::observe_delayed(int k) const {
  return build_observation(k, ObservationMode::Delayed);
}

std::vector<double> Environment::global_observation() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(global_observation_size()));
  for (int k = 0; k < topology_->num_aps(); ++k) {
    const LocalObservation obs = observe(k);
    out.insert(out.end(), obs.y.begin(), obs.y.end());
    out.insert(out.end(), obs.v.begin(), obs.v.end());
  }
  return out;
}

int Environment::observation_size(int k) const {
  const Topology& topo = *topology_;
  int size = static_cast<int>(topo.covered_users(k).size());
  if (topo.kind(k) != ApKind::BaseStation)
    for (int u : topo.covered_users(k)) size += topo.delay(k, u);
  return size;
}

int Environment::global_observation_size() const {
  int size = 0;
  for (int k = 0; k < topology_->num_aps(); ++k) size += observation_size(k);
  return size;
}

StepOutcome Environment::step(const JointAssignment& joint) {
  const Topology& topo = *topology_;
  const auto violations = validate_assignment(topo, joint);
  if (!violations.empty())
    throw std::invalid_argument("invalid assignment: " +
                                violations.front().reason);
  const int K = topo.num_aps();
  const int U = topo.num_users();
  for (int k = 0; k < K; ++k)
    for (int target : joint[static_cast<size_t>(k)])
      if (target != 0 && !topo.covers(k, target - 1))
        throw SchedulingError("AP " + std::to_string(k) +
                              " does not cover user " + std::to_string(target));

  const RewardWeights& w = config_.weights;
  StepOutcome out;
  FrameStats& st = out.stats;
  st.frame = state_.frame;
  st.aoi = state_.aoi;
  st.ap_energy.assign(static_cast<size_t>(K), 0.0);
  st.ap_rewards.assign(static_cast<size_t>(K), 0.0);
  for (long x : state_.aoi) st.aoi_sum += static_cast<double>(x);

  for (int k = 0; k < K; ++k) {
    double energy = 0.0;
    for (int target : joint[static_cast<size_t>(k)])
      if (target != 0) energy += energy_.at(k, target - 1);
    st.ap_energy[static_cast<size_t>(k)] = energy;
    if (k >= 1) st.energy_sum += energy;

    // The no-AoI ablation blinds the actor, not the reward.
    const LocalObservation seen = config_.mode == ObservationMode::NoAoi
                                      ? observe_delayed(k)
                                      : observe(k);
    double y_sum = 0.0;
    for (double y : seen.y) y_sum += y;
    st.ap_rewards[static_cast<size_t>(k)] =
        k == 0 ? -y_sum : -(w.aoi * y_sum + w.energy * energy);
  }
  st.reward = -(w.aoi * st.aoi_sum + w.energy * st.energy_sum);

  state_.ledger.launch(joint, topo);
  out.arrivals = state_.ledger.advance();
  st.interference = out.arrivals.interference_count;

  // AoI transition: a surviving BS delivery resets to 0; surviving delayed
  // deliveries cap at min(x, d - 1) + 1; otherwise the age grows by one.
  std::vector<int> bs_hit(static_cast<size_t>(U), 0);
  std::vector<long> best_age(static_cast<size_t>(U), -1);
  for (const CellArrivals& cell : out.arrivals.cells) {
    if (cell.collided) continue;
    const Arrival& a = cell.packets.front();
    const auto u = static_cast<size_t>(cell.user);
    if (topo.kind(a.ap) == ApKind::BaseStation) {
      bs_hit[u] = 1;
    } else {
      const long age = a.delay - 1;
      if (best_age[u] < 0 || age < best_age[u]) best_age[u] = age;
    }
  }
  for (size_t u = 0; u < static_cast<size_t>(U); ++u) {
    long& x = state_.aoi[u];
    if (bs_hit[u])
      x = 0;
    else if (best_age[u] >= 0)
      x = std::min(x, best_age[u]) + 1;
    else
      x += 1;
  }

  ++state_.frame;
  const auto depth = state_.history.size();
  state_.history[static_cast<size_t>(state_.frame) % depth] = state_.aoi;
  return out;
}

double mdp_objective(std::span<const FrameStats> stats,
                     const RewardWeights& weights) {
  if (stats.empty())
    throw std::invalid_argument("objective needs at least one frame");
  double aoi = 0.0;
  double energy = 0.0;
  for (const FrameStats& st : stats) {
    aoi += st.aoi_sum;
    energy += st.energy_sum;
  }
  const auto n = static_cast<double>(stats.size());
  return weights.aoi * aoi / n + weights.energy * energy / n;
}

}  // namespace saguin
