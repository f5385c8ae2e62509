#include "saguin/topology.hpp"

#include <algorithm>
#include <cmath>

#include "saguin/errors.hpp"

namespace saguin {

std::string_view to_string(ApKind kind) {
  switch (kind) {
    case ApKind::Satellite:
      return "satellite";
    case ApKind::Uav:
      return "uav";
    case ApKind::BaseStation:
      return "bs";
  }
  return "?";
}

ApKind parse_ap_kind(std::string_view text) {
  if (text == "satellite" || text == "sat") return ApKind::Satellite;
  if (text == "uav") return ApKind::Uav;
  if (text == "bs" || text == "base-station" || text == "base_station")
    return ApKind::BaseStation;
  throw ConfigError("unknown AP kind '" + std::string(text) + "'");
}

double ground_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double euclidean_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool compute_coverage(const AccessPoint& ap, const UserNode& user) {
  if (ap.kind == ApKind::Satellite) return true;
  return ground_distance(ap.position, user.position) <= ap.radius_m;
}

int compute_delay_frames(const AccessPoint& ap, const UserNode& user,
                         double frame_len_s) {
  if (!(frame_len_s > 0.0) || !std::isfinite(frame_len_s))
    throw ConfigError("frame length must be positive");
  if (ap.kind == ApKind::BaseStation) return 0;
  if (ap.delay_frames) return *ap.delay_frames;
  const double seconds =
      euclidean_distance(ap.position, user.position) / kSpeedOfLight;
  // A delayed AP always needs at least one frame.
  return std::max(1, static_cast<int>(std::ceil(seconds / frame_len_s)));
}

std::vector<std::vector<int>> Topology::coverage_matrix() const {
  std::vector<std::vector<int>> out(aps_.size(),
                                    std::vector<int>(users_.size()));
  for (int k = 0; k < num_aps(); ++k)
    for (int u = 0; u < num_users(); ++u) out[k][u] = coverage_[idx(k, u)];
  return out;
}

std::vector<std::vector<int>> Topology::delay_matrix() const {
  std::vector<std::vector<int>> out(aps_.size(),
                                    std::vector<int>(users_.size()));
  for (int k = 0; k < num_aps(); ++k)
    for (int u = 0; u < num_users(); ++u) out[k][u] = delay_[idx(k, u)];
  return out;
}

namespace {

void check_finite(const Vec3& p, const std::string& what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
    throw ConfigError(what + " has a non-finite position");
}

}  // namespace

Topology build_topology(const NetworkSpec& spec) {
  if (spec.aps.empty() || spec.aps.front().kind != ApKind::Satellite)
    throw ConfigError("AP 0 must be the satellite");
  if (spec.channels < 1) throw ConfigError("channel count must be >= 1");
  if (!(spec.frame_len_s > 0.0))
    throw ConfigError("frame length must be positive");

  Topology topo;
  topo.aps_ = spec.aps;
  topo.users_ = spec.users;
  topo.channels_ = spec.channels;
  topo.frame_len_s_ = spec.frame_len_s;

  // Kind ordering: satellite, then UAVs, then base stations.
  int stage = 0;
  for (size_t k = 0; k < topo.aps_.size(); ++k) {
    AccessPoint& ap = topo.aps_[k];
    ap.index = static_cast<int>(k);
    const std::string name = "AP " + std::to_string(k);
    check_finite(ap.position, name);
    if (!(ap.radius_m > 0.0)) throw ConfigError(name + " needs radius_m > 0");
    if (ap.kind != ApKind::BaseStation && !(ap.position.z > 0.0))
      throw ConfigError(name + " must be airborne (z > 0)");
    if (ap.delay_frames && *ap.delay_frames < 0)
      throw ConfigError(name + " has a negative delay override");
    if (ap.delay_frames && *ap.delay_frames == 0 &&
        ap.kind != ApKind::BaseStation)
      throw ConfigError(name + " is delayed and needs delay_frames >= 1");
    const int rank = ap.kind == ApKind::Satellite ? 0
                     : ap.kind == ApKind::Uav     ? 1
                                                  : 2;
    if (k > 0 && rank == 0) throw ConfigError("exactly one satellite allowed");
    if (rank < stage)
      throw ConfigError("APs must be ordered satellite, UAVs, base stations");
    stage = rank;
    if (ap.kind == ApKind::Uav) ++topo.num_uavs_;
  }

  for (size_t u = 0; u < topo.users_.size(); ++u) {
    topo.users_[u].index = static_cast<int>(u);
    check_finite(topo.users_[u].position, "user " + std::to_string(u));
  }

  const size_t nk = topo.aps_.size();
  const size_t nu = topo.users_.size();
  topo.coverage_.assign(nk * nu, 0);
  topo.delay_.assign(nk * nu, 0);
  topo.covered_.assign(nk, {});
  for (size_t k = 0; k < nk; ++k) {
    for (size_t u = 0; u < nu; ++u) {
      if (!compute_coverage(topo.aps_[k], topo.users_[u])) continue;
      topo.coverage_[k * nu + u] = 1;
      const int d =
          compute_delay_frames(topo.aps_[k], topo.users_[u], spec.frame_len_s);
      topo.delay_[k * nu + u] = d;
      topo.max_delay_ = std::max(topo.max_delay_, d);
      topo.covered_[k].push_back(static_cast<int>(u));
    }
  }
  return topo;
}

}  // namespace saguin
