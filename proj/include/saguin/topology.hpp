#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace saguin {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class ApKind { Satellite, Uav, BaseStation };

std::string_view to_string(ApKind kind);
ApKind parse_ap_kind(std::string_view text);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double ground_distance(const Vec3& a, const Vec3& b);
double euclidean_distance(const Vec3& a, const Vec3& b);

struct AccessPoint {
  int index = 0;
  ApKind kind = ApKind::BaseStation;
  Vec3 position;
  double radius_m = 1.0;
  // When set, replaces the geometric delay for every covered user.
  std::optional<int> delay_frames;
};

struct UserNode {
  int index = 0;  // 0-based; the action encoding uses index + 1
  Vec3 position;
};

/// Everything needed to materialize a Topology. APs must be ordered
/// satellite, UAVs, base stations.
struct NetworkSpec {
  std::vector<AccessPoint> aps;
  std::vector<UserNode> users;
  int channels = 1;
  double frame_len_s = 1e-3;
};

/// Ground-plane coverage test. The satellite covers every user in the
/// target region regardless of its nominal radius.
bool compute_coverage(const AccessPoint& ap, const UserNode& user);

/// Propagation delay in whole frames. Base stations are zero-delay;
/// other kinds use the override when present, else ceil(distance / c / dt).
int compute_delay_frames(const AccessPoint& ap, const UserNode& user,
                         double frame_len_s);

/// Immutable world model: geometry plus the derived coverage and delay
/// matrices, both indexed [ap][user].
class Topology {
 public:
  const std::vector<AccessPoint>& aps() const { return aps_; }
  const std::vector<UserNode>& users() const { return users_; }
  const AccessPoint& ap(int k) const { return aps_[static_cast<size_t>(k)]; }

  int num_aps() const { return static_cast<int>(aps_.size()); }
  int num_users() const { return static_cast<int>(users_.size()); }
  int num_uavs() const { return num_uavs_; }
  int num_base_stations() const { return num_aps() - 1 - num_uavs_; }
  int channels() const { return channels_; }
  double frame_len_s() const { return frame_len_s_; }
  ApKind kind(int k) const { return ap(k).kind; }

  bool covers(int k, int u) const { return coverage_[idx(k, u)] != 0; }
  int delay(int k, int u) const { return delay_[idx(k, u)]; }
  int max_delay() const { return max_delay_; }

  /// Users covered by AP k in ascending order.
  const std::vector<int>& covered_users(int k) const {
    return covered_[static_cast<size_t>(k)];
  }

  std::vector<std::vector<int>> coverage_matrix() const;
  std::vector<std::vector<int>> delay_matrix() const;

 private:
  friend Topology build_topology(const NetworkSpec& spec);
  size_t idx(int k, int u) const {
    return static_cast<size_t>(k) * users_.size() + static_cast<size_t>(u);
  }

  std::vector<AccessPoint> aps_;
  std::vector<UserNode> users_;
  std::vector<int> coverage_;
  std::vector<int> delay_;
  std::vector<std::vector<int>> covered_;
  int channels_ = 1;
  int num_uavs_ = 0;
  int max_delay_ = 0;
  double frame_len_s_ = 1e-3;
};

/// Validates the network description and materializes both matrices. Throws ConfigError
/// on malformed input or on a user that no AP can reach.
Topology build_topology(const NetworkSpec& spec);

}  // namespace saguin
