#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "saguin/topology.hpp"

namespace saguin {

struct LinkParams {
  double bandwidth_hz = 1e6;
  double noise_power_w = 1e-13;
  double payload_bits = 3000.0;
  double frame_len_s = 1e-3;
};

inline constexpr double kUnreachableEnergy =
    std::numeric_limits<double>::infinity();

/// Free-space gain (c / (4 pi d))^2. Throws std::domain_error for d <= 0.
double gain_free_space(double distance_m);

/// COST-231 Hata path loss 128.1 + 37.6 log10(d_km), in dB.
double gain_cost231_db(double distance_m);

double db_loss_to_gain(double loss_db);

/// Transmit power that carries exactly payload_bits in one frame at the
/// Shannon rate over a channel with the given linear gain.
double compensated_power(const LinkParams& link, double gain);

/// Shannon rate in bits/s at the given power.
double shannon_rate(const LinkParams& link, double power_w, double gain);

/// Per-frame transmit energy e[k][u] in joules. The satellite row is
/// zero; uncovered pairs hold kUnreachableEnergy.
class EnergyTable {
 public:
  EnergyTable() = default;
  EnergyTable(int num_aps, int num_users)
      : num_users_(num_users),
        e_(static_cast<size_t>(num_aps) * static_cast<size_t>(num_users),
           kUnreachableEnergy) {}

  double at(int k, int u) const { return e_[idx(k, u)]; }
  double& at(int k, int u) { return e_[idx(k, u)]; }
  int num_aps() const {
    return num_users_ == 0 ? 0 : static_cast<int>(e_.size()) / num_users_;
  }
  int num_users() const { return num_users_; }

  void write_csv(std::ostream& os) const;

 private:
  size_t idx(int k, int u) const {
    return static_cast<size_t>(k) * static_cast<size_t>(num_users_) +
           static_cast<size_t>(u);
  }
  int num_users_ = 0;
  std::vector<double> e_;
};

EnergyTable build_energy_table(const Topology& topology,
                               const LinkParams& link);

}  // namespace saguin
