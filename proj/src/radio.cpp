#include "saguin/radio.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "saguin/errors.hpp"

namespace saguin {

double gain_free_space(double distance_m) {
  if (!(distance_m > 0.0))
    throw std::domain_error("free-space gain needs a positive distance");
  const double ratio = kSpeedOfLight / (4.0 * std::numbers::pi * distance_m);
  return ratio * ratio;
}

double gain_cost231_db(double distance_m) {
  if (!(distance_m > 0.0))
    throw std::domain_error("COST-231 loss needs a positive distance");
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double db_loss_to_gain(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

double compensated_power(const LinkParams& link, double gain) {
  if (!(gain > 0.0)) throw std::domain_error("channel gain must be positive");
  if (!(link.bandwidth_hz > 0.0) || !(link.frame_len_s > 0.0) ||
      !(link.noise_power_w > 0.0) || link.payload_bits < 0.0)
    throw ConfigError("link parameters must be positive");
  const double spectral = link.payload_bits /
                          (link.bandwidth_hz * link.frame_len_s);
  const double snr = std::expm1(spectral * std::numbers::ln2);
  if (!std::isfinite(snr))
    throw ConfigError("payload cannot fit one frame at any finite power");
  const double power = snr * link.noise_power_w / gain;
  if (!std::isfinite(power))
    throw ConfigError("compensated power overflows");
  return power;
}

double shannon_rate(const LinkParams& link, double power_w, double gain) {
  return link.bandwidth_hz *
         std::log2(1.0 + power_w * gain / link.noise_power_w);
}

void EnergyTable::write_csv(std::ostream& os) const {
  os << "ap";
  for (int u = 0; u < num_users_; ++u) os << ",user" << (u + 1);
  os << '\n';
  for (int k = 0; k < num_aps(); ++k) {
    os << k;
    for (int u = 0; u < num_users_; ++u) {
      const double e = at(k, u);
      os << ',';
      if (std::isinf(e))
        os << "inf";
      else
        os << e;
    }
    os << '\n';
  }
}

EnergyTable build_energy_table(const Topology& topology,
                               const LinkParams& link) {
  EnergyTable table(topology.num_aps(), topology.num_users());
  for (int k = 0; k < topology.num_aps(); ++k) {
    const AccessPoint& ap = topology.ap(k);
    for (int u : topology.covered_users(k)) {
      if (ap.kind == ApKind::Satellite) {
        table.at(k, u) = 0.0;
        continue;
      }
      const double dist =
          euclidean_distance(ap.position, topology.users()[u].position);
      const double gain = ap.kind == ApKind::Uav
                              ? gain_free_space(dist)
                              : db_loss_to_gain(gain_cost231_db(dist));
      table.at(k, u) = compensated_power(link, gain) * link.frame_len_s;
    }
  }
  return table;
}

}  // namespace saguin
