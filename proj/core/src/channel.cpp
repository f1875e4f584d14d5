#include "sflopt/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "sflopt/units.hpp"

namespace sflopt {

double path_loss_db(double distance_km) {
  if (!(distance_km > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be > 0 km");
  }
  return 128.1 + 37.6 * std::log10(distance_km);
}

double channel_gain(double distance_km, double shadow_db) {
  return db_to_linear(-(path_loss_db(distance_km) + shadow_db));
}

double subchannel_rate(double bandwidth_hz, double psd_w_hz, double antenna_product,
                       double gain, double noise_psd_w_hz) {
  const double snr = psd_w_hz * antenna_product * gain / noise_psd_w_hz;
  return bandwidth_hz * std::log2(1.0 + snr);
}

double uplink_rate(const LinkAssignment& link) {
  double rate = 0.0;
  for (std::size_t i = 0; i < link.subchannel.size(); ++i) {
    rate += subchannel_rate(link.bandwidth_hz[i], link.psd_w_hz[i], link.antenna_product,
                            link.gain, link.noise_psd_w_hz);
  }
  return rate;
}

double link_power(const LinkAssignment& link) {
  double power = 0.0;
  for (std::size_t i = 0; i < link.subchannel.size(); ++i) {
    power += link.psd_w_hz[i] * link.bandwidth_hz[i];
  }
  return power;
}

}  // namespace sflopt
