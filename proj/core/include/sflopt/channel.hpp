#pragma once

#include <vector>

namespace sflopt {

// One client's uplink on one of the two server links: the set of subchannels
// it owns, the PSD driven on each, and the link-budget constants.
struct LinkAssignment {
  int client = 0;
  std::vector<int> subchannel;        // distinct indices
  std::vector<double> bandwidth_hz;   // aligned with subchannel
  std::vector<double> psd_w_hz;       // aligned, entries >= 0
  double gain = 0.0;                  // average channel gain, dimensionless
  double antenna_product = 1.0;       // GcGs or GcGf
  double noise_psd_w_hz = 1.0;
};

// 128.1 + 37.6 log10(d), d in kilometers. Throws std::domain_error for d <= 0.
double path_loss_db(double distance_km);

// Linear gain 10^(-(PL(d) + shadow_db)/10). shadow_db is a zero-mean normal
// draw made once per link at scenario-sampling time.
double channel_gain(double distance_km, double shadow_db);

// B * log2(1 + psd * G * gain / noise) for a single subchannel, bits/s.
double subchannel_rate(double bandwidth_hz, double psd_w_hz, double antenna_product,
                       double gain, double noise_psd_w_hz);

// Shannon-sum uplink rate over the assigned subchannels, bits/s.
double uplink_rate(const LinkAssignment& link);

// Consumed transmit power sum(psd * B), watts.
double link_power(const LinkAssignment& link);

}  // namespace sflopt
