#include "sflopt/subchannel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sflopt/channel.hpp"
#include "sflopt/units.hpp"

namespace sflopt {

namespace {

constexpr double budget_slack = 1e-9;  // relative tolerance on C4/C5 checks

double transfer_delay(double bits, double rate_bps) {
  if (bits <= 0.0) return 0.0;
  if (rate_bps <= 0.0) return infinite_delay;
  return bits / rate_bps;
}

// Widest remaining subchannel, ties toward the lowest index.
std::size_t pick_widest(const std::vector<int>& remaining, const std::vector<double>& bw) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < remaining.size(); ++i) {
    if (bw[remaining[i]] > bw[remaining[best]]) best = i;
  }
  return best;
}

struct SideInputs {
  const std::vector<double>& bw;
  const std::vector<double>& psd_prev;
  const std::vector<double>& gain;   // per client
  double antenna_product;
  double noise_psd;
  double server_cap_w;               // aggregate budget on this link
  double payload_bits;               // data each client must move
  std::vector<double> lag_offset_s;  // added to the transfer delay in phase 2
};

// One link's two-phase pass. phase1_order gives each client's phase-1
// priority; the highest value is served first.
std::vector<int> allocate_side(const NetworkScenario& s, const SideInputs& in,
                               const std::vector<double>& phase1_order, const char* side,
                               std::vector<std::string>& warnings) {
  const int k_clients = s.num_clients();
  const int channels = static_cast<int>(in.bw.size());
  std::vector<int> owner(channels, -1);
  std::vector<int> remaining(channels);
  for (int i = 0; i < channels; ++i) remaining[i] = i;

  std::vector<double> rate(k_clients, 0.0);
  std::vector<double> client_power(k_clients, 0.0);
  double total_power = 0.0;

  const auto grant = [&](int client, std::size_t pos) {
    const int ch = remaining[pos];
    owner[ch] = client;
    rate[client] += subchannel_rate(in.bw[ch], in.psd_prev[ch], in.antenna_product,
                                    in.gain[client], in.noise_psd);
    const double p = in.psd_prev[ch] * in.bw[ch];
    client_power[client] += p;
    total_power += p;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  };

  // Phase 1: one subchannel per client, neediest first.
  std::vector<int> unserved(k_clients);
  for (int k = 0; k < k_clients; ++k) unserved[k] = k;
  for (int j = 0; j < k_clients; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < unserved.size(); ++i) {
      if (phase1_order[unserved[i]] > phase1_order[unserved[best]]) best = i;
    }
    const int client = unserved[best];
    unserved.erase(unserved.begin() + static_cast<std::ptrdiff_t>(best));
    grant(client, pick_widest(remaining, in.bw));
  }

  // Phase 2: keep feeding the straggler until the link runs out of spectrum.
  std::vector<int> active(k_clients);
  for (int k = 0; k < k_clients; ++k) active[k] = k;
  int last_deactivated = -1;
  while (!remaining.empty()) {
    if (active.empty()) {
      warnings.push_back(std::string(side) + ": all clients hit a power budget; " +
                         std::to_string(remaining.size()) +
                         " leftover subchannels assigned to client " +
                         std::to_string(last_deactivated));
      for (int ch : remaining) owner[ch] = last_deactivated;
      remaining.clear();
      break;
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      const double lag_i =
          in.lag_offset_s[active[i]] + transfer_delay(in.payload_bits, rate[active[i]]);
      const double lag_w =
          in.lag_offset_s[active[worst]] + transfer_delay(in.payload_bits, rate[active[worst]]);
      if (lag_i > lag_w) worst = i;
    }
    const int client = active[worst];
    const std::size_t pos = pick_widest(remaining, in.bw);
    const int ch = remaining[pos];
    const double extra = in.psd_prev[ch] * in.bw[ch];
    const bool breaks_c4 =
        client_power[client] + extra > s.clients[client].max_power_w * (1.0 + budget_slack);
    const bool breaks_c5 = total_power + extra > in.server_cap_w * (1.0 + budget_slack);
    if (breaks_c4 || breaks_c5) {
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
      last_deactivated = client;
      continue;
    }
    grant(client, pos);
  }
  return owner;
}

}  // namespace

AllocationResult allocate_greedy(const NetworkScenario& s, SplitDecision split, int rank,
                                 const std::vector<double>& psd_main_prev,
                                 const std::vector<double>& psd_fed_prev) {
  const int k_clients = s.num_clients();
  const int m = static_cast<int>(s.channels.subchannel_bw_main_hz.size());
  const int n = static_cast<int>(s.channels.subchannel_bw_fed_hz.size());
  if (m < k_clients || n < k_clients) {
    throw std::invalid_argument("allocate_greedy: need at least one subchannel per client");
  }
  if (static_cast<int>(psd_main_prev.size()) != m || static_cast<int>(psd_fed_prev.size()) != n) {
    throw std::invalid_argument("allocate_greedy: PSD vector sizes must match subchannel counts");
  }
  for (double p : psd_main_prev) {
    if (p < 0) throw std::invalid_argument("allocate_greedy: negative main PSD");
  }
  for (double p : psd_fed_prev) {
    if (p < 0) throw std::invalid_argument("allocate_greedy: negative fed PSD");
  }

  const WorkloadSummary w = workloads(s.model, split, rank);
  const double b = static_cast<double>(s.model.batch_size);

  AllocationResult result;

  // Main link: phase 1 serves the computationally weakest client first and
  // phase 2 chases max(T_k^F + T_k^s).
  std::vector<double> fp_delay(k_clients, 0.0);
  std::vector<double> slowest_first(k_clients, 0.0);
  for (int k = 0; k < k_clients; ++k) {
    fp_delay[k] = b * s.clients[k].cycles_per_flop * (w.client_fp + w.client_fp_lora) /
                  s.clients[k].compute_rate_hz;
    slowest_first[k] = -s.clients[k].compute_rate_hz;
  }
  SideInputs main_side{s.channels.subchannel_bw_main_hz,
                       psd_main_prev,
                       s.gain_main,
                       s.server.antenna_product_main,
                       s.server.noise_psd_main_w_hz,
                       s.server.power_cap_main_w,
                       b * w.activation_bits,
                       fp_delay};
  result.assignment.owner_main =
      allocate_side(s, main_side, slowest_first, "main", result.warnings);

  // Fed link: phase 1 serves the farthest client first and phase 2 chases
  // max T_k^f.
  std::vector<double> farthest_first(k_clients, 0.0);
  for (int k = 0; k < k_clients; ++k) farthest_first[k] = s.clients[k].dist_fed_km;
  SideInputs fed_side{s.channels.subchannel_bw_fed_hz,
                      psd_fed_prev,
                      s.gain_fed,
                      s.server.antenna_product_fed,
                      s.server.noise_psd_fed_w_hz,
                      s.server.power_cap_fed_w,
                      w.client_lora_bits,
                      std::vector<double>(k_clients, 0.0)};
  result.assignment.owner_fed =
      allocate_side(s, fed_side, farthest_first, "fed", result.warnings);
  return result;
}

}  // namespace sflopt
