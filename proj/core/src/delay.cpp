#include "sflopt/delay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sflopt/channel.hpp"
#include "sflopt/units.hpp"

namespace sflopt {

namespace {

// bits/rate with the sentinel contract: nothing to send costs nothing even at
// zero rate; something to send at zero rate never completes.
double transfer_delay(double bits, double rate_bps) {
  if (bits <= 0.0) return 0.0;
  if (rate_bps <= 0.0) return infinite_delay;
  return bits / rate_bps;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::string format_cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

double DelayBreakdown::t1_s() const {
  double m = 0.0;
  for (std::size_t k = 0; k < client_fp_s.size(); ++k) {
    m = std::max(m, client_fp_s[k] + activation_upload_s[k]);
  }
  return m;
}

double DelayBreakdown::t2_s() const { return max_of(client_bp_s); }

double DelayBreakdown::t3_s() const { return max_of(fed_upload_s); }

WorkloadSummary workloads(const ModelProfile& model, SplitDecision split, int rank) {
  const int layers = static_cast<int>(model.layers.size());
  if (split.split_point < 1 || split.split_point > layers - 1) {
    throw std::out_of_range("split_point must be in [1, L-1], got " +
                            std::to_string(split.split_point) + " for L=" +
                            std::to_string(layers));
  }
  if (rank < 1) throw std::out_of_range("rank must be >= 1");

  WorkloadSummary w;
  const double r = static_cast<double>(rank);
  for (int j = 0; j < layers; ++j) {
    const LayerProfile& l = model.layers[j];
    if (j < split.split_point) {
      w.client_fp += l.fp_flops;
      w.client_bp += l.bp_flops;
      w.client_fp_lora += r * l.lora_fp_flops;
      w.client_bp_lora += r * l.lora_bp_flops;
      w.client_lora_bits += r * l.lora_param_bits;
    } else {
      w.server_fp += l.fp_flops;
      w.server_bp += l.bp_flops;
      w.server_fp_lora += r * l.lora_fp_flops;
      w.server_bp_lora += r * l.lora_bp_flops;
    }
  }
  // Telescoping boundary sum collapses to the activation size at the split.
  w.activation_bits = model.layers[split.split_point - 1].activation_bits;
  return w;
}

ClientRates achieved_rates(const NetworkScenario& s, const Assignment& a,
                           const std::vector<double>& psd_main_w_hz,
                           const std::vector<double>& psd_fed_w_hz) {
  const int k_clients = s.num_clients();
  ClientRates rates;
  rates.main_bps.assign(k_clients, 0.0);
  rates.fed_bps.assign(k_clients, 0.0);
  for (std::size_t i = 0; i < a.owner_main.size(); ++i) {
    const int k = a.owner_main[i];
    rates.main_bps[k] += subchannel_rate(s.channels.subchannel_bw_main_hz[i], psd_main_w_hz[i],
                                         s.server.antenna_product_main, s.gain_main[k],
                                         s.server.noise_psd_main_w_hz);
  }
  for (std::size_t i = 0; i < a.owner_fed.size(); ++i) {
    const int k = a.owner_fed[i];
    rates.fed_bps[k] += subchannel_rate(s.channels.subchannel_bw_fed_hz[i], psd_fed_w_hz[i],
                                        s.server.antenna_product_fed, s.gain_fed[k],
                                        s.server.noise_psd_fed_w_hz);
  }
  return rates;
}

DelayBreakdown delays_from_rates(const NetworkScenario& s, const WorkloadSummary& w,
                                 const ClientRates& rates, int rounds, int local_steps) {
  const int k_clients = s.num_clients();
  const double b = static_cast<double>(s.model.batch_size);
  DelayBreakdown out;
  out.rounds = rounds;
  out.local_steps = local_steps;
  out.client_fp_s.resize(k_clients);
  out.activation_upload_s.resize(k_clients);
  out.client_bp_s.resize(k_clients);
  out.fed_upload_s.resize(k_clients);
  for (int k = 0; k < k_clients; ++k) {
    const ClientProfile& c = s.clients[k];
    out.client_fp_s[k] = b * c.cycles_per_flop * (w.client_fp + w.client_fp_lora) / c.compute_rate_hz;
    out.client_bp_s[k] = b * c.cycles_per_flop * (w.client_bp + w.client_bp_lora) / c.compute_rate_hz;
    out.activation_upload_s[k] = transfer_delay(b * w.activation_bits, rates.main_bps[k]);
    out.fed_upload_s[k] = transfer_delay(w.client_lora_bits, rates.fed_bps[k]);
  }
  const double kb = static_cast<double>(k_clients) * b * s.server.cycles_per_flop;
  out.server_fp_s = kb * (w.server_fp + w.server_fp_lora) / s.server.compute_rate_hz;
  out.server_bp_s = kb * (w.server_bp + w.server_bp_lora) / s.server.compute_rate_hz;
  out.t_local_s = local_round_delay(out);
  out.total_s = total_delay(out, rounds, local_steps);
  return out;
}

DelayBreakdown phase_delays(const NetworkScenario& s, const Decision& d) {
  const WorkloadSummary w = workloads(s.model, d.split, d.rank);
  const ClientRates rates = achieved_rates(s, d.assignment, d.psd_main_w_hz, d.psd_fed_w_hz);
  return delays_from_rates(s, w, rates, s.rounds_for(d.rank), s.ranks.local_steps);
}

double local_round_delay(const DelayBreakdown& b) {
  double straggler_up = 0.0;
  for (std::size_t k = 0; k < b.client_fp_s.size(); ++k) {
    straggler_up = std::max(straggler_up, b.client_fp_s[k] + b.activation_upload_s[k]);
  }
  return straggler_up + b.server_fp_s + b.server_bp_s + max_of(b.client_bp_s);
}

double total_delay(const DelayBreakdown& b, int rounds, int local_steps) {
  return static_cast<double>(rounds) *
         (static_cast<double>(local_steps) * b.t_local_s + max_of(b.fed_upload_s));
}

std::string breakdown_csv_header(int num_clients) {
  std::string h = "total_s,t_local_s,rounds,local_steps,server_fp_s,server_bp_s,t1_s,t2_s,t3_s";
  for (int k = 0; k < num_clients; ++k) {
    const std::string i = std::to_string(k);
    h += ",client_fp_s_" + i + ",activation_upload_s_" + i + ",client_bp_s_" + i +
         ",fed_upload_s_" + i;
  }
  return h;
}

std::string breakdown_csv_row(const DelayBreakdown& b) {
  std::string row = format_cell(b.total_s) + "," + format_cell(b.t_local_s) + "," +
                    std::to_string(b.rounds) + "," + std::to_string(b.local_steps) + "," +
                    format_cell(b.server_fp_s) + "," + format_cell(b.server_bp_s) + "," +
                    format_cell(b.t1_s()) + "," + format_cell(b.t2_s()) + "," +
                    format_cell(b.t3_s());
  for (std::size_t k = 0; k < b.client_fp_s.size(); ++k) {
    row += "," + format_cell(b.client_fp_s[k]) + "," + format_cell(b.activation_upload_s[k]) +
           "," + format_cell(b.client_bp_s[k]) + "," + format_cell(b.fed_upload_s[k]);
  }
  return row;
}

}  // namespace sflopt
