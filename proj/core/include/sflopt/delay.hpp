#pragma once

#include <string>
#include <vector>

#include "sflopt/decision.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

// Aggregated per-sample FLOP counts and data sizes for a (split, rank) pair.
// Client/server pairs partition the full-model totals.
struct WorkloadSummary {
  double client_fp = 0.0;        // Phi_c^F
  double client_fp_lora = 0.0;   // dPhi_c^F
  double client_bp = 0.0;        // Phi_c^B
  double client_bp_lora = 0.0;   // dPhi_c^B
  double server_fp = 0.0;        // Phi_s^F
  double server_fp_lora = 0.0;   // dPhi_s^F
  double server_bp = 0.0;        // Phi_s^B
  double server_bp_lora = 0.0;   // dPhi_s^B
  double activation_bits = 0.0;  // Gamma_s, bits/sample at the split boundary
  double client_lora_bits = 0.0; // dTheta_c, adapter upload size in bits
};

// Total achieved uplink rate per client on each link, bits/s.
struct ClientRates {
  std::vector<double> main_bps;
  std::vector<double> fed_bps;
};

// Per-phase delays for one local round plus the round/total aggregates.
// A required transfer with zero rate yields the +inf sentinel.
struct DelayBreakdown {
  std::vector<double> client_fp_s;          // T_k^F
  std::vector<double> activation_upload_s;  // T_k^s
  std::vector<double> client_bp_s;          // T_k^B
  std::vector<double> fed_upload_s;         // T_k^f
  double server_fp_s = 0.0;                 // T_s^F
  double server_bp_s = 0.0;                 // T_s^B
  double t_local_s = 0.0;
  double total_s = 0.0;
  int rounds = 1;       // E(r) used for the total
  int local_steps = 1;  // I

  double t1_s() const;  // max_k (T_k^F + T_k^s)
  double t2_s() const;  // max_k T_k^B
  double t3_s() const;  // max_k T_k^f
};

WorkloadSummary workloads(const ModelProfile& model, SplitDecision split, int rank);

// Sum of per-subchannel Shannon rates under the decision's PSDs.
ClientRates achieved_rates(const NetworkScenario& s, const Assignment& a,
                           const std::vector<double>& psd_main_w_hz,
                           const std::vector<double>& psd_fed_w_hz);

// Phase delays from already-known workloads and rates; shared by the
// optimizer blocks, which hold rates fixed while varying split or rank.
DelayBreakdown delays_from_rates(const NetworkScenario& s, const WorkloadSummary& w,
                                 const ClientRates& rates, int rounds, int local_steps);

// Full evaluation of a decision against a scenario.
DelayBreakdown phase_delays(const NetworkScenario& s, const Decision& d);

// max_k(T_k^F + T_k^s) + T_s^F + T_s^B + max_k T_k^B
double local_round_delay(const DelayBreakdown& b);

// E * (I * t_local + max_k T_k^f)
double total_delay(const DelayBreakdown& b, int rounds, int local_steps);

// One CSV row per breakdown; column order is the header's.
std::string breakdown_csv_header(int num_clients);
std::string breakdown_csv_row(const DelayBreakdown& b);

}  // namespace sflopt
