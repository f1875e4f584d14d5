#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sflopt {

struct ClientProfile {
  int id = 0;
  double compute_rate_hz = 0.0;    // f_k, GPU cycles per second
  double cycles_per_flop = 0.0;    // kappa_k
  double dist_main_km = 0.0;       // to the main server
  double dist_fed_km = 0.0;        // to the federated server
  double max_power_w = 0.0;        // per-client transmit power cap
  std::int64_t dataset_size = 1;   // D_k, aggregation weight
};

struct ServerProfile {
  double compute_rate_hz = 0.0;       // f_s
  double cycles_per_flop = 0.0;       // kappa_s
  double power_cap_main_w = 0.0;      // total uplink power budget, main link
  double power_cap_fed_w = 0.0;       // total uplink power budget, fed link
  double antenna_product_main = 0.0;  // GcGs
  double antenna_product_fed = 0.0;   // GcGf
  double noise_psd_main_w_hz = 0.0;
  double noise_psd_fed_w_hz = 0.0;
};

// Per-layer per-sample costs. LoRA terms are per rank.
struct LayerProfile {
  double fp_flops = 0.0;
  double bp_flops = 0.0;
  double lora_fp_flops = 0.0;
  double lora_bp_flops = 0.0;
  double activation_bits = 0.0;   // size of this layer's output activations
  double lora_param_bits = 0.0;   // adapter upload size per rank
};

struct ModelProfile {
  std::vector<LayerProfile> layers;
  int batch_size = 1;
};

// Rank candidates with the calibrated rounds-to-target table E(r) and the
// number of local steps I per global round.
struct RankProfile {
  std::vector<int> candidates;          // strictly increasing
  std::map<int, int> rounds;            // r -> E(r)
  int local_steps = 1;                  // I
};

struct ChannelSpec {
  std::vector<double> subchannel_bw_main_hz;  // length M
  std::vector<double> subchannel_bw_fed_hz;   // length N
  double shadow_sigma_db = 0.0;
};

// Knobs consumed by sample_scenario when drawing fresh clients.
struct SamplingSpec {
  double compute_rate_min_hz = 1e9;
  double compute_rate_max_hz = 1.6e9;
  double d_max_km = 0.02;          // client disk radius around the fed server
  double main_offset_km = 0.1;     // main server distance from the centroid
  double min_distance_km = 0.001;  // floor keeping the path-loss formula finite
  bool shadow_in_gain = true;      // fold the shadow draw into the link gain
};

struct NetworkScenario {
  std::vector<ClientProfile> clients;
  ServerProfile server;
  ModelProfile model;
  RankProfile ranks;
  ChannelSpec channels;
  std::vector<double> gain_main;  // sampled gamma(d_k^s), one per client
  std::vector<double> gain_fed;   // sampled gamma(d_k^f)
  std::uint64_t seed = 0;
  SamplingSpec sampling;
  // Solver knobs from [experiment].
  double eps_s = 1e-3;
  int max_iters = 50;

  int num_clients() const { return static_cast<int>(clients.size()); }
  int num_layers() const { return static_cast<int>(model.layers.size()); }
  int rounds_for(int rank) const;  // E(r); throws if rank is not in the table
};

struct Violation {
  std::string where;
  std::string message;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::vector<Violation>& violations);
  std::vector<Violation> violations;
};

// Bundled defaults: the 12-block GPT2-S cost profile (forward per block =
// layer norm + attention + feed-forward, LM head folded into the last block,
// backward = 2x forward, 16-bit activations at every block boundary, two
// adapted matrices per block).
ModelProfile gpt2s_model_profile();

// Default experiment: 5 clients in a 20 m disk, 20+20 subchannels of 25 kHz,
// -174 dBm/Hz noise, GPT2-S model, toy-calibrated rank table. Deterministic
// for a given seed.
NetworkScenario default_scenario(std::uint64_t seed = 0);

// Empty list iff every type invariant holds. Violations are data, not errors.
std::vector<Violation> validate_scenario(const NetworkScenario& s);

// Redraws client positions, compute rates and link gains from the template's
// sampling spec. Pure function of (template, seed).
NetworkScenario sample_scenario(const NetworkScenario& tmpl, std::uint64_t seed);

// Load/store the sectioned text config. Loading applies defaults for missing
// keys, materializes clients (explicit arrays or sampled from the recorded
// seed) and validates; save_scenario writes the concrete scenario so that a
// load reproduces it field-for-field.
NetworkScenario load_scenario(const std::string& path);
NetworkScenario scenario_from_string(const std::string& text);
void save_scenario(const NetworkScenario& s, const std::string& path);
std::string scenario_to_string(const NetworkScenario& s);

}  // namespace sflopt
