#include "sflopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sflopt/channel.hpp"
#include "sflopt/config_text.hpp"
#include "sflopt/rng.hpp"
#include "sflopt/units.hpp"

namespace sflopt {

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "scenario validation failed:";
  for (const auto& v : violations) out << "\n  " << v.where << ": " << v.message;
  return out.str();
}

}  // namespace

ValidationError::ValidationError(const std::vector<Violation>& v)
    : std::runtime_error(join_violations(v)), violations(v) {}

int NetworkScenario::rounds_for(int rank) const {
  const auto it = ranks.rounds.find(rank);
  if (it == ranks.rounds.end()) {
    throw std::out_of_range("no rounds entry E(r) for rank " + std::to_string(rank));
  }
  return it->second;
}

ModelProfile gpt2s_model_profile() {
  // Per-block costs in FLOPs/sample: layer norm 0.025 G + attention 257.7 G +
  // feed-forward 309.2 G; the 1264.1 G LM head rides on the last block.
  constexpr int blocks = 12;
  constexpr double block_fp = (0.025 + 257.7 + 309.2) * 1e9;
  constexpr double lm_head_fp = 1264.1 * 1e9;
  constexpr double lora_fp_per_rank = 0.050 * 1e9;
  // seq_len x hidden x 16-bit activations at every block boundary.
  constexpr double act_bits = 512.0 * 768.0 * 16.0;
  // Two adapted matrices (query, value) per block, 32-bit factors: 2*(d+k)*32.
  constexpr double adapter_bits_per_rank = 2.0 * (768.0 + 768.0) * 32.0;

  ModelProfile m;
  m.batch_size = 16;
  m.layers.resize(blocks);
  for (int j = 0; j < blocks; ++j) {
    LayerProfile& layer = m.layers[j];
    layer.fp_flops = block_fp + (j == blocks - 1 ? lm_head_fp : 0.0);
    layer.bp_flops = 2.0 * layer.fp_flops;
    layer.lora_fp_flops = lora_fp_per_rank;
    layer.lora_bp_flops = 2.0 * lora_fp_per_rank;
    layer.activation_bits = act_bits;
    layer.lora_param_bits = adapter_bits_per_rank;
  }
  return m;
}

namespace {

RankProfile default_rank_profile() {
  RankProfile r;
  r.candidates = {1, 2, 4, 6, 8};
  // Rounds-to-target table produced by the bundled toy calibration run
  // (`sflopt calibrate --seed 1`); regenerate with that command after
  // changing the toy task.
  r.rounds = {{1, 94}, {2, 65}, {4, 52}, {6, 47}, {8, 45}};
  r.local_steps = 5;
  return r;
}

NetworkScenario default_template() {
  NetworkScenario s;
  s.server.compute_rate_hz = 5e9;
  s.server.cycles_per_flop = 1.0 / 32768.0;
  s.server.power_cap_main_w = dbm_to_watts(46.99);
  s.server.power_cap_fed_w = dbm_to_watts(46.99);
  s.server.antenna_product_main = 160.0;
  s.server.antenna_product_fed = 80.0;
  s.server.noise_psd_main_w_hz = dbm_per_hz_to_w_per_hz(-174.0);
  s.server.noise_psd_fed_w_hz = dbm_per_hz_to_w_per_hz(-174.0);

  s.model = gpt2s_model_profile();
  s.ranks = default_rank_profile();

  constexpr int m_subchannels = 20;
  constexpr int n_subchannels = 20;
  s.channels.subchannel_bw_main_hz.assign(m_subchannels, 500e3 / m_subchannels);
  s.channels.subchannel_bw_fed_hz.assign(n_subchannels, 500e3 / n_subchannels);
  s.channels.shadow_sigma_db = 8.0;

  s.sampling = SamplingSpec{};

  // Placeholder clients; sample_scenario redraws positions, rates and gains.
  constexpr int k_clients = 5;
  s.clients.resize(k_clients);
  s.gain_main.resize(k_clients);
  s.gain_fed.resize(k_clients);
  for (int k = 0; k < k_clients; ++k) {
    ClientProfile& c = s.clients[k];
    c.id = k;
    c.compute_rate_hz = 1.3e9;
    c.cycles_per_flop = 1.0 / 1024.0;
    c.dist_main_km = s.sampling.main_offset_km;
    c.dist_fed_km = s.sampling.min_distance_km;
    c.max_power_w = dbm_to_watts(41.76);
    c.dataset_size = 1000;
    s.gain_main[k] = channel_gain(c.dist_main_km, 0.0);
    s.gain_fed[k] = channel_gain(c.dist_fed_km, 0.0);
  }
  return s;
}

}  // namespace

NetworkScenario default_scenario(std::uint64_t seed) {
  return sample_scenario(default_template(), seed);
}

NetworkScenario sample_scenario(const NetworkScenario& tmpl, std::uint64_t seed) {
  NetworkScenario s = tmpl;
  s.seed = seed;
  const SamplingSpec& sp = s.sampling;
  Rng rng(seed);
  const int k_clients = s.num_clients();
  s.gain_main.assign(k_clients, 0.0);
  s.gain_fed.assign(k_clients, 0.0);
  const double two_pi = 6.283185307179586476925286766559;
  for (int k = 0; k < k_clients; ++k) {
    ClientProfile& c = s.clients[k];
    c.id = k;
    // Uniform over the disk of radius d_max centered on the fed server.
    const double radius = sp.d_max_km * std::sqrt(rng.uniform());
    const double angle = two_pi * rng.uniform();
    const double x = radius * std::cos(angle);
    const double y = radius * std::sin(angle);
    c.dist_fed_km = std::max(radius, sp.min_distance_km);
    c.dist_main_km = std::max(std::hypot(x - sp.main_offset_km, y), sp.min_distance_km);
    c.compute_rate_hz = rng.uniform(sp.compute_rate_min_hz, sp.compute_rate_max_hz);
    const double shadow_main = sp.shadow_in_gain ? rng.normal(0.0, s.channels.shadow_sigma_db) : 0.0;
    const double shadow_fed = sp.shadow_in_gain ? rng.normal(0.0, s.channels.shadow_sigma_db) : 0.0;
    s.gain_main[k] = channel_gain(c.dist_main_km, shadow_main);
    s.gain_fed[k] = channel_gain(c.dist_fed_km, shadow_fed);
  }
  return s;
}

std::vector<Violation> validate_scenario(const NetworkScenario& s) {
  std::vector<Violation> out;
  const auto add = [&out](const std::string& where, const std::string& message) {
    out.push_back(Violation{where, message});
  };

  const int k_clients = s.num_clients();
  if (k_clients < 1) add("clients", "K >= 1 required");
  for (int k = 0; k < k_clients; ++k) {
    const ClientProfile& c = s.clients[k];
    const std::string where = "clients[" + std::to_string(k) + "]";
    if (!(c.compute_rate_hz > 0)) add(where + ".compute_rate_hz", "must be > 0");
    if (!(c.cycles_per_flop > 0)) add(where + ".cycles_per_flop", "must be > 0");
    if (!(c.dist_main_km > 0)) add(where + ".dist_main_km", "must be > 0");
    if (!(c.dist_fed_km > 0)) add(where + ".dist_fed_km", "must be > 0");
    if (!(c.max_power_w > 0)) add(where + ".max_power_w", "must be > 0");
    if (c.dataset_size < 1) add(where + ".dataset_size", "must be >= 1");
  }

  const ServerProfile& sv = s.server;
  if (!(sv.compute_rate_hz > 0)) add("server.compute_rate_hz", "must be > 0");
  if (!(sv.cycles_per_flop > 0)) add("server.cycles_per_flop", "must be > 0");
  if (!(sv.power_cap_main_w > 0)) add("server.power_cap_main_w", "must be > 0");
  if (!(sv.power_cap_fed_w > 0)) add("server.power_cap_fed_w", "must be > 0");
  if (!(sv.antenna_product_main > 0)) add("server.antenna_product_main", "must be > 0");
  if (!(sv.antenna_product_fed > 0)) add("server.antenna_product_fed", "must be > 0");
  if (!(sv.noise_psd_main_w_hz > 0)) add("server.noise_psd_main_w_hz", "must be > 0");
  if (!(sv.noise_psd_fed_w_hz > 0)) add("server.noise_psd_fed_w_hz", "must be > 0");

  const int layers = s.num_layers();
  if (layers < 2) {
    add("model.layers", "length >= 2 required (got " + std::to_string(layers) + ")");
  }
  for (int j = 0; j < layers; ++j) {
    const LayerProfile& l = s.model.layers[j];
    const std::string where = "model.layers[" + std::to_string(j) + "]";
    if (l.fp_flops < 0 || l.bp_flops < 0 || l.lora_fp_flops < 0 || l.lora_bp_flops < 0 ||
        l.activation_bits < 0 || l.lora_param_bits < 0) {
      add(where, "all cost fields must be >= 0");
    }
    if (!(l.fp_flops > 0) && !(l.bp_flops > 0)) {
      add(where, "at least one of fp_flops, bp_flops must be > 0");
    }
  }
  if (s.model.batch_size < 1) add("model.batch_size", "must be >= 1");

  if (s.ranks.candidates.empty()) add("lora.candidates", "must be nonempty");
  for (std::size_t i = 0; i < s.ranks.candidates.size(); ++i) {
    const int r = s.ranks.candidates[i];
    if (r < 1) add("lora.candidates", "rank " + std::to_string(r) + " must be >= 1");
    if (i > 0 && s.ranks.candidates[i - 1] >= r) {
      add("lora.candidates", "must be strictly increasing");
    }
    const auto it = s.ranks.rounds.find(r);
    if (it == s.ranks.rounds.end()) {
      add("lora.rounds", "missing E(r) entry for rank " + std::to_string(r));
    } else if (it->second < 1) {
      add("lora.rounds", "E(" + std::to_string(r) + ") must be >= 1");
    }
  }
  if (s.ranks.local_steps < 1) add("lora.local_steps", "must be >= 1");

  const int m = static_cast<int>(s.channels.subchannel_bw_main_hz.size());
  const int n = static_cast<int>(s.channels.subchannel_bw_fed_hz.size());
  if (m < k_clients) {
    add("channels.subchannel_bw_main_hz",
        "M >= K required (M=" + std::to_string(m) + ", K=" + std::to_string(k_clients) + ")");
  }
  if (n < k_clients) {
    add("channels.subchannel_bw_fed_hz",
        "N >= K required (N=" + std::to_string(n) + ", K=" + std::to_string(k_clients) + ")");
  }
  for (int i = 0; i < m; ++i) {
    if (!(s.channels.subchannel_bw_main_hz[i] > 0)) {
      add("channels.subchannel_bw_main_hz[" + std::to_string(i) + "]", "must be > 0");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!(s.channels.subchannel_bw_fed_hz[i] > 0)) {
      add("channels.subchannel_bw_fed_hz[" + std::to_string(i) + "]", "must be > 0");
    }
  }
  if (s.channels.shadow_sigma_db < 0) add("channels.shadow_sigma_db", "must be >= 0");

  if (static_cast<int>(s.gain_main.size()) != k_clients) {
    add("gain_main", "must have one entry per client");
  }
  if (static_cast<int>(s.gain_fed.size()) != k_clients) {
    add("gain_fed", "must have one entry per client");
  }
  for (std::size_t k = 0; k < s.gain_main.size(); ++k) {
    if (!(s.gain_main[k] > 0)) add("gain_main[" + std::to_string(k) + "]", "must be > 0");
  }
  for (std::size_t k = 0; k < s.gain_fed.size(); ++k) {
    if (!(s.gain_fed[k] > 0)) add("gain_fed[" + std::to_string(k) + "]", "must be > 0");
  }

  const SamplingSpec& sp = s.sampling;
  if (!(sp.compute_rate_min_hz > 0) || sp.compute_rate_max_hz < sp.compute_rate_min_hz) {
    add("sampling.compute_rate", "need 0 < min <= max");
  }
  if (sp.d_max_km < 0) add("sampling.d_max_km", "must be >= 0");
  if (!(sp.main_offset_km > 0)) add("sampling.main_offset_km", "must be > 0");
  if (!(sp.min_distance_km > 0)) add("sampling.min_distance_km", "must be > 0");

  if (!(s.eps_s > 0)) add("experiment.eps_s", "must be > 0");
  if (s.max_iters < 1) add("experiment.max_iters", "must be >= 1");
  return out;
}

namespace {

// Reads "<base>_w" or "<base>_dbm", whichever is present (watts win).
std::optional<double> power_key(const ConfigDoc& doc, const std::string& section,
                                const std::string& base) {
  if (auto w = doc.get_double(section, base + "_w")) return w;
  if (auto dbm = doc.get_double(section, base + "_dbm")) return dbm_to_watts(*dbm);
  return std::nullopt;
}

std::optional<double> noise_key(const ConfigDoc& doc, const std::string& section,
                                const std::string& base) {
  if (auto w = doc.get_double(section, base + "_w_hz")) return w;
  if (auto dbm = doc.get_double(section, base + "_dbm_hz")) return dbm_per_hz_to_w_per_hz(*dbm);
  return std::nullopt;
}

std::optional<double> distance_km_key(const ConfigDoc& doc, const std::string& section,
                                      const std::string& base) {
  if (auto km = doc.get_double(section, base + "_km")) return km;
  if (auto m = doc.get_double(section, base + "_m")) return *m / 1000.0;
  return std::nullopt;
}

// Scalar-or-list client field, broadcast to K entries.
std::vector<double> client_list(const ConfigDoc& doc, const std::string& key, int k_clients,
                                double fallback) {
  auto list = doc.get_double_list("clients", key);
  if (!list) return std::vector<double>(static_cast<std::size_t>(k_clients), fallback);
  if (list->size() == 1) return std::vector<double>(static_cast<std::size_t>(k_clients), (*list)[0]);
  if (static_cast<int>(list->size()) != k_clients) {
    throw ConfigError("config: clients." + key + ": expected 1 or " + std::to_string(k_clients) +
                      " entries, got " + std::to_string(list->size()));
  }
  return *list;
}

NetworkScenario scenario_from_doc(const ConfigDoc& doc) {
  NetworkScenario s = default_template();

  // [experiment]
  if (auto v = doc.get_int("experiment", "seed")) s.seed = static_cast<std::uint64_t>(*v);
  if (auto v = doc.get_double("experiment", "eps_s")) s.eps_s = *v;
  if (auto v = doc.get_int("experiment", "max_iters")) s.max_iters = static_cast<int>(*v);

  // [network]
  if (auto v = doc.get_double("network", "server_compute_hz")) s.server.compute_rate_hz = *v;
  if (auto v = doc.get_double("network", "server_cycles_per_flop")) s.server.cycles_per_flop = *v;
  if (auto v = power_key(doc, "network", "power_cap_main")) s.server.power_cap_main_w = *v;
  if (auto v = power_key(doc, "network", "power_cap_fed")) s.server.power_cap_fed_w = *v;
  if (auto v = power_key(doc, "network", "power_cap")) {
    s.server.power_cap_main_w = s.server.power_cap_fed_w = *v;
  }
  if (auto v = doc.get_double("network", "antenna_product_main")) s.server.antenna_product_main = *v;
  if (auto v = doc.get_double("network", "antenna_product_fed")) s.server.antenna_product_fed = *v;
  if (auto v = noise_key(doc, "network", "noise_psd")) {
    s.server.noise_psd_main_w_hz = s.server.noise_psd_fed_w_hz = *v;
  }
  if (auto v = noise_key(doc, "network", "noise_psd_main")) s.server.noise_psd_main_w_hz = *v;
  if (auto v = noise_key(doc, "network", "noise_psd_fed")) s.server.noise_psd_fed_w_hz = *v;
  if (auto v = doc.get_double("network", "shadow_sigma_db")) s.channels.shadow_sigma_db = *v;
  if (auto v = doc.get_bool("network", "shadow_in_gain")) s.sampling.shadow_in_gain = *v;
  if (auto v = distance_km_key(doc, "network", "d_max")) s.sampling.d_max_km = *v;
  if (auto v = distance_km_key(doc, "network", "main_offset")) s.sampling.main_offset_km = *v;
  if (auto v = distance_km_key(doc, "network", "min_distance")) s.sampling.min_distance_km = *v;

  const int m = static_cast<int>(
      doc.get_int("network", "subchannels_main").value_or(20));
  const int n = static_cast<int>(
      doc.get_int("network", "subchannels_fed").value_or(20));
  const double bw_main_total = doc.get_double("network", "bandwidth_main_hz").value_or(500e3);
  const double bw_fed_total = doc.get_double("network", "bandwidth_fed_hz").value_or(500e3);
  if (auto list = doc.get_double_list("network", "subchannel_bw_main_hz")) {
    s.channels.subchannel_bw_main_hz = *list;
  } else {
    if (m < 1) throw ConfigError("config: network.subchannels_main must be >= 1");
    s.channels.subchannel_bw_main_hz.assign(m, bw_main_total / m);
  }
  if (auto list = doc.get_double_list("network", "subchannel_bw_fed_hz")) {
    s.channels.subchannel_bw_fed_hz = *list;
  } else {
    if (n < 1) throw ConfigError("config: network.subchannels_fed must be >= 1");
    s.channels.subchannel_bw_fed_hz.assign(n, bw_fed_total / n);
  }

  // [clients]
  if (auto v = doc.get_double("clients", "compute_hz_min")) s.sampling.compute_rate_min_hz = *v;
  if (auto v = doc.get_double("clients", "compute_hz_max")) s.sampling.compute_rate_max_hz = *v;
  const auto explicit_rates = doc.get_double_list("clients", "compute_hz");
  int k_clients = static_cast<int>(doc.get_int("clients", "count").value_or(0));
  if (k_clients == 0) {
    k_clients = explicit_rates ? static_cast<int>(explicit_rates->size())
                               : static_cast<int>(s.clients.size());
  }
  if (k_clients < 1) throw ConfigError("config: clients.count must be >= 1");

  const double kappa_default = 1.0 / 1024.0;
  const double pmax_default =
      power_key(doc, "clients", "max_power").value_or(dbm_to_watts(41.76));
  const auto kappas = client_list(doc, "cycles_per_flop", k_clients, kappa_default);
  const auto pmaxes = client_list(doc, "max_power_w_list", k_clients, pmax_default);
  const double dataset_default = doc.get_double("clients", "dataset_size").value_or(1000.0);
  const auto datasets = client_list(doc, "dataset_sizes", k_clients, dataset_default);

  s.clients.assign(k_clients, ClientProfile{});
  for (int k = 0; k < k_clients; ++k) {
    ClientProfile& c = s.clients[k];
    c.id = k;
    c.cycles_per_flop = kappas[k];
    c.max_power_w = pmaxes[k];
    c.dataset_size = static_cast<std::int64_t>(std::llround(datasets[k]));
    c.compute_rate_hz = 0.5 * (s.sampling.compute_rate_min_hz + s.sampling.compute_rate_max_hz);
    c.dist_main_km = s.sampling.main_offset_km;
    c.dist_fed_km = std::max(s.sampling.min_distance_km, 1e-6);
  }

  if (explicit_rates) {
    // Fully specified client set; gains come from the file when present.
    const auto rates = client_list(doc, "compute_hz", k_clients, 0.0);
    const auto dist_main = doc.get_double_list("clients", "dist_main_km");
    const auto dist_fed = doc.get_double_list("clients", "dist_fed_km");
    if (!dist_main || !dist_fed) {
      throw ConfigError(
          "config: explicit clients.compute_hz requires dist_main_km and dist_fed_km");
    }
    const auto dm = client_list(doc, "dist_main_km", k_clients, 0.0);
    const auto df = client_list(doc, "dist_fed_km", k_clients, 0.0);
    for (int k = 0; k < k_clients; ++k) {
      s.clients[k].compute_rate_hz = rates[k];
      s.clients[k].dist_main_km = dm[k];
      s.clients[k].dist_fed_km = df[k];
    }
    const auto gm = doc.get_double_list("clients", "gain_main");
    const auto gf = doc.get_double_list("clients", "gain_fed");
    if (gm && gf) {
      s.gain_main = *gm;
      s.gain_fed = *gf;
    } else {
      // Draw just the shadow terms for the given geometry.
      Rng rng(s.seed);
      s.gain_main.assign(k_clients, 0.0);
      s.gain_fed.assign(k_clients, 0.0);
      for (int k = 0; k < k_clients; ++k) {
        const double sh_m =
            s.sampling.shadow_in_gain ? rng.normal(0.0, s.channels.shadow_sigma_db) : 0.0;
        const double sh_f =
            s.sampling.shadow_in_gain ? rng.normal(0.0, s.channels.shadow_sigma_db) : 0.0;
        s.gain_main[k] = channel_gain(s.clients[k].dist_main_km, sh_m);
        s.gain_fed[k] = channel_gain(s.clients[k].dist_fed_km, sh_f);
      }
    }
  }

  // [model]
  if (auto v = doc.get_int("model", "batch_size")) s.model.batch_size = static_cast<int>(*v);
  const std::string profile = doc.get_string("model", "profile").value_or("gpt2s");
  if (auto fp = doc.get_double_list("model", "fp_flops")) {
    const std::size_t layers = fp->size();
    const auto field = [&doc, layers](const char* key) {
      auto list = doc.get_double_list("model", key);
      if (!list) return std::vector<double>(layers, 0.0);
      if (list->size() != layers) {
        throw ConfigError(std::string("config: model.") + key + ": expected " +
                          std::to_string(layers) + " entries");
      }
      return *list;
    };
    const auto bp = field("bp_flops");
    const auto lfp = field("lora_fp_flops");
    const auto lbp = field("lora_bp_flops");
    const auto act = field("activation_bits");
    const auto lpb = field("lora_param_bits");
    s.model.layers.assign(layers, LayerProfile{});
    for (std::size_t j = 0; j < layers; ++j) {
      s.model.layers[j] = LayerProfile{(*fp)[j], bp[j], lfp[j], lbp[j], act[j], lpb[j]};
    }
  } else if (profile == "gpt2s") {
    const int batch = s.model.batch_size;
    s.model = gpt2s_model_profile();
    s.model.batch_size = batch;
  } else {
    throw ConfigError("config: model.profile '" + profile + "' unknown and no fp_flops given");
  }

  // [lora]
  if (auto v = doc.get_int_list("lora", "candidates")) {
    s.ranks.candidates.clear();
    for (auto c : *v) s.ranks.candidates.push_back(static_cast<int>(c));
  }
  if (auto v = doc.get_pair_map("lora", "rounds")) {
    s.ranks.rounds.clear();
    for (const auto& [r, e] : *v) s.ranks.rounds[static_cast<int>(r)] = static_cast<int>(e);
  }
  if (auto v = doc.get_int("lora", "local_steps")) s.ranks.local_steps = static_cast<int>(*v);

  if (!explicit_rates) {
    s = sample_scenario(s, s.seed);
  }

  const auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(violations);
  return s;
}

}  // namespace

NetworkScenario scenario_from_string(const std::string& text) {
  return scenario_from_doc(ConfigDoc::parse_string(text));
}

NetworkScenario load_scenario(const std::string& path) {
  return scenario_from_doc(ConfigDoc::parse_file(path));
}

std::string scenario_to_string(const NetworkScenario& s) {
  ConfigDoc doc;
  doc.set_double_list("network", "subchannel_bw_main_hz", s.channels.subchannel_bw_main_hz);
  doc.set_double_list("network", "subchannel_bw_fed_hz", s.channels.subchannel_bw_fed_hz);
  doc.set_double("network", "antenna_product_main", s.server.antenna_product_main);
  doc.set_double("network", "antenna_product_fed", s.server.antenna_product_fed);
  doc.set_double("network", "noise_psd_main_w_hz", s.server.noise_psd_main_w_hz);
  doc.set_double("network", "noise_psd_fed_w_hz", s.server.noise_psd_fed_w_hz);
  doc.set_double("network", "power_cap_main_w", s.server.power_cap_main_w);
  doc.set_double("network", "power_cap_fed_w", s.server.power_cap_fed_w);
  doc.set_double("network", "shadow_sigma_db", s.channels.shadow_sigma_db);
  doc.set_bool("network", "shadow_in_gain", s.sampling.shadow_in_gain);
  doc.set_double("network", "server_compute_hz", s.server.compute_rate_hz);
  doc.set_double("network", "server_cycles_per_flop", s.server.cycles_per_flop);
  doc.set_double("network", "d_max_km", s.sampling.d_max_km);
  doc.set_double("network", "main_offset_km", s.sampling.main_offset_km);
  doc.set_double("network", "min_distance_km", s.sampling.min_distance_km);

  const int k_clients = s.num_clients();
  doc.set_int("clients", "count", k_clients);
  doc.set_double("clients", "compute_hz_min", s.sampling.compute_rate_min_hz);
  doc.set_double("clients", "compute_hz_max", s.sampling.compute_rate_max_hz);
  std::vector<double> rates, kappas, pmaxes, dmain, dfed, datasets;
  for (const auto& c : s.clients) {
    rates.push_back(c.compute_rate_hz);
    kappas.push_back(c.cycles_per_flop);
    pmaxes.push_back(c.max_power_w);
    dmain.push_back(c.dist_main_km);
    dfed.push_back(c.dist_fed_km);
    datasets.push_back(static_cast<double>(c.dataset_size));
  }
  doc.set_double_list("clients", "compute_hz", rates);
  doc.set_double_list("clients", "cycles_per_flop", kappas);
  doc.set_double_list("clients", "max_power_w_list", pmaxes);
  doc.set_double_list("clients", "dist_main_km", dmain);
  doc.set_double_list("clients", "dist_fed_km", dfed);
  doc.set_double_list("clients", "dataset_sizes", datasets);
  doc.set_double_list("clients", "gain_main", s.gain_main);
  doc.set_double_list("clients", "gain_fed", s.gain_fed);

  doc.set_int("model", "batch_size", s.model.batch_size);
  std::vector<double> fp, bp, lfp, lbp, act, lpb;
  for (const auto& l : s.model.layers) {
    fp.push_back(l.fp_flops);
    bp.push_back(l.bp_flops);
    lfp.push_back(l.lora_fp_flops);
    lbp.push_back(l.lora_bp_flops);
    act.push_back(l.activation_bits);
    lpb.push_back(l.lora_param_bits);
  }
  doc.set_double_list("model", "fp_flops", fp);
  doc.set_double_list("model", "bp_flops", bp);
  doc.set_double_list("model", "lora_fp_flops", lfp);
  doc.set_double_list("model", "lora_bp_flops", lbp);
  doc.set_double_list("model", "activation_bits", act);
  doc.set_double_list("model", "lora_param_bits", lpb);

  std::vector<std::int64_t> candidates(s.ranks.candidates.begin(), s.ranks.candidates.end());
  doc.set_int_list("lora", "candidates", candidates);
  std::map<std::int64_t, std::int64_t> rounds;
  for (const auto& [r, e] : s.ranks.rounds) rounds[r] = e;
  doc.set_pair_map("lora", "rounds", rounds);
  doc.set_int("lora", "local_steps", s.ranks.local_steps);

  doc.set_int("experiment", "seed", static_cast<std::int64_t>(s.seed));
  doc.set_double("experiment", "eps_s", s.eps_s);
  doc.set_int("experiment", "max_iters", s.max_iters);
  return doc.to_string();
}

void save_scenario(const NetworkScenario& s, const std::string& path) {
  ConfigDoc::parse_string(scenario_to_string(s)).save_file(path);
}

}  // namespace sflopt
