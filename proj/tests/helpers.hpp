#pragma once

// Shared builders for small hand-analyzable scenarios.

#include <vector>

#include "sflopt/channel.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt::testutil {

// K clients, uniform layer costs, m/n subchannels of 25 kHz each. Everything
// finite and positive so the scenario validates.
inline NetworkScenario tiny_scenario(int k_clients, int layers, int m, int n) {
  NetworkScenario s;
  s.server.compute_rate_hz = 5e9;
  s.server.cycles_per_flop = 1.0 / 32768.0;
  s.server.power_cap_main_w = 50.0;
  s.server.power_cap_fed_w = 50.0;
  s.server.antenna_product_main = 160.0;
  s.server.antenna_product_fed = 80.0;
  s.server.noise_psd_main_w_hz = 3.98e-21;
  s.server.noise_psd_fed_w_hz = 3.98e-21;

  s.model.batch_size = 2;
  s.model.layers.assign(layers, LayerProfile{1e9, 2e9, 1e6, 2e6, 1e6, 1e5});

  s.ranks.candidates = {1, 2, 4};
  s.ranks.rounds = {{1, 30}, {2, 20}, {4, 15}};
  s.ranks.local_steps = 2;

  s.channels.subchannel_bw_main_hz.assign(m, 25e3);
  s.channels.subchannel_bw_fed_hz.assign(n, 25e3);
  s.channels.shadow_sigma_db = 8.0;

  s.sampling.d_max_km = 0.02;

  for (int k = 0; k < k_clients; ++k) {
    ClientProfile c;
    c.id = k;
    c.compute_rate_hz = 1e9 + 1e8 * k;
    c.cycles_per_flop = 1.0 / 1024.0;
    c.dist_main_km = 0.1;
    c.dist_fed_km = 0.005 + 0.002 * k;
    c.max_power_w = 15.0;
    c.dataset_size = 100;
    s.clients.push_back(c);
    s.gain_main.push_back(channel_gain(c.dist_main_km, 0.0));
    s.gain_fed.push_back(channel_gain(c.dist_fed_km, 0.0));
  }
  return s;
}

}  // namespace sflopt::testutil
