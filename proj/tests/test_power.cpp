#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sflopt/channel.hpp"
#include "sflopt/optimizer.hpp"
#include "sflopt/power.hpp"
#include "sflopt/rng.hpp"

using namespace sflopt;
using testutil::tiny_scenario;

namespace {

Assignment one_channel_each(int k_clients) {
  Assignment a;
  for (int k = 0; k < k_clients; ++k) {
    a.owner_main.push_back(k);
    a.owner_fed.push_back(k);
  }
  return a;
}

}  // namespace

TEST_CASE("psd_for_rate inverts the rate formula") {
  CHECK(psd_for_rate(0.0, 25e3, 160.0, 8.91e-10, 3.98e-21) == 0.0);
  // theta == B: 2^1 - 1 = 1, so psd = noise / (G * gain).
  const double g_gamma = 160.0 * 8.91e-10;
  CHECK(psd_for_rate(25e3, 25e3, 160.0, 8.91e-10, 3.98e-21) ==
        doctest::Approx(3.98e-21 / g_gamma).epsilon(1e-12));
  // theta == 2B with G*gamma = 1.43e-7.
  CHECK(psd_for_rate(50e3, 25e3, 1.0, 1.43e-7, 3.98e-21) ==
        doctest::Approx(8.35e-14).epsilon(1e-3));

  // Round trip through the forward formula.
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double bw = rng.uniform(1e3, 1e5);
    const double theta = rng.uniform(0.0, 20.0 * bw);
    const double antenna = rng.uniform(1.0, 200.0);
    const double gain = rng.uniform(1e-13, 1e-6);
    const double noise = 3.98e-21;
    const double psd = psd_for_rate(theta, bw, antenna, gain, noise);
    CHECK(subchannel_rate(bw, psd, antenna, gain, noise) ==
          doctest::Approx(theta).epsilon(1e-9));
  }
}

TEST_CASE("solved PSDs reproduce the epigraph bounds and budgets") {
  const NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 2);
  const PowerSolution sol = solve_power(s, one_channel_each(2), w, 20, 2);

  Decision d;
  d.assignment = one_channel_each(2);
  d.psd_main_w_hz = sol.psd_main_w_hz;
  d.psd_fed_w_hz = sol.psd_fed_w_hz;
  d.split = SplitDecision{1};
  d.rank = 2;
  CHECK(check_constraints(s, d).empty());

  // Achieved per-client delay matches the solved bound through the forward
  // rate formula (inverse round trip).
  const ClientRates rates = achieved_rates(s, d.assignment, d.psd_main_w_hz, d.psd_fed_w_hz);
  const DelayBreakdown b = delays_from_rates(s, w, rates, 20, 2);
  CHECK(b.t1_s() == doctest::Approx(sol.rates.t1_s).epsilon(1e-9));
  CHECK(b.t3_s() == doctest::Approx(sol.rates.t3_s).epsilon(1e-9));
  CHECK(b.total_s == doctest::Approx(sol.objective_s).epsilon(1e-9));
  // T2 is rate-free and exact.
  CHECK(sol.rates.t2_s == b.t2_s());
}

TEST_CASE("symmetric clients get symmetric power") {
  NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  s.clients[1] = s.clients[0];
  s.clients[1].id = 1;
  s.gain_main[1] = s.gain_main[0];
  s.gain_fed[1] = s.gain_fed[0];
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  const PowerSolution sol = solve_power(s, one_channel_each(2), w, 10, 2);
  CHECK(sol.psd_main_w_hz[0] == doctest::Approx(sol.psd_main_w_hz[1]).epsilon(1e-9));
  CHECK(sol.psd_fed_w_hz[0] == doctest::Approx(sol.psd_fed_w_hz[1]).epsilon(1e-9));
  // Both clients sit at the same straggler delay.
  const ClientRates rates =
      achieved_rates(s, one_channel_each(2), sol.psd_main_w_hz, sol.psd_fed_w_hz);
  const DelayBreakdown b = delays_from_rates(s, w, rates, 10, 2);
  CHECK(b.client_fp_s[0] + b.activation_upload_s[0] ==
        doctest::Approx(b.client_fp_s[1] + b.activation_upload_s[1]).epsilon(1e-9));
}

TEST_CASE("nothing to send solves to zero power") {
  NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  for (auto& l : s.model.layers) {
    l.activation_bits = 0.0;
    l.lora_param_bits = 0.0;
  }
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  const PowerSolution sol = solve_power(s, one_channel_each(2), w, 10, 2);
  CHECK(sol.rates.t3_s == 0.0);
  for (double p : sol.psd_main_w_hz) CHECK(p == 0.0);
  for (double p : sol.psd_fed_w_hz) CHECK(p == 0.0);
  // T1 collapses to the slowest client FP (batch size 2 in this fixture).
  double max_fp = 0.0;
  for (const auto& c : s.clients) {
    max_fp = std::max(max_fp, 2.0 * c.cycles_per_flop * w.client_fp / c.compute_rate_hz);
  }
  CHECK(sol.rates.t1_s == doctest::Approx(max_fp).epsilon(1e-12));
}

TEST_CASE("solver tracks the grid oracle on tiny instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    NetworkScenario s = sample_scenario(tiny_scenario(2, 3, 2, 2), seed);
    const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 2);
    const PowerSolution sol = solve_power(s, one_channel_each(2), w, 15, 2);
    const double oracle = oracle_grid_solve(s, one_channel_each(2), w, 15, 2, 200);
    CHECK(sol.objective_s <= oracle * (1.0 + 5e-3));
    CHECK(sol.objective_s >= oracle * (1.0 - 5e-3));
  }
}

TEST_CASE("solver never loses to random feasible points") {
  const NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  const WorkloadSummary w = workloads(s.model, SplitDecision{2}, 2);
  const Assignment a = one_channel_each(2);
  const PowerSolution sol = solve_power(s, a, w, 15, 2);
  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    Decision d;
    d.assignment = a;
    d.split = SplitDecision{2};
    d.rank = 2;
    d.psd_main_w_hz.resize(2);
    d.psd_fed_w_hz.resize(2);
    for (int i = 0; i < 2; ++i) {
      // Feasible by construction: per-channel power below every cap.
      const double cap =
          std::min(s.clients[i].max_power_w, s.server.power_cap_main_w / 2.0) / 25e3;
      d.psd_main_w_hz[i] = rng.uniform(0.0, cap);
      const double cap_f =
          std::min(s.clients[i].max_power_w, s.server.power_cap_fed_w / 2.0) / 25e3;
      d.psd_fed_w_hz[i] = rng.uniform(0.0, cap_f);
    }
    const ClientRates rates = achieved_rates(s, a, d.psd_main_w_hz, d.psd_fed_w_hz);
    const DelayBreakdown b = delays_from_rates(s, w, rates, 15, 2);
    CHECK(b.total_s >= sol.objective_s * (1.0 - 1e-9) - 1e-6);
  }
}

TEST_CASE("objective is monotone in the budgets and bandwidth") {
  NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 2);
  const Assignment a = one_channel_each(2);
  const double base = solve_power(s, a, w, 15, 2).objective_s;
  const double slack = 1e-6;

  SUBCASE("client cap") {
    for (auto& c : s.clients) c.max_power_w *= 2.0;
    CHECK(solve_power(s, a, w, 15, 2).objective_s <= base + slack);
  }
  SUBCASE("server caps") {
    s.server.power_cap_main_w *= 2.0;
    s.server.power_cap_fed_w *= 2.0;
    CHECK(solve_power(s, a, w, 15, 2).objective_s <= base + slack);
  }
  SUBCASE("bandwidth") {
    for (auto& bw : s.channels.subchannel_bw_main_hz) bw *= 2.0;
    for (auto& bw : s.channels.subchannel_bw_fed_hz) bw *= 2.0;
    CHECK(solve_power(s, a, w, 15, 2).objective_s <= base + slack);
  }
}

TEST_CASE("relaxing the unique binding budget strictly helps") {
  NetworkScenario s = tiny_scenario(1, 3, 1, 1);
  // Make the client cap the unique binding constraint on both links.
  s.clients[0].max_power_w = 0.5;
  s.server.power_cap_main_w = 50.0;
  s.server.power_cap_fed_w = 50.0;
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 2);
  const Assignment a = one_channel_each(1);
  const double base = solve_power(s, a, w, 15, 2).objective_s;
  s.clients[0].max_power_w *= 1.01;
  const double relaxed = solve_power(s, a, w, 15, 2).objective_s;
  CHECK(relaxed < base);
}

TEST_CASE("impossible transfers are infeasible on both paths") {
  NetworkScenario s = tiny_scenario(1, 3, 1, 1);
  s.clients[0].max_power_w = 0.0;
  s.server.power_cap_main_w = 0.0;
  s.server.power_cap_fed_w = 0.0;
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  const Assignment a = one_channel_each(1);
  CHECK_THROWS_AS(solve_power(s, a, w, 10, 2), InfeasibleError);
  CHECK(std::isinf(oracle_grid_solve(s, a, w, 10, 2, 50)));
}

TEST_CASE("oracle guard rejects large instances") {
  const NetworkScenario s = tiny_scenario(3, 3, 3, 3);
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  CHECK_THROWS_AS(oracle_grid_solve(s, one_channel_each(3), w, 10, 2, 50),
                  std::invalid_argument);
}
