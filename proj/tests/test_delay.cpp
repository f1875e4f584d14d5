#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/units.hpp"

using namespace sflopt;
using testutil::tiny_scenario;

TEST_CASE("workload aggregation over the bundled transformer profile") {
  const ModelProfile m = gpt2s_model_profile();
  const WorkloadSummary w = workloads(m, SplitDecision{6}, 4);
  CHECK(w.client_fp == doctest::Approx(6 * 566.925e9).epsilon(1e-12));
  CHECK(w.client_fp_lora == doctest::Approx(6 * 4 * 0.050e9).epsilon(1e-12));
  CHECK(w.client_bp == doctest::Approx(2 * 6 * 566.925e9).epsilon(1e-12));
  CHECK(w.activation_bits == doctest::Approx(512.0 * 768.0 * 16.0));
  CHECK(w.client_lora_bits == doctest::Approx(6 * 4 * 2.0 * 1536.0 * 32.0));
}

TEST_CASE("split boundary picks the activation size at the cut") {
  ModelProfile m;
  m.batch_size = 1;
  m.layers = {LayerProfile{1e9, 2e9, 0, 0, 8e6, 0}, LayerProfile{1e9, 2e9, 0, 0, 1e6, 0},
              LayerProfile{1e9, 2e9, 0, 0, 8e6, 0}};
  CHECK(workloads(m, SplitDecision{1}, 1).activation_bits == doctest::Approx(8e6));
  CHECK(workloads(m, SplitDecision{2}, 1).activation_bits == doctest::Approx(1e6));
}

TEST_CASE("lora aggregates are linear in the rank") {
  const ModelProfile m = gpt2s_model_profile();
  for (int cut = 1; cut <= 11; cut += 5) {
    const WorkloadSummary w1 = workloads(m, SplitDecision{cut}, 3);
    const WorkloadSummary w2 = workloads(m, SplitDecision{cut}, 6);
    CHECK(w2.client_fp_lora == doctest::Approx(2 * w1.client_fp_lora));
    CHECK(w2.server_fp_lora == doctest::Approx(2 * w1.server_fp_lora));
    CHECK(w2.client_bp_lora == doctest::Approx(2 * w1.client_bp_lora));
    CHECK(w2.server_bp_lora == doctest::Approx(2 * w1.server_bp_lora));
    CHECK(w2.client_lora_bits == doctest::Approx(2 * w1.client_lora_bits));
  }
}

TEST_CASE("split partitions the full-model totals") {
  const ModelProfile m = gpt2s_model_profile();
  double total_fp = 0.0;
  double total_bp = 0.0;
  for (const auto& l : m.layers) {
    total_fp += l.fp_flops;
    total_bp += l.bp_flops;
  }
  for (int cut = 1; cut <= 11; ++cut) {
    const WorkloadSummary w = workloads(m, SplitDecision{cut}, 2);
    CHECK(w.client_fp + w.server_fp == doctest::Approx(total_fp).epsilon(1e-12));
    CHECK(w.client_bp + w.server_bp == doctest::Approx(total_bp).epsilon(1e-12));
  }
}

TEST_CASE("workload argument validation") {
  const ModelProfile m = gpt2s_model_profile();
  CHECK_THROWS_AS(workloads(m, SplitDecision{0}, 1), std::out_of_range);
  CHECK_THROWS_AS(workloads(m, SplitDecision{12}, 1), std::out_of_range);
  CHECK_THROWS_AS(workloads(m, SplitDecision{3}, 0), std::out_of_range);
}

TEST_CASE("client forward-pass delay at a hand-checked operating point") {
  // 1024 GFLOP at 1/1024 cycles/FLOP on a 1 GHz device, batch 1 -> 1 s.
  NetworkScenario s = tiny_scenario(1, 2, 1, 1);
  s.model.batch_size = 1;
  s.model.layers = {LayerProfile{1024e9, 0.1, 0, 0, 0, 0}, LayerProfile{0.1, 0.1, 0, 0, 0, 0}};
  s.clients[0].compute_rate_hz = 1e9;
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  ClientRates rates;
  rates.main_bps = {1.0};
  rates.fed_bps = {1.0};
  const DelayBreakdown b = delays_from_rates(s, w, rates, 1, 1);
  CHECK(b.client_fp_s[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transfer sentinels") {
  NetworkScenario s = tiny_scenario(1, 2, 1, 1);
  SUBCASE("no activations means zero upload delay regardless of rate") {
    s.model.layers[0].activation_bits = 0.0;
    const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
    ClientRates rates;
    rates.main_bps = {0.0};
    rates.fed_bps = {1.0};
    const DelayBreakdown b = delays_from_rates(s, w, rates, 1, 1);
    CHECK(b.activation_upload_s[0] == 0.0);
  }
  SUBCASE("positive payload at zero rate is the infinite sentinel") {
    const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
    ClientRates rates;
    rates.main_bps = {0.0};
    rates.fed_bps = {1.0};
    const DelayBreakdown b = delays_from_rates(s, w, rates, 1, 1);
    CHECK(std::isinf(b.activation_upload_s[0]));
    CHECK(std::isinf(b.total_s));
  }
}

TEST_CASE("local round composition") {
  DelayBreakdown b;
  b.client_fp_s = {1.5, 2.0};
  b.activation_upload_s = {0.5, 1.0};  // fp+up = {2, 3}
  b.client_bp_s = {0.5, 1.0};
  b.fed_upload_s = {0.0, 0.0};
  b.server_fp_s = 1.0;
  b.server_bp_s = 2.0;
  CHECK(local_round_delay(b) == doctest::Approx(7.0));

  DelayBreakdown single;
  single.client_fp_s = {1.0};
  single.activation_upload_s = {2.0};
  single.client_bp_s = {3.0};
  single.fed_upload_s = {0.0};
  single.server_fp_s = 4.0;
  single.server_bp_s = 5.0;
  CHECK(local_round_delay(single) == doctest::Approx(15.0));

  DelayBreakdown zeros;
  zeros.client_fp_s = {0.0};
  zeros.activation_upload_s = {0.0};
  zeros.client_bp_s = {0.0};
  zeros.fed_upload_s = {0.0};
  CHECK(local_round_delay(zeros) == 0.0);
}

TEST_CASE("total delay composition") {
  DelayBreakdown b;
  b.client_fp_s = {0.0};
  b.activation_upload_s = {0.0};
  b.client_bp_s = {0.0};
  b.fed_upload_s = {3.0};
  b.t_local_s = 7.0;
  CHECK(total_delay(b, 10, 4) == doctest::Approx(310.0));
  CHECK(total_delay(b, 1, 1) == doctest::Approx(10.0));
  b.fed_upload_s = {0.0};
  CHECK(total_delay(b, 10, 4) == doctest::Approx(280.0));
}

TEST_CASE("total delay is monotone in resources") {
  NetworkScenario s = tiny_scenario(3, 4, 3, 3);
  const WorkloadSummary w = workloads(s.model, SplitDecision{2}, 2);
  ClientRates rates;
  rates.main_bps = {2e5, 3e5, 4e5};
  rates.fed_bps = {1e5, 2e5, 3e5};
  const double base = delays_from_rates(s, w, rates, 10, 2).total_s;

  SUBCASE("faster client") {
    s.clients[0].compute_rate_hz *= 2.0;
    CHECK(delays_from_rates(s, w, rates, 10, 2).total_s <= base);
  }
  SUBCASE("faster server") {
    s.server.compute_rate_hz *= 2.0;
    CHECK(delays_from_rates(s, w, rates, 10, 2).total_s <= base);
  }
  SUBCASE("faster links") {
    for (auto& r : rates.main_bps) r *= 2.0;
    for (auto& r : rates.fed_bps) r *= 2.0;
    CHECK(delays_from_rates(s, w, rates, 10, 2).total_s <= base);
  }
  SUBCASE("strictly increasing in batch, rounds and steps") {
    s.model.batch_size *= 2;
    CHECK(delays_from_rates(s, w, rates, 10, 2).total_s > base);
    s.model.batch_size /= 2;
    CHECK(delays_from_rates(s, w, rates, 20, 2).total_s > base);
    CHECK(delays_from_rates(s, w, rates, 10, 4).total_s > base);
  }
}

TEST_CASE("breakdown serializes to one CSV row") {
  NetworkScenario s = tiny_scenario(2, 3, 2, 2);
  const WorkloadSummary w = workloads(s.model, SplitDecision{1}, 1);
  ClientRates rates;
  rates.main_bps = {1e5, 1e5};
  rates.fed_bps = {0.0, 1e5};  // client 0 starves: inf sentinel in the row
  const DelayBreakdown b = delays_from_rates(s, w, rates, 2, 2);
  const std::string header = breakdown_csv_header(2);
  const std::string row = breakdown_csv_row(b);
  const auto count = [](const std::string& text, char c) {
    std::size_t n = 0;
    for (char x : text) n += (x == c);
    return n;
  };
  CHECK(count(header, ',') == count(row, ','));
  CHECK(row.find("inf") != std::string::npos);
}
