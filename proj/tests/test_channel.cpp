#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sflopt/channel.hpp"
#include "sflopt/rng.hpp"

using namespace sflopt;

TEST_CASE("path loss matches the log-distance model") {
  CHECK(path_loss_db(1.0) == doctest::Approx(128.1).epsilon(1e-12));
  CHECK(path_loss_db(0.1) == doctest::Approx(90.5).epsilon(1e-12));
  CHECK(path_loss_db(0.01) == doctest::Approx(52.9).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss_db(0.0), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(-1.0), std::domain_error);
}

TEST_CASE("channel gain") {
  CHECK(channel_gain(1.0, 0.0) == doctest::Approx(std::pow(10.0, -12.81)).epsilon(1e-12));
  CHECK(channel_gain(0.1, 0.0) == doctest::Approx(std::pow(10.0, -9.05)).epsilon(1e-12));
  // +10 dB of shadowing scales the gain down by exactly one decade.
  CHECK(channel_gain(0.35, 10.0) * 10.0 ==
        doctest::Approx(channel_gain(0.35, 0.0)).epsilon(1e-12));
  // Strictly decreasing in distance at fixed shadow.
  double prev = channel_gain(0.001, 3.0);
  for (double d = 0.002; d < 0.2; d *= 1.7) {
    const double g = channel_gain(d, 3.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("uplink rate") {
  LinkAssignment link;
  link.subchannel = {0};
  link.bandwidth_hz = {25e3};
  link.antenna_product = 160.0;
  link.gain = 8.91e-10;
  link.noise_psd_w_hz = 3.98e-21;

  SUBCASE("unit SNR gives exactly B") {
    // p*G*gain/noise == 1  =>  log2(2) == 1.
    link.psd_w_hz = {link.noise_psd_w_hz / (link.antenna_product * link.gain)};
    CHECK(uplink_rate(link) == doctest::Approx(25e3).epsilon(1e-12));
  }
  SUBCASE("zero PSD means zero rate") {
    link.psd_w_hz = {0.0};
    CHECK(uplink_rate(link) == 0.0);
  }
  SUBCASE("hand-evaluated operating point") {
    link.psd_w_hz = {1e-6};
    CHECK(uplink_rate(link) == doctest::Approx(6.27e5).epsilon(1e-3));
  }
}

TEST_CASE("link power") {
  LinkAssignment link;
  link.subchannel = {0, 1};
  link.bandwidth_hz = {25e3, 25e3};
  link.psd_w_hz = {1e-6, 1e-6};
  CHECK(link_power(link) == doctest::Approx(0.05).epsilon(1e-12));

  LinkAssignment empty;
  CHECK(link_power(empty) == 0.0);

  link.psd_w_hz = {0.0, 1e-6};
  CHECK(link_power(link) == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("rate monotonicity and additivity") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    LinkAssignment link;
    const int channels = rng.uniform_int(1, 4);
    for (int i = 0; i < channels; ++i) {
      link.subchannel.push_back(i);
      link.bandwidth_hz.push_back(rng.uniform(1e3, 100e3));
      link.psd_w_hz.push_back(rng.uniform(1e-9, 1e-4));
    }
    link.antenna_product = rng.uniform(1.0, 200.0);
    link.gain = rng.uniform(1e-13, 1e-7);
    link.noise_psd_w_hz = 3.98e-21;

    const double base = uplink_rate(link);

    // Additive across subchannels.
    double sum = 0.0;
    for (int i = 0; i < channels; ++i) {
      LinkAssignment single = link;
      single.subchannel = {link.subchannel[i]};
      single.bandwidth_hz = {link.bandwidth_hz[i]};
      single.psd_w_hz = {link.psd_w_hz[i]};
      sum += uplink_rate(single);
    }
    CHECK(base == doctest::Approx(sum).epsilon(1e-12));

    // Strictly increasing in every PSD entry and every bandwidth.
    for (int i = 0; i < channels; ++i) {
      LinkAssignment bumped = link;
      bumped.psd_w_hz[i] *= 1.1;
      CHECK(uplink_rate(bumped) > base);
      bumped = link;
      bumped.bandwidth_hz[i] *= 1.1;
      CHECK(uplink_rate(bumped) > base);
    }

    // Linear in PSD for the power.
    LinkAssignment doubled = link;
    for (auto& p : doubled.psd_w_hz) p *= 2.0;
    CHECK(link_power(doubled) == doctest::Approx(2.0 * link_power(link)).epsilon(1e-12));
  }
}
