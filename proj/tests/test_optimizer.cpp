#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "sflopt/optimizer.hpp"

using namespace sflopt;
using testutil::tiny_scenario;

TEST_CASE("constraint checker") {
  const NetworkScenario s = default_scenario(1);
  const BcdResult r = optimize_bcd(s, 1e-3, 20);

  SUBCASE("optimizer output is clean") { CHECK(check_constraints(s, r.decision).empty()); }

  SUBCASE("an overdriven client trips exactly one violation") {
    Decision d = r.decision;
    // Scale one client's PSDs so its consumed power is 1.01x the cap.
    const int victim = 0;
    double power = 0.0;
    for (std::size_t i = 0; i < d.assignment.owner_main.size(); ++i) {
      if (d.assignment.owner_main[i] == victim) {
        power += d.psd_main_w_hz[i] * s.channels.subchannel_bw_main_hz[i];
      }
    }
    REQUIRE(power > 0.0);
    const double scale = 1.01 * s.clients[victim].max_power_w / power;
    for (std::size_t i = 0; i < d.assignment.owner_main.size(); ++i) {
      if (d.assignment.owner_main[i] == victim) d.psd_main_w_hz[i] *= scale;
    }
    // Keep the aggregate under its cap so only C4 trips.
    const auto violations = check_constraints(s, d);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].where == "C4");
  }

  SUBCASE("zero rank trips C7") {
    Decision d = r.decision;
    d.rank = 0;
    const auto violations = check_constraints(s, d);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].where == "C7");
  }

  SUBCASE("negative PSD trips C6") {
    Decision d = r.decision;
    d.psd_fed_w_hz[2] = -1e-9;
    bool c6 = false;
    for (const auto& v : check_constraints(s, d)) c6 = c6 || v.where == "C6";
    CHECK(c6);
  }

  SUBCASE("out-of-range split trips C3") {
    Decision d = r.decision;
    d.split.split_point = s.num_layers();
    bool c3 = false;
    for (const auto& v : check_constraints(s, d)) c3 = c3 || v.where == "C3";
    CHECK(c3);
  }
}

TEST_CASE("infinite tolerance stops after one pass") {
  const NetworkScenario s = default_scenario(2);
  const BcdResult r = optimize_bcd(s, std::numeric_limits<double>::infinity(), 50);
  CHECK(r.trace.iterations() == 1);
  CHECK(r.trace.termination == BcdTrace::Termination::tolerance);
  CHECK(check_constraints(s, r.decision).empty());
}

TEST_CASE("degenerate single-client single-channel scenario") {
  const NetworkScenario s = tiny_scenario(1, 3, 1, 1);
  const BcdResult r = optimize_bcd(s, 1e-6, 30);
  CHECK(check_constraints(s, r.decision).empty());
  // Only one possible assignment.
  CHECK(r.decision.assignment.owner_main == std::vector<int>{0});
  CHECK(r.decision.assignment.owner_fed == std::vector<int>{0});
  for (std::size_t i = 1; i < r.trace.objectives_s.size(); ++i) {
    CHECK(r.trace.objectives_s[i] <= r.trace.objectives_s[i - 1]);
  }
}

TEST_CASE("trace is non-increasing, terminates, and beats its initialization") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const NetworkScenario s = default_scenario(seed);
    const BcdResult r = optimize_bcd(s, 1e-3, 50);
    REQUIRE(!r.trace.objectives_s.empty());
    CHECK(r.trace.iterations() <= 50);
    for (std::size_t i = 1; i < r.trace.objectives_s.size(); ++i) {
      CHECK(r.trace.objectives_s[i] <= r.trace.objectives_s[i - 1]);
    }
    CHECK(r.objective_s <= r.trace.objectives_s.front());
    CHECK(check_constraints(s, r.decision).empty());
  }
}

TEST_CASE("random decisions respect the constraints") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NetworkScenario s = default_scenario(seed % 4);
    const Decision d = random_decision(s, seed);
    CHECK(check_constraints(s, d).empty());
  }
}

TEST_CASE("baselines emit valid deterministic decisions") {
  const NetworkScenario s = default_scenario(3);
  for (const BaselineKind kind :
       {BaselineKind::a, BaselineKind::b, BaselineKind::c, BaselineKind::d}) {
    const BaselineResult r1 = evaluate_baseline(s, kind, 7);
    const BaselineResult r2 = evaluate_baseline(s, kind, 7);
    CHECK(check_constraints(s, r1.decision).empty());
    CHECK(r1.objective_s == r2.objective_s);
    CHECK(std::isfinite(r1.objective_s));
  }
}

TEST_CASE("baseline d with one rank candidate reduces to the optimizer") {
  NetworkScenario s = default_scenario(5);
  s.ranks.candidates = {4};
  s.ranks.rounds = {{4, 60}};
  const BcdResult proposed = optimize_bcd(s, s.eps_s, s.max_iters);
  const BaselineResult d = evaluate_baseline(s, BaselineKind::d, 11);
  CHECK(d.objective_s == doctest::Approx(proposed.objective_s).epsilon(1e-12));
}

TEST_CASE("optimizer dominates the all-random baseline on most seeds") {
  int wins = 0;
  const int seeds = 10;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const NetworkScenario s = default_scenario(seed);
    const BcdResult proposed = optimize_bcd(s, 1e-3, 50);
    const BaselineResult random = evaluate_baseline(s, BaselineKind::a, seed);
    if (proposed.objective_s < random.objective_s) ++wins;
  }
  CHECK(wins >= seeds - 1);
}
