#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sflopt/decision.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

// Empty iff the decision satisfies the joint problem's constraints: binary
// exclusive subchannel ownership, a valid contiguous split, per-client and
// per-server power budgets (relative 1e-9 tolerance), nonnegative PSDs and a
// positive integer rank.
std::vector<Violation> check_constraints(const NetworkScenario& s, const Decision& d);

// Objective used throughout: total training delay of the decision.
double decision_objective(const NetworkScenario& s, const Decision& d);

struct BcdTrace {
  enum class Termination { tolerance, max_iterations };
  std::vector<double> objectives_s;  // [0] is the initialization
  std::vector<Decision> decisions;   // snapshot after each full pass
  Termination termination = Termination::max_iterations;
  std::vector<std::string> warnings;

  int iterations() const { return static_cast<int>(objectives_s.size()) - 1; }
};

struct BcdResult {
  Decision decision;
  double objective_s = 0.0;
  BcdTrace trace;
};

// Block coordinate descent over assignment -> power -> split -> rank,
// stopping when the objective improves by at most eps_s or after max_iters
// passes. Each block's proposal is kept only if it does not worsen the
// objective, so the trace is non-increasing by construction. Initialization:
// smallest rank candidate, middle split, uniform PSDs saturating the server
// budgets, greedy assignment.
BcdResult optimize_bcd(const NetworkScenario& s, double eps_s, int max_iters);
inline BcdResult optimize_bcd(const NetworkScenario& s) {
  return optimize_bcd(s, s.eps_s, s.max_iters);
}

enum class BaselineKind { a, b, c, d };

struct BaselineResult {
  Decision decision;
  double objective_s = 0.0;
  int iterations = 0;  // BCD passes run by the proposed blocks, 0 for a/b
};

// The four comparison strategies:
//   a: random assignment/PSD (rescaled into the budgets), random split/rank;
//   b: random assignment/PSD, searched split and rank;
//   c: random frozen split, all other blocks as proposed;
//   d: random frozen rank, all other blocks as proposed.
// Deterministic per (scenario, kind, seed); outputs satisfy the constraints.
BaselineResult evaluate_baseline(const NetworkScenario& s, BaselineKind kind, std::uint64_t seed);

// Random constraint-satisfying decision (the baseline-a generator), also used
// to drive the closed-form vs. event-timeline comparison.
Decision random_decision(const NetworkScenario& s, std::uint64_t seed);

}  // namespace sflopt
