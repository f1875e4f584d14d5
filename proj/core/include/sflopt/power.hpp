#pragma once

#include <stdexcept>
#include <vector>

#include "sflopt/decision.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Auxiliary rate variables: one rate per assigned subchannel, plus the
// epigraph bounds on the three straggler terms.
struct RateVars {
  std::vector<std::vector<double>> theta_main_bps;  // [client][owned-channel]
  std::vector<std::vector<double>> theta_fed_bps;
  double t1_s = 0.0;  // >= max_k (T_k^F + T_k^s)
  double t2_s = 0.0;  // >= max_k T_k^B (rate-free, always tight)
  double t3_s = 0.0;  // >= max_k T_k^f
};

struct PowerSolution {
  RateVars rates;
  std::vector<double> psd_main_w_hz;  // per subchannel, recovered from theta
  std::vector<double> psd_fed_w_hz;
  double objective_s = 0.0;  // E * (I*(T1 + T_s^F + T_s^B + T2) + T3)
};

// Exact inverse of the per-subchannel rate formula: the PSD driving rate
// theta over bandwidth B. Consumed power on the subchannel is B times this.
double psd_for_rate(double theta_bps, double bandwidth_hz, double antenna_product, double gain,
                    double noise_psd_w_hz);

// Minimizes E*(I*(T1 + T_s^F + T_s^B + T2) + T3) over per-subchannel PSDs for
// a fixed assignment, split and rank. The main and fed problems share no
// variables and are solved independently, each by bisection on its epigraph
// bound: for a candidate bound the per-client required rate is fixed, the
// cheapest split of that rate across a client's equal-gain subchannels puts
// rates proportional to bandwidth (equal PSD), and feasibility is a pair of
// budget checks. The returned objective is within tol_s*(1+objective) of the
// optimum. Throws InfeasibleError when a required transfer is impossible even
// at full power.
PowerSolution solve_power(const NetworkScenario& s, const Assignment& a,
                          const WorkloadSummary& w, int rounds, int local_steps,
                          double tol_s = 1e-6);

// Brute-force reference: full grid over each assigned subchannel's PSD in
// [0, budget-implied max] with grid_points points, keeping the best feasible
// objective (+inf when nothing is feasible). Guarded to tiny instances.
double oracle_grid_solve(const NetworkScenario& s, const Assignment& a, const WorkloadSummary& w,
                         int rounds, int local_steps, int grid_points);

}  // namespace sflopt
