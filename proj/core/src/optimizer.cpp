#include "sflopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sflopt/power.hpp"
#include "sflopt/rng.hpp"
#include "sflopt/split_rank.hpp"
#include "sflopt/subchannel.hpp"
#include "sflopt/units.hpp"

namespace sflopt {

namespace {

constexpr double budget_slack = 1e-9;

double total_bw(const std::vector<double>& bw) {
  return std::accumulate(bw.begin(), bw.end(), 0.0);
}

void check_side(const NetworkScenario& s, const std::vector<int>& owners,
                const std::vector<double>& psd, const std::vector<double>& bw,
                double server_cap_w, const char* side, std::vector<Violation>& out) {
  const int k_clients = s.num_clients();
  const std::string side_name(side);
  if (owners.size() != bw.size()) {
    out.push_back({"C2", side_name + ": expected " + std::to_string(bw.size()) +
                             " owned subchannels, got " + std::to_string(owners.size())});
    return;
  }
  if (psd.size() != bw.size()) {
    out.push_back({"C6", side_name + ": PSD vector size mismatch"});
    return;
  }
  for (std::size_t i = 0; i < owners.size(); ++i) {
    if (owners[i] < 0 || owners[i] >= k_clients) {
      out.push_back({"C1", side_name + ": subchannel " + std::to_string(i) +
                               " has no valid owner"});
      return;
    }
  }
  std::vector<double> client_power(k_clients, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < owners.size(); ++i) {
    if (psd[i] < 0.0) {
      out.push_back({"C6", side_name + ": negative PSD on subchannel " + std::to_string(i)});
    }
    const double p = psd[i] * bw[i];
    client_power[owners[i]] += p;
    total += p;
  }
  for (int k = 0; k < k_clients; ++k) {
    if (client_power[k] > s.clients[k].max_power_w * (1.0 + budget_slack)) {
      out.push_back({"C4", side_name + ": client " + std::to_string(k) + " power " +
                               std::to_string(client_power[k]) + " W exceeds cap " +
                               std::to_string(s.clients[k].max_power_w) + " W"});
    }
  }
  if (total > server_cap_w * (1.0 + budget_slack)) {
    out.push_back({"C5", side_name + ": aggregate power " + std::to_string(total) +
                             " W exceeds cap " + std::to_string(server_cap_w) + " W"});
  }
}

}  // namespace

std::vector<Violation> check_constraints(const NetworkScenario& s, const Decision& d) {
  std::vector<Violation> out;
  check_side(s, d.assignment.owner_main, d.psd_main_w_hz, s.channels.subchannel_bw_main_hz,
             s.server.power_cap_main_w, "main", out);
  check_side(s, d.assignment.owner_fed, d.psd_fed_w_hz, s.channels.subchannel_bw_fed_hz,
             s.server.power_cap_fed_w, "fed", out);
  const int layers = s.num_layers();
  if (d.split.split_point < 1 || d.split.split_point > layers - 1) {
    out.push_back({"C3", "split_point " + std::to_string(d.split.split_point) +
                             " outside [1, " + std::to_string(layers - 1) + "]"});
  }
  if (d.rank < 1) {
    out.push_back({"C7", "rank must be a positive integer, got " + std::to_string(d.rank)});
  }
  return out;
}

double decision_objective(const NetworkScenario& s, const Decision& d) {
  return phase_delays(s, d).total_s;
}

namespace {

struct BcdOptions {
  bool optimize_split = true;
  bool optimize_rank = true;
  int init_split = 1;
  int init_rank = 1;
};

BcdResult bcd_loop(const NetworkScenario& s, double eps_s, int max_iters,
                   const BcdOptions& opts) {
  if (!(eps_s > 0.0)) throw std::invalid_argument("optimize_bcd: eps_s must be > 0");
  if (max_iters < 1) throw std::invalid_argument("optimize_bcd: max_iters must be >= 1");

  BcdResult result;
  BcdTrace& trace = result.trace;

  Decision d;
  d.split = SplitDecision{opts.init_split};
  d.rank = opts.init_rank;
  // Uniform PSDs saturating the aggregate budgets.
  const double q_main = s.server.power_cap_main_w / total_bw(s.channels.subchannel_bw_main_hz);
  const double q_fed = s.server.power_cap_fed_w / total_bw(s.channels.subchannel_bw_fed_hz);
  d.psd_main_w_hz.assign(s.channels.subchannel_bw_main_hz.size(), q_main);
  d.psd_fed_w_hz.assign(s.channels.subchannel_bw_fed_hz.size(), q_fed);
  {
    AllocationResult alloc = allocate_greedy(s, d.split, d.rank, d.psd_main_w_hz, d.psd_fed_w_hz);
    d.assignment = std::move(alloc.assignment);
    for (auto& warning : alloc.warnings) trace.warnings.push_back(std::move(warning));
  }

  double objective = decision_objective(s, d);
  trace.objectives_s.push_back(objective);

  const auto consider = [&](Decision&& candidate) {
    const double cand_obj = decision_objective(s, candidate);
    if (cand_obj <= objective) {
      d = std::move(candidate);
      objective = cand_obj;
    }
  };

  trace.termination = BcdTrace::Termination::max_iterations;
  for (int iter = 1; iter <= max_iters; ++iter) {
    const double prev = objective;

    {  // P1: subchannel assignment
      AllocationResult alloc =
          allocate_greedy(s, d.split, d.rank, d.psd_main_w_hz, d.psd_fed_w_hz);
      for (auto& warning : alloc.warnings) trace.warnings.push_back(std::move(warning));
      Decision candidate = d;
      candidate.assignment = std::move(alloc.assignment);
      consider(std::move(candidate));
    }

    {  // P2: power control
      const WorkloadSummary w = workloads(s.model, d.split, d.rank);
      const PowerSolution sol =
          solve_power(s, d.assignment, w, s.rounds_for(d.rank), s.ranks.local_steps);
      Decision candidate = d;
      candidate.psd_main_w_hz = sol.psd_main_w_hz;
      candidate.psd_fed_w_hz = sol.psd_fed_w_hz;
      consider(std::move(candidate));
    }

    const ClientRates rates = achieved_rates(s, d.assignment, d.psd_main_w_hz, d.psd_fed_w_hz);
    if (opts.optimize_split) {  // P3
      Decision candidate = d;
      candidate.split = search_split(s, d, rates);
      consider(std::move(candidate));
    }
    if (opts.optimize_rank) {  // P4
      Decision candidate = d;
      candidate.rank = search_rank(s, d, rates);
      consider(std::move(candidate));
    }

    trace.objectives_s.push_back(objective);
    trace.decisions.push_back(d);
    if (std::abs(objective - prev) <= eps_s) {
      trace.termination = BcdTrace::Termination::tolerance;
      break;
    }
  }

  result.decision = d;
  result.objective_s = objective;
  return result;
}

int middle_split(const NetworkScenario& s) { return (s.num_layers() + 1) / 2; }

}  // namespace

BcdResult optimize_bcd(const NetworkScenario& s, double eps_s, int max_iters) {
  BcdOptions opts;
  opts.init_split = middle_split(s);
  opts.init_rank = s.ranks.candidates.front();
  return bcd_loop(s, eps_s, max_iters, opts);
}

Decision random_decision(const NetworkScenario& s, std::uint64_t seed) {
  Rng rng(seed);
  const int k_clients = s.num_clients();

  const auto random_side = [&](std::size_t channels) {
    std::vector<int> owner(channels, 0);
    std::vector<int> order(channels);
    for (std::size_t i = 0; i < channels; ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = channels; i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }
    std::vector<int> client_order(k_clients);
    for (int k = 0; k < k_clients; ++k) client_order[k] = k;
    for (int k = k_clients; k > 1; --k) {
      std::swap(client_order[k - 1], client_order[rng.uniform_int(0, k - 1)]);
    }
    // One guaranteed subchannel per client, the rest uniform.
    for (std::size_t i = 0; i < channels; ++i) {
      owner[order[i]] = i < static_cast<std::size_t>(k_clients)
                            ? client_order[i]
                            : rng.uniform_int(0, k_clients - 1);
    }
    return owner;
  };
  Decision d;
  d.assignment.owner_main = random_side(s.channels.subchannel_bw_main_hz.size());
  d.assignment.owner_fed = random_side(s.channels.subchannel_bw_fed_hz.size());

  const auto random_psd = [&](const std::vector<int>& owners, const std::vector<double>& bw,
                              double server_cap) {
    const double q_sat = server_cap / total_bw(bw);
    std::vector<double> psd(bw.size());
    for (auto& p : psd) p = rng.uniform(0.0, q_sat);
    // Rescale into the per-client caps, then into the aggregate cap.
    std::vector<double> client_power(k_clients, 0.0);
    for (std::size_t i = 0; i < psd.size(); ++i) client_power[owners[i]] += psd[i] * bw[i];
    for (std::size_t i = 0; i < psd.size(); ++i) {
      const double p = client_power[owners[i]];
      const double cap = s.clients[owners[i]].max_power_w;
      if (p > cap) psd[i] *= cap / p;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < psd.size(); ++i) total += psd[i] * bw[i];
    if (total > server_cap) {
      const double g = server_cap / total;
      for (auto& p : psd) p *= g;
    }
    return psd;
  };
  d.psd_main_w_hz = random_psd(d.assignment.owner_main, s.channels.subchannel_bw_main_hz,
                               s.server.power_cap_main_w);
  d.psd_fed_w_hz = random_psd(d.assignment.owner_fed, s.channels.subchannel_bw_fed_hz,
                              s.server.power_cap_fed_w);

  d.split = SplitDecision{rng.uniform_int(1, s.num_layers() - 1)};
  const int pick = rng.uniform_int(0, static_cast<int>(s.ranks.candidates.size()) - 1);
  d.rank = s.ranks.candidates[static_cast<std::size_t>(pick)];
  return d;
}

BaselineResult evaluate_baseline(const NetworkScenario& s, BaselineKind kind, std::uint64_t seed) {
  const std::uint64_t stream = derive_seed(seed, static_cast<std::uint64_t>(kind) + 0xb5u);
  BaselineResult out;
  switch (kind) {
    case BaselineKind::a: {
      out.decision = random_decision(s, stream);
      out.objective_s = decision_objective(s, out.decision);
      return out;
    }
    case BaselineKind::b: {
      Decision d = random_decision(s, stream);
      const ClientRates rates = achieved_rates(s, d.assignment, d.psd_main_w_hz, d.psd_fed_w_hz);
      d.split = search_split(s, d, rates);
      d.rank = search_rank(s, d, rates);
      out.decision = d;
      out.objective_s = decision_objective(s, d);
      return out;
    }
    case BaselineKind::c: {
      Rng rng(stream);
      BcdOptions opts;
      opts.optimize_split = false;
      opts.init_split = rng.uniform_int(1, s.num_layers() - 1);
      opts.init_rank = s.ranks.candidates.front();
      BcdResult r = bcd_loop(s, s.eps_s, s.max_iters, opts);
      out.decision = r.decision;
      out.objective_s = r.objective_s;
      out.iterations = r.trace.iterations();
      return out;
    }
    case BaselineKind::d: {
      Rng rng(stream);
      BcdOptions opts;
      opts.optimize_rank = false;
      opts.init_split = middle_split(s);
      const int pick = rng.uniform_int(0, static_cast<int>(s.ranks.candidates.size()) - 1);
      opts.init_rank = s.ranks.candidates[static_cast<std::size_t>(pick)];
      BcdResult r = bcd_loop(s, s.eps_s, s.max_iters, opts);
      out.decision = r.decision;
      out.objective_s = r.objective_s;
      out.iterations = r.trace.iterations();
      return out;
    }
  }
  throw std::invalid_argument("evaluate_baseline: unknown baseline kind");
}

}  // namespace sflopt
