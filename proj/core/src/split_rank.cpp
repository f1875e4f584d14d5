#include "sflopt/split_rank.hpp"

namespace sflopt {

SplitDecision search_split(const NetworkScenario& s, const Decision& d, const ClientRates& rates) {
  const int layers = s.num_layers();
  const int rounds = s.rounds_for(d.rank);
  SplitDecision best{1};
  double best_total = 0.0;
  for (int cut = 1; cut <= layers - 1; ++cut) {
    const WorkloadSummary w = workloads(s.model, SplitDecision{cut}, d.rank);
    const DelayBreakdown b = delays_from_rates(s, w, rates, rounds, s.ranks.local_steps);
    if (cut == 1 || b.total_s < best_total) {
      best = SplitDecision{cut};
      best_total = b.total_s;
    }
  }
  return best;
}

int search_rank(const NetworkScenario& s, const Decision& d, const ClientRates& rates) {
  int best = s.ranks.candidates.front();
  double best_total = 0.0;
  bool first = true;
  for (int rank : s.ranks.candidates) {
    const WorkloadSummary w = workloads(s.model, d.split, rank);
    const DelayBreakdown b = delays_from_rates(s, w, rates, s.rounds_for(rank), s.ranks.local_steps);
    if (first || b.total_s < best_total) {
      best = rank;
      best_total = b.total_s;
      first = false;
    }
  }
  return best;
}

}  // namespace sflopt
