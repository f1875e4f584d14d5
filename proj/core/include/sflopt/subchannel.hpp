#pragma once

#include <string>
#include <vector>

#include "sflopt/decision.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

struct AllocationResult {
  Assignment assignment;
  // Nonempty when a phase-2 pass deactivated every client while subchannels
  // remained; the leftovers were dumped on the last deactivated client so
  // that every subchannel still has exactly one owner.
  std::vector<std::string> warnings;
};

// Two-phase greedy allocation. Phase 1 hands the widest remaining main-server
// subchannel to the slowest unserved client (smallest f_k) and the widest
// remaining fed-server subchannel to the farthest unserved client (largest
// d_k^f). Phase 2 repeatedly gives the widest remaining subchannel to the
// client currently lagging most (largest T_k^F + T_k^s on the main link,
// largest T_k^f on the fed link), skipping clients whose grant would break a
// power budget at the provided PSDs. Ties break toward the lowest index.
//
// psd_*_prev are the per-subchannel PSDs of the previous optimizer iterate;
// delay bookkeeping and the budget checks are evaluated against them.
AllocationResult allocate_greedy(const NetworkScenario& s, SplitDecision split, int rank,
                                 const std::vector<double>& psd_main_prev,
                                 const std::vector<double>& psd_fed_prev);

}  // namespace sflopt
