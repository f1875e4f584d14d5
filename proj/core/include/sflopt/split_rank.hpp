#pragma once

#include "sflopt/decision.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

// Exhaustive search over the cut point with everything else (including the
// achieved rates) held fixed. Ties break toward the smaller split.
SplitDecision search_split(const NetworkScenario& s, const Decision& d, const ClientRates& rates);

// Exhaustive search over the rank candidates, accounting for E(r) and the
// rank-dependent workload/upload terms at fixed rates. Ties break toward the
// smaller rank.
int search_rank(const NetworkScenario& s, const Decision& d, const ClientRates& rates);

}  // namespace sflopt
