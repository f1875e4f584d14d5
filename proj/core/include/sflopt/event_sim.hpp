#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sflopt/decision.hpp"
#include "sflopt/scenario.hpp"

namespace sflopt {

enum class Phase {
  client_fp,
  activation_upload,
  server_fp,
  server_bp,
  client_bp,
  fed_upload,
};

const char* phase_name(Phase p);

struct Event {
  double time_s = 0.0;
  Phase phase = Phase::client_fp;
  int actor = -1;  // client index, -1 for the server
  int step = 0;    // local step within the round, 0-based; fed uploads use I
  bool unreachable = false;  // completion never happens (infinite delay)
};

struct Timeline {
  std::vector<Event> events;  // one global round, ordered by (time, phase, actor)
  double round_s = 0.0;       // virtual span of one global round
  double total_s = 0.0;       // E * round_s
};

// Replays one global round of the training protocol in virtual time: per
// local step the clients run FP in parallel, upload activations, the server
// runs FP then BP over the pooled batch, gradients return instantly and the
// clients run BP; after I steps the adapter uploads to the fed server run in
// parallel. Totals must agree with the closed-form delay model. Throws
// std::invalid_argument when the decision fails check_constraints.
Timeline simulate_timeline(const NetworkScenario& s, const Decision& d);

// One event per line: time, phase, actor.
void write_trace(const Timeline& t, std::ostream& out);
std::string trace_to_string(const Timeline& t);

}  // namespace sflopt
