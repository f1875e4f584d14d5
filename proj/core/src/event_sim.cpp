#include "sflopt/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sflopt/channel.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/optimizer.hpp"
#include "sflopt/units.hpp"

namespace sflopt {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::client_fp: return "client_fp";
    case Phase::activation_upload: return "activation_upload";
    case Phase::server_fp: return "server_fp";
    case Phase::server_bp: return "server_bp";
    case Phase::client_bp: return "client_bp";
    case Phase::fed_upload: return "fed_upload";
  }
  return "?";
}

namespace {

double transfer_delay(double bits, double rate_bps) {
  if (bits <= 0.0) return 0.0;
  if (rate_bps <= 0.0) return infinite_delay;
  return bits / rate_bps;
}

}  // namespace

Timeline simulate_timeline(const NetworkScenario& s, const Decision& d) {
  const auto violations = check_constraints(s, d);
  if (!violations.empty()) {
    std::string msg = "simulate_timeline: decision violates constraints:";
    for (const auto& v : violations) msg += " [" + v.where + "] " + v.message + ";";
    throw std::invalid_argument(msg);
  }

  const int k_clients = s.num_clients();
  const double b = static_cast<double>(s.model.batch_size);
  const WorkloadSummary w = workloads(s.model, d.split, d.rank);
  const ClientRates rates = achieved_rates(s, d.assignment, d.psd_main_w_hz, d.psd_fed_w_hz);

  // Phase durations straight from the per-phase cost formulas; the timeline
  // composition below is what this simulator independently exercises.
  std::vector<double> fp(k_clients), up(k_clients), bp(k_clients), fed(k_clients);
  for (int k = 0; k < k_clients; ++k) {
    const ClientProfile& c = s.clients[k];
    fp[k] = b * c.cycles_per_flop * (w.client_fp + w.client_fp_lora) / c.compute_rate_hz;
    bp[k] = b * c.cycles_per_flop * (w.client_bp + w.client_bp_lora) / c.compute_rate_hz;
    up[k] = transfer_delay(b * w.activation_bits, rates.main_bps[k]);
    fed[k] = transfer_delay(w.client_lora_bits, rates.fed_bps[k]);
  }
  const double kb = static_cast<double>(k_clients) * b * s.server.cycles_per_flop;
  const double server_fp = kb * (w.server_fp + w.server_fp_lora) / s.server.compute_rate_hz;
  const double server_bp = kb * (w.server_bp + w.server_bp_lora) / s.server.compute_rate_hz;

  const int local_steps = s.ranks.local_steps;
  const int rounds = s.rounds_for(d.rank);

  Timeline timeline;
  const auto emit = [&timeline](double t, Phase phase, int actor, int step) {
    timeline.events.push_back(Event{t, phase, actor, step, std::isinf(t)});
  };

  double now = 0.0;
  for (int step = 0; step < local_steps; ++step) {
    double uploads_done = now;
    for (int k = 0; k < k_clients; ++k) {
      const double fp_done = now + fp[k];
      emit(fp_done, Phase::client_fp, k, step);
      const double up_done = fp_done + up[k];
      emit(up_done, Phase::activation_upload, k, step);
      uploads_done = std::max(uploads_done, up_done);
    }
    // The server batches all clients' activations: FP waits on the last
    // upload (barrier), BP follows, then gradients return instantly.
    const double server_fp_done = uploads_done + server_fp;
    emit(server_fp_done, Phase::server_fp, -1, step);
    const double server_bp_done = server_fp_done + server_bp;
    emit(server_bp_done, Phase::server_bp, -1, step);
    double step_done = server_bp_done;
    for (int k = 0; k < k_clients; ++k) {
      const double bp_done = server_bp_done + bp[k];
      emit(bp_done, Phase::client_bp, k, step);
      step_done = std::max(step_done, bp_done);
    }
    now = step_done;  // next step starts when every client finished BP
  }
  double round_done = now;
  for (int k = 0; k < k_clients; ++k) {
    const double fed_done = now + fed[k];
    emit(fed_done, Phase::fed_upload, k, local_steps);
    round_done = std::max(round_done, fed_done);
  }

  std::stable_sort(timeline.events.begin(), timeline.events.end(),
                   [](const Event& a, const Event& b) {
                     if (a.time_s != b.time_s) return a.time_s < b.time_s;
                     if (a.phase != b.phase) return a.phase < b.phase;
                     return a.actor < b.actor;
                   });
  timeline.round_s = round_done;
  timeline.total_s = static_cast<double>(rounds) * round_done;
  return timeline;
}

void write_trace(const Timeline& t, std::ostream& out) {
  for (const auto& e : t.events) {
    char time_buf[40];
    if (std::isinf(e.time_s)) {
      std::snprintf(time_buf, sizeof(time_buf), "inf");
    } else {
      std::snprintf(time_buf, sizeof(time_buf), "%.9e", e.time_s);
    }
    out << time_buf << "\t" << (e.unreachable ? "unreachable_" : "") << phase_name(e.phase)
        << "\t" << (e.actor < 0 ? std::string("server") : "client_" + std::to_string(e.actor))
        << "\n";
  }
  out << "# round_s=" << t.round_s << " total_s=" << t.total_s << "\n";
}

std::string trace_to_string(const Timeline& t) {
  std::ostringstream out;
  write_trace(t, out);
  return out.str();
}

}  // namespace sflopt
