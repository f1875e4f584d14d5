#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sflopt {

// One sweep measurement. `strategy` is "proposed" or "baseline_a".."baseline_d".
struct SweepRow {
  std::string sweep_param;
  double value = 0.0;
  std::string strategy;
  std::uint64_t seed = 0;
  double total_s = 0.0;
  double t_local_s = 0.0;
  double t1_s = 0.0;
  double t2_s = 0.0;
  double t3_s = 0.0;
  int split = 0;
  int rank = 0;
  int rounds = 0;      // E(r) of the final decision
  int iterations = 0;  // optimizer passes (0 for the one-shot baselines)
};

// Header + one line per row; infinities render as the literal `inf`.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::string csv_to_string(const std::vector<SweepRow>& rows);

// Entry point behind the command-line binary. Subcommands: optimize,
// baseline, sweep, simulate, calibrate. Returns 0 on success, 1 on runtime
// failure, 2 on usage errors; diagnostics go to `err` as a single line.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sflopt
