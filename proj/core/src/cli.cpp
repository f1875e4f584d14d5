#include "sflopt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sflopt/decision.hpp"
#include "sflopt/delay.hpp"
#include "sflopt/event_sim.hpp"
#include "sflopt/optimizer.hpp"
#include "sflopt/scenario.hpp"
#include "sflopt/toy_sfl.hpp"

namespace sflopt {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  const auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::stod(cur));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  flush();
  if (out.empty()) throw std::runtime_error("--values: empty list");
  return out;
}

// Index-parallel loop with deterministic output placement.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  workers = std::min(workers == 0 ? 1u : workers, 8u);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

NetworkScenario load_or_default(const std::string& config_path) {
  if (config_path.empty()) return default_scenario(0);
  return load_scenario(config_path);
}

NetworkScenario scenario_for_run(const std::string& config_path, bool seed_given,
                                 std::uint64_t seed) {
  NetworkScenario s = load_or_default(config_path);
  if (seed_given) s = sample_scenario(s, seed);
  return s;
}

NetworkScenario apply_sweep_value(NetworkScenario s, const std::string& param, double value) {
  if (param == "bandwidth") {
    // Rescale both links so each total equals the swept value.
    const auto rescale = [value](std::vector<double>& bw) {
      const double total = std::accumulate(bw.begin(), bw.end(), 0.0);
      for (auto& b : bw) b *= value / total;
    };
    rescale(s.channels.subchannel_bw_main_hz);
    rescale(s.channels.subchannel_bw_fed_hz);
  } else if (param == "kappa_inv") {
    // Swept value is client FLOPs per cycle.
    for (auto& c : s.clients) c.cycles_per_flop = 1.0 / value;
  } else if (param == "fs") {
    s.server.compute_rate_hz = value;
  } else if (param == "pmax") {
    for (auto& c : s.clients) c.max_power_w = value;
  } else {
    throw std::runtime_error("unknown sweep parameter '" + param + "'");
  }
  return s;
}

const char* termination_name(BcdTrace::Termination t) {
  return t == BcdTrace::Termination::tolerance ? "tolerance" : "max-iterations";
}

void print_decision(std::ostream& out, const NetworkScenario& s, const Decision& d) {
  const DelayBreakdown b = phase_delays(s, d);
  out << "split = " << d.split.split_point << ", rank = " << d.rank
      << ", E = " << s.rounds_for(d.rank) << ", I = " << s.ranks.local_steps << "\n";
  out << "total_s = " << fmt(b.total_s) << ", t_local_s = " << fmt(b.t_local_s)
      << ", T1_s = " << fmt(b.t1_s()) << ", T2_s = " << fmt(b.t2_s())
      << ", T3_s = " << fmt(b.t3_s()) << "\n";
  for (int k = 0; k < s.num_clients(); ++k) {
    out << "client " << k << ": main_channels = [";
    const auto main_ch = d.assignment.channels_main(k);
    for (std::size_t i = 0; i < main_ch.size(); ++i) out << (i ? "," : "") << main_ch[i];
    out << "], fed_channels = [";
    const auto fed_ch = d.assignment.channels_fed(k);
    for (std::size_t i = 0; i < fed_ch.size(); ++i) out << (i ? "," : "") << fed_ch[i];
    out << "]\n";
  }
}

SweepRow row_from_decision(const NetworkScenario& s, const Decision& d, const std::string& param,
                           double value, const std::string& strategy, std::uint64_t seed,
                           int iterations) {
  const DelayBreakdown b = phase_delays(s, d);
  SweepRow row;
  row.sweep_param = param;
  row.value = value;
  row.strategy = strategy;
  row.seed = seed;
  row.total_s = b.total_s;
  row.t_local_s = b.t_local_s;
  row.t1_s = b.t1_s();
  row.t2_s = b.t2_s();
  row.t3_s = b.t3_s();
  row.split = d.split.split_point;
  row.rank = d.rank;
  row.rounds = b.rounds;
  row.iterations = iterations;
  return row;
}

int cmd_optimize(const std::string& config, bool seed_given, std::uint64_t seed, double eps,
                 bool eps_given, int max_iter, bool max_iter_given, const std::string& out_path,
                 std::ostream& out) {
  NetworkScenario s = scenario_for_run(config, seed_given, seed);
  const double eps_s = eps_given ? eps : s.eps_s;
  const int iters = max_iter_given ? max_iter : s.max_iters;
  const BcdResult r = optimize_bcd(s, eps_s, iters);
  out << "objective_s = " << fmt(r.objective_s) << "\n";
  out << "iterations = " << r.trace.iterations() << ", termination = "
      << termination_name(r.trace.termination) << "\n";
  out << "trace =";
  for (double v : r.trace.objectives_s) out << " " << fmt(v);
  out << "\n";
  for (const auto& w : r.trace.warnings) out << "warning: " << w << "\n";
  print_decision(out, s, r.decision);
  if (!out_path.empty()) {
    save_decision(r.decision, out_path);
    out << "decision written to " << out_path << "\n";
  }
  return 0;
}

int cmd_baseline(const std::string& config, bool seed_given, std::uint64_t seed,
                 const std::string& which, const std::string& out_path, std::ostream& out) {
  NetworkScenario s = scenario_for_run(config, seed_given, seed);
  const BaselineKind kind = which == "a"   ? BaselineKind::a
                            : which == "b" ? BaselineKind::b
                            : which == "c" ? BaselineKind::c
                                           : BaselineKind::d;
  const BaselineResult r = evaluate_baseline(s, kind, seed);
  out << "baseline = " << which << "\n";
  out << "objective_s = " << fmt(r.objective_s) << "\n";
  out << "iterations = " << r.iterations << "\n";
  print_decision(out, s, r.decision);
  if (!out_path.empty()) save_decision(r.decision, out_path);
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& values_text,
              int seeds, double eps, bool eps_given, int max_iter, bool max_iter_given,
              const std::string& out_path, std::ostream& out) {
  if (seeds < 1) throw std::runtime_error("--seeds must be >= 1");
  const std::vector<double> values = parse_value_list(values_text);
  const NetworkScenario base = load_or_default(config);
  const double eps_s = eps_given ? eps : base.eps_s;
  const int iters = max_iter_given ? max_iter : base.max_iters;

  const std::vector<std::string> strategies = {"proposed", "baseline_a", "baseline_b",
                                               "baseline_c", "baseline_d"};
  struct Task {
    std::size_t value_idx;
    std::size_t strategy_idx;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t si = 0; si < strategies.size(); ++si) {
      for (int seed = 0; seed < seeds; ++seed) {
        tasks.push_back(Task{vi, si, static_cast<std::uint64_t>(seed)});
      }
    }
  }
  std::vector<SweepRow> rows(tasks.size());
  parallel_for_index(tasks.size(), [&](std::size_t i) {
    const Task& t = tasks[i];
    const NetworkScenario swept = apply_sweep_value(base, param, values[t.value_idx]);
    const NetworkScenario s = sample_scenario(swept, t.seed);
    const std::string& strategy = strategies[t.strategy_idx];
    if (strategy == "proposed") {
      const BcdResult r = optimize_bcd(s, eps_s, iters);
      rows[i] = row_from_decision(s, r.decision, param, values[t.value_idx], strategy, t.seed,
                                  r.trace.iterations());
    } else {
      const BaselineKind kind = static_cast<BaselineKind>(t.strategy_idx - 1);
      const BaselineResult r = evaluate_baseline(s, kind, t.seed);
      rows[i] =
          row_from_decision(s, r.decision, param, values[t.value_idx], strategy, t.seed,
                            r.iterations);
    }
  });
  // Tasks were generated sorted by (value, strategy, seed) already.
  const std::string path = out_path.empty() ? "sweep.csv" : out_path;
  emit_csv(rows, path);
  out << "sweep rows = " << rows.size() << ", csv = " << path << "\n";
  return 0;
}

int cmd_simulate(const std::string& config, bool seed_given, std::uint64_t seed,
                 const std::string& decision_path, const std::string& out_path,
                 std::ostream& out) {
  NetworkScenario s = scenario_for_run(config, seed_given, seed);
  const Decision d = load_decision(decision_path);
  const Timeline t = simulate_timeline(s, d);
  if (out_path.empty()) {
    write_trace(t, out);
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
    write_trace(t, file);
    out << "trace written to " << out_path << "\n";
  }
  out << "round_s = " << fmt(t.round_s) << ", total_s = " << fmt(t.total_s) << "\n";
  return 0;
}

int cmd_calibrate(std::uint64_t seed, double target, int local_steps, int max_rounds,
                  const std::string& out_path, std::ostream& out) {
  ToyTask task;
  const std::vector<int> candidates = {1, 2, 4, 6, 8};
  const CalibrationOutcome outcome =
      calibrate_rank_profile(task, candidates, target, local_steps, max_rounds, seed);
  for (int rank : candidates) {
    const auto it = outcome.profile.rounds.find(rank);
    if (it != outcome.profile.rounds.end()) {
      out << "rank " << rank << ": E = " << it->second << "\n";
    } else {
      out << "rank " << rank << ": skipped (" << outcome.skipped.at(rank) << ")\n";
    }
  }
  const std::string block = rank_profile_to_config(outcome.profile);
  if (out_path.empty()) {
    out << block;
  } else {
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
    file << block;
    out << "profile written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

std::string csv_to_string(const std::vector<SweepRow>& rows) {
  std::string text =
      "sweep_param,value,strategy,seed,total_s,t_local_s,T1_s,T2_s,T3_s,split,rank,E,iterations\n";
  for (const auto& r : rows) {
    text += r.sweep_param + "," + fmt(r.value) + "," + r.strategy + "," + std::to_string(r.seed) +
            "," + fmt(r.total_s) + "," + fmt(r.t_local_s) + "," + fmt(r.t1_s) + "," +
            fmt(r.t2_s) + "," + fmt(r.t3_s) + "," + std::to_string(r.split) + "," +
            std::to_string(r.rank) + "," + std::to_string(r.rounds) + "," +
            std::to_string(r.iterations) + "\n";
  }
  return text;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot write '" + path + "'");
  out << csv_to_string(rows);
  if (!out) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Training-latency optimizer for split federated fine-tuning over wireless links"};
  app.require_subcommand(1);

  std::string config, out_path, which, param, values_text, decision_path;
  std::uint64_t seed = 0;
  double eps = 1e-3;
  int max_iter = 50;
  int seeds = 1;
  double target = 0.02;
  int local_steps = 5;
  int max_rounds = 400;

  auto* optimize = app.add_subcommand("optimize", "Run the block-coordinate optimizer");
  optimize->add_option("--config", config, "Scenario config file");
  auto* opt_seed = optimize->add_option("--seed", seed, "Scenario sampling seed");
  auto* opt_eps = optimize->add_option("--eps", eps, "Convergence tolerance in seconds");
  auto* opt_iter = optimize->add_option("--max-iter", max_iter, "Maximum optimizer passes");
  optimize->add_option("--out", out_path, "Write the final decision JSON here");

  auto* baseline = app.add_subcommand("baseline", "Evaluate a comparison strategy");
  baseline->add_option("--which", which, "Strategy: a, b, c or d")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "d"}));
  baseline->add_option("--config", config, "Scenario config file");
  auto* base_seed = baseline->add_option("--seed", seed, "Scenario and strategy seed");
  baseline->add_option("--out", out_path, "Write the decision JSON here");

  auto* sweep = app.add_subcommand("sweep", "Re-optimize all strategies across a parameter sweep");
  sweep->add_option("--param", param, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"bandwidth", "kappa_inv", "fs", "pmax"}));
  sweep->add_option("--values", values_text, "Comma-separated parameter values")->required();
  sweep->add_option("--seeds", seeds, "Number of scenario seeds per value");
  sweep->add_option("--config", config, "Scenario config file");
  auto* sweep_eps = sweep->add_option("--eps", eps, "Convergence tolerance in seconds");
  auto* sweep_iter = sweep->add_option("--max-iter", max_iter, "Maximum optimizer passes");
  sweep->add_option("--out", out_path, "CSV output path (default sweep.csv)");

  auto* simulate = app.add_subcommand("simulate", "Replay a decision on the event timeline");
  simulate->add_option("--config", config, "Scenario config file");
  auto* sim_seed = simulate->add_option("--seed", seed, "Scenario sampling seed");
  simulate->add_option("--decision", decision_path, "Decision JSON file")->required();
  simulate->add_option("--out", out_path, "Trace output path (default stdout)");

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate the rank/rounds table on the toy task");
  auto* cal_seed = calibrate->add_option("--seed", seed, "Toy task seed");
  calibrate->add_option("--target", target, "Target loss");
  calibrate->add_option("--local-steps", local_steps, "Local steps per global round");
  calibrate->add_option("--max-rounds", max_rounds, "Round cap per candidate");
  calibrate->add_option("--out", out_path, "Write the [lora] block here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(optimize)) {
      return cmd_optimize(config, opt_seed->count() > 0, seed, eps, opt_eps->count() > 0,
                          max_iter, opt_iter->count() > 0, out_path, out);
    }
    if (app.got_subcommand(baseline)) {
      return cmd_baseline(config, base_seed->count() > 0, seed, which, out_path, out);
    }
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(config, param, values_text, seeds, eps, sweep_eps->count() > 0, max_iter,
                       sweep_iter->count() > 0, out_path, out);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(config, sim_seed->count() > 0, seed, decision_path, out_path, out);
    }
    if (app.got_subcommand(calibrate)) {
      return cmd_calibrate(cal_seed->count() > 0 ? seed : 1, target, local_steps, max_rounds,
                           out_path, out);
    }
    err << "usage error: missing subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sflopt
