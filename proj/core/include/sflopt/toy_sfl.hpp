#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sflopt/scenario.hpp"

namespace sflopt {

// Low-rank adapter pair: delta = b * a with a (r x k) and b (d x r).
struct ToyAdapters {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd delta() const { return b * a; }
};

// Two frozen linear layers with one adapter pair per side, so a genuine
// client/server split exists: h = x (Wc + Bc Ac), y_hat = h (Ws + Bs As).
struct ToyModel {
  Eigen::MatrixXd w_client;  // d_in x d_hidden, frozen
  Eigen::MatrixXd w_server;  // d_hidden x d_out, frozen
  ToyAdapters client;
  ToyAdapters server;
  double lr_client = 0.05;
  double lr_server = 0.05;
  int rank = 1;
};

enum class ToyLoss {
  squared_error,  // mean 0.5 * |y_hat - y|^2
  logistic,       // mean log(1 + exp(-y * y_hat)), labels in {-1, +1}
};

struct ToyDataset {
  Eigen::MatrixXd x;  // samples x d_in
  Eigen::MatrixXd y;  // samples x d_out
};

struct ToyGradients {
  Eigen::MatrixXd a_client, b_client, a_server, b_server;
};

// Standard LoRA init: b = 0, a small random; delta starts at zero.
ToyModel make_toy_model(int d_in, int d_hidden, int d_out, int rank, double lr_client,
                        double lr_server, std::uint64_t seed);

double toy_loss(const ToyModel& m, const ToyDataset& data, ToyLoss loss = ToyLoss::squared_error);

// Mean-loss gradients of all four adapter factors at the current parameters.
ToyGradients toy_gradients(const ToyModel& m, const ToyDataset& data,
                           ToyLoss loss = ToyLoss::squared_error);

struct ToyTrainResult {
  ToyModel model;                    // final state, client adapters aggregated
  std::vector<double> step_losses;   // pooled loss before each step, plus final
  std::vector<double> round_losses;  // pooled loss after each aggregation
};

// Split training: per step every client runs FP on its shard, the server
// computes the pooled loss and updates its adapters, gradients flow back and
// the clients update theirs; after every local_steps steps the client
// adapters are replaced by their dataset-size-weighted mean. Deterministic
// (full-batch) in all inputs.
ToyTrainResult train_sfl_toy(const std::vector<ToyDataset>& client_data, const ToyModel& init,
                             int local_steps, int global_rounds,
                             ToyLoss loss = ToyLoss::squared_error);

// Plain full-batch gradient descent on the pooled data, same loss and rates.
ToyTrainResult train_centralized_toy(const ToyDataset& pooled, const ToyModel& init, int steps,
                                     ToyLoss loss = ToyLoss::squared_error);

// Synthetic regression task: frozen layers plus a rank-limited teacher
// perturbation generate the labels, split evenly across clients.
struct ToyTask {
  int d_in = 8;
  int d_hidden = 6;
  int d_out = 4;
  int teacher_rank = 2;
  int num_clients = 3;
  int samples_per_client = 32;
  double lr = 0.05;
  double noise = 0.0;
  ToyLoss loss = ToyLoss::squared_error;
};

std::vector<ToyDataset> make_toy_task_data(const ToyTask& task, std::uint64_t seed);
ToyModel make_toy_task_model(const ToyTask& task, int rank, std::uint64_t seed);

struct CalibrationOutcome {
  RankProfile profile;                 // rounds filled for candidates that converged
  std::map<int, std::string> skipped;  // rank -> reason (target unreachable)
};

// Runs the split trainer per candidate rank and records the first global
// round whose post-aggregation loss reaches the target.
CalibrationOutcome calibrate_rank_profile(const ToyTask& task, const std::vector<int>& candidates,
                                          double target_loss, int local_steps, int max_rounds,
                                          std::uint64_t seed);

// [lora] config block for the calibrated table.
std::string rank_profile_to_config(const RankProfile& profile);

}  // namespace sflopt
