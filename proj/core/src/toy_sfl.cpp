#include "sflopt/toy_sfl.hpp"

#include <cmath>
#include <stdexcept>

#include "sflopt/rng.hpp"

namespace sflopt {

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, scale);
  }
  return m;
}

double softplus(double x) {
  // log(1 + exp(x)) without overflow.
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct Forward {
  Eigen::MatrixXd hidden;  // activations at the split
  Eigen::MatrixXd y_hat;
};

Forward forward_pass(const ToyModel& m, const Eigen::MatrixXd& x) {
  Forward f;
  f.hidden = x * (m.w_client + m.client.delta());
  f.y_hat = f.hidden * (m.w_server + m.server.delta());
  return f;
}

double loss_value(const Eigen::MatrixXd& y_hat, const Eigen::MatrixXd& y, ToyLoss loss) {
  const double n = static_cast<double>(y_hat.rows());
  if (loss == ToyLoss::squared_error) {
    return 0.5 * (y_hat - y).squaredNorm() / n;
  }
  double total = 0.0;
  for (int i = 0; i < y_hat.rows(); ++i) {
    for (int j = 0; j < y_hat.cols(); ++j) total += softplus(-y(i, j) * y_hat(i, j));
  }
  return total / n;
}

// dLoss/dy_hat for the mean loss over the batch.
Eigen::MatrixXd loss_grad(const Eigen::MatrixXd& y_hat, const Eigen::MatrixXd& y, ToyLoss loss) {
  const double n = static_cast<double>(y_hat.rows());
  if (loss == ToyLoss::squared_error) return (y_hat - y) / n;
  Eigen::MatrixXd g(y_hat.rows(), y_hat.cols());
  for (int i = 0; i < y_hat.rows(); ++i) {
    for (int j = 0; j < y_hat.cols(); ++j) {
      const double t = y(i, j) * y_hat(i, j);
      g(i, j) = -y(i, j) / (1.0 + std::exp(t)) / n;  // -y * sigmoid(-t)
    }
  }
  return g;
}

void check_divergence(double loss) {
  if (!(loss < 1e12)) {
    throw std::runtime_error("toy trainer diverged (loss " + std::to_string(loss) +
                             "); reduce the learning rate");
  }
}

}  // namespace

ToyModel make_toy_model(int d_in, int d_hidden, int d_out, int rank, double lr_client,
                        double lr_server, std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("make_toy_model: rank must be >= 1");
  Rng rng(seed);
  ToyModel m;
  m.rank = rank;
  m.lr_client = lr_client;
  m.lr_server = lr_server;
  m.w_client = gaussian(d_in, d_hidden, 1.0 / std::sqrt(d_in), rng);
  m.w_server = gaussian(d_hidden, d_out, 1.0 / std::sqrt(d_hidden), rng);
  m.client.a = gaussian(rank, d_hidden, 0.1, rng);
  m.client.b = Eigen::MatrixXd::Zero(d_in, rank);
  m.server.a = gaussian(rank, d_out, 0.1, rng);
  m.server.b = Eigen::MatrixXd::Zero(d_hidden, rank);
  return m;
}

double toy_loss(const ToyModel& m, const ToyDataset& data, ToyLoss loss) {
  return loss_value(forward_pass(m, data.x).y_hat, data.y, loss);
}

ToyGradients toy_gradients(const ToyModel& m, const ToyDataset& data, ToyLoss loss) {
  const Forward f = forward_pass(m, data.x);
  const Eigen::MatrixXd d_yhat = loss_grad(f.y_hat, data.y, loss);
  const Eigen::MatrixXd m_server = m.w_server + m.server.delta();
  ToyGradients g;
  const Eigen::MatrixXd d_mserver = f.hidden.transpose() * d_yhat;
  g.a_server = m.server.b.transpose() * d_mserver;
  g.b_server = d_mserver * m.server.a.transpose();
  const Eigen::MatrixXd d_hidden = d_yhat * m_server.transpose();
  const Eigen::MatrixXd d_mclient = data.x.transpose() * d_hidden;
  g.a_client = m.client.b.transpose() * d_mclient;
  g.b_client = d_mclient * m.client.a.transpose();
  return g;
}

ToyTrainResult train_sfl_toy(const std::vector<ToyDataset>& client_data, const ToyModel& init,
                             int local_steps, int global_rounds, ToyLoss loss) {
  if (client_data.empty()) throw std::invalid_argument("train_sfl_toy: no client data");
  const int k_clients = static_cast<int>(client_data.size());
  double total_samples = 0.0;
  for (const auto& d : client_data) {
    if (d.x.rows() != d.y.rows()) throw std::invalid_argument("train_sfl_toy: x/y row mismatch");
    if (d.x.cols() != init.w_client.rows() || d.y.cols() != init.w_server.cols()) {
      throw std::invalid_argument("train_sfl_toy: dataset dimensions do not match the model");
    }
    total_samples += static_cast<double>(d.x.rows());
  }

  ToyModel model = init;
  std::vector<ToyAdapters> client_adapters(k_clients, init.client);
  ToyTrainResult out;

  const auto pooled_loss = [&]() {
    double total = 0.0;
    for (int k = 0; k < k_clients; ++k) {
      ToyModel view = model;
      view.client = client_adapters[k];
      const Forward f = forward_pass(view, client_data[k].x);
      total += loss_value(f.y_hat, client_data[k].y, loss) *
               static_cast<double>(client_data[k].x.rows());
    }
    return total / total_samples;
  };

  for (int round = 0; round < global_rounds; ++round) {
    for (int step = 0; step < local_steps; ++step) {
      out.step_losses.push_back(pooled_loss());
      check_divergence(out.step_losses.back());

      // Client FP on each shard, then one pooled server pass. The gradient of
      // the pooled mean loss is accumulated per client before anyone updates,
      // matching simultaneous gradient descent on all adapters.
      const Eigen::MatrixXd m_server = model.w_server + model.server.delta();
      Eigen::MatrixXd d_mserver =
          Eigen::MatrixXd::Zero(model.w_server.rows(), model.w_server.cols());
      std::vector<ToyGradients> grads(k_clients);
      for (int k = 0; k < k_clients; ++k) {
        const Eigen::MatrixXd m_client = model.w_client + client_adapters[k].delta();
        const Eigen::MatrixXd hidden = client_data[k].x * m_client;
        const Eigen::MatrixXd y_hat = hidden * m_server;
        // Scale each shard's mean-gradient contribution by its share of the
        // pooled batch.
        Eigen::MatrixXd d_yhat = loss_grad(y_hat, client_data[k].y, loss) *
                                 (static_cast<double>(client_data[k].x.rows()) / total_samples);
        d_mserver += hidden.transpose() * d_yhat;
        const Eigen::MatrixXd d_hidden = d_yhat * m_server.transpose();
        const Eigen::MatrixXd d_mclient = client_data[k].x.transpose() * d_hidden;
        grads[k].a_client = client_adapters[k].b.transpose() * d_mclient;
        grads[k].b_client = d_mclient * client_adapters[k].a.transpose();
      }
      const Eigen::MatrixXd d_a_server = model.server.b.transpose() * d_mserver;
      const Eigen::MatrixXd d_b_server = d_mserver * model.server.a.transpose();
      model.server.a -= model.lr_server * d_a_server;
      model.server.b -= model.lr_server * d_b_server;
      for (int k = 0; k < k_clients; ++k) {
        client_adapters[k].a -= model.lr_client * grads[k].a_client;
        client_adapters[k].b -= model.lr_client * grads[k].b_client;
      }
    }

    // Federated aggregation: dataset-size-weighted mean of the adapter
    // factors, broadcast back to every client.
    ToyAdapters aggregated;
    aggregated.a = Eigen::MatrixXd::Zero(init.client.a.rows(), init.client.a.cols());
    aggregated.b = Eigen::MatrixXd::Zero(init.client.b.rows(), init.client.b.cols());
    for (int k = 0; k < k_clients; ++k) {
      const double weight = static_cast<double>(client_data[k].x.rows()) / total_samples;
      aggregated.a += weight * client_adapters[k].a;
      aggregated.b += weight * client_adapters[k].b;
    }
    for (int k = 0; k < k_clients; ++k) client_adapters[k] = aggregated;
    model.client = aggregated;
    out.round_losses.push_back(pooled_loss());
  }
  out.step_losses.push_back(pooled_loss());
  out.model = model;
  return out;
}

ToyTrainResult train_centralized_toy(const ToyDataset& pooled, const ToyModel& init, int steps,
                                     ToyLoss loss) {
  if (pooled.x.rows() != pooled.y.rows()) {
    throw std::invalid_argument("train_centralized_toy: x/y row mismatch");
  }
  ToyModel model = init;
  ToyTrainResult out;
  for (int step = 0; step < steps; ++step) {
    out.step_losses.push_back(toy_loss(model, pooled, loss));
    check_divergence(out.step_losses.back());
    const ToyGradients g = toy_gradients(model, pooled, loss);
    model.server.a -= model.lr_server * g.a_server;
    model.server.b -= model.lr_server * g.b_server;
    model.client.a -= model.lr_client * g.a_client;
    model.client.b -= model.lr_client * g.b_client;
  }
  out.step_losses.push_back(toy_loss(model, pooled, loss));
  out.round_losses.push_back(out.step_losses.back());
  out.model = model;
  return out;
}

std::vector<ToyDataset> make_toy_task_data(const ToyTask& task, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xda7aULL));
  // Teacher: frozen layers plus a rank-limited perturbation on each side.
  ToyModel teacher = make_toy_task_model(task, std::max(task.teacher_rank, 1), seed);
  teacher.client.b = gaussian(task.d_in, teacher.rank, 0.5 / std::sqrt(task.d_in), rng);
  teacher.client.a = gaussian(teacher.rank, task.d_hidden, 0.5, rng);
  teacher.server.b = gaussian(task.d_hidden, teacher.rank, 0.5 / std::sqrt(task.d_hidden), rng);
  teacher.server.a = gaussian(teacher.rank, task.d_out, 0.5, rng);

  std::vector<ToyDataset> shards(task.num_clients);
  for (int k = 0; k < task.num_clients; ++k) {
    ToyDataset& d = shards[k];
    d.x = gaussian(task.samples_per_client, task.d_in, 1.0, rng);
    d.y = forward_pass(teacher, d.x).y_hat;
    if (task.noise > 0.0) {
      d.y += gaussian(task.samples_per_client, task.d_out, task.noise, rng);
    }
    if (task.loss == ToyLoss::logistic) {
      for (int i = 0; i < d.y.rows(); ++i) {
        for (int j = 0; j < d.y.cols(); ++j) d.y(i, j) = d.y(i, j) >= 0.0 ? 1.0 : -1.0;
      }
    }
  }
  return shards;
}

ToyModel make_toy_task_model(const ToyTask& task, int rank, std::uint64_t seed) {
  return make_toy_model(task.d_in, task.d_hidden, task.d_out, rank, task.lr, task.lr,
                        derive_seed(seed, 0x30deULL));
}

CalibrationOutcome calibrate_rank_profile(const ToyTask& task, const std::vector<int>& candidates,
                                          double target_loss, int local_steps, int max_rounds,
                                          std::uint64_t seed) {
  const auto data = make_toy_task_data(task, seed);
  CalibrationOutcome out;
  out.profile.local_steps = local_steps;
  for (int rank : candidates) {
    const ToyModel init = make_toy_task_model(task, rank, seed);
    const ToyTrainResult run = train_sfl_toy(data, init, local_steps, max_rounds, task.loss);
    int reached = 0;
    for (std::size_t round = 0; round < run.round_losses.size(); ++round) {
      if (run.round_losses[round] <= target_loss) {
        reached = static_cast<int>(round) + 1;
        break;
      }
    }
    if (reached == 0) {
      out.skipped[rank] = "target loss " + std::to_string(target_loss) + " not reached within " +
                          std::to_string(max_rounds) + " rounds (final " +
                          std::to_string(run.round_losses.back()) + ")";
      continue;
    }
    out.profile.candidates.push_back(rank);
    out.profile.rounds[rank] = reached;
  }
  return out;
}

std::string rank_profile_to_config(const RankProfile& profile) {
  std::string candidates;
  std::string rounds;
  for (std::size_t i = 0; i < profile.candidates.size(); ++i) {
    const int r = profile.candidates[i];
    if (i > 0) {
      candidates += ", ";
      rounds += ", ";
    }
    candidates += std::to_string(r);
    rounds += std::to_string(r) + ":" + std::to_string(profile.rounds.at(r));
  }
  return "[lora]\ncandidates = [" + candidates + "]\nrounds = \"" + rounds +
         "\"\nlocal_steps = " + std::to_string(profile.local_steps) + "\n";
}

}  // namespace sflopt
