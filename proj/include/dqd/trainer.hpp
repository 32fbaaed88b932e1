#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqd/ansatz.hpp"
#include "dqd/states.hpp"

namespace dqd::trainer {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int max_rounds = 4000;
  double error_threshold = 1e-5;
  int batch_size = 1;
  std::uint64_t seed = 0;
  int validate_every = 1;
  std::size_t n_train = 100;
  std::size_t n_val = 100;
  AdamConfig adam;
  /// Called after every parameter update with the round number.
  std::function<void(int, const ansatz::ParamVector&)> on_round;

  void check() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

struct TrainReport {
  int rounds_used = 0;
  double final_error = 1.0;
  bool converged = false;
  double learning_rate = 0.0;
  std::vector<double> error_history;
  std::vector<double> loss_history;
  ansatz::ParamVector params;
};

/// -|<target|output>|^2
double state_loss(const StateVector& output, const StateVector& target);

/// d state_loss / d params, from one forward and one backward sweep.
std::vector<double> loss_gradients(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                                   const StateVector& input, const StateVector& target);

/// Bias-corrected Adam step followed by projection onto J >= 0.
void adam_step(ansatz::ParamVector& params, std::span<const double> grads, AdamState& state,
               double lr, const AdamConfig& cfg = {});

/// Worst-case infidelity of the ansatz against u_ref over the set.
double validate(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                const ComplexMatrix& u_ref, const states::StateSet& val);

/// Trains from all-ones parameters until the validation error drops to the
/// threshold or max_rounds is reached. Deterministic in cfg.seed.
TrainReport train(const ComplexMatrix& u_ref, const ansatz::AnsatzSpec& spec,
                  const TrainConfig& cfg);

/// Retries with each learning rate in turn until one run converges; returns
/// the converged report or the last failed one.
TrainReport train_with_retry(const ComplexMatrix& u_ref, const ansatz::AnsatzSpec& spec,
                             TrainConfig cfg, std::span<const double> learning_rates);

nlohmann::json to_json(const TrainReport& r);

}  // namespace dqd::trainer
