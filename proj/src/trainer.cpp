#include "dqd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dqd/error.hpp"
#include "dqd/kernels.hpp"

namespace dqd::trainer {

void TrainConfig::check() const {
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(error_threshold > 0.0)) throw ValidationError("error threshold must be positive");
  if (max_rounds < 1) throw ValidationError("max_rounds must be positive");
  if (batch_size < 1) throw ValidationError("batch size must be positive");
  if (validate_every < 1) throw ValidationError("validation stride must be positive");
}

double state_loss(const StateVector& output, const StateVector& target) {
  return -overlap_sq(target, output);
}

std::vector<double> loss_gradients(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                                   const StateVector& input, const StateVector& target) {
  const auto jac = ansatz::evaluate_with_jacobian(spec, params, input);
  if (target.dim() != jac.output.dim()) throw ValidationError("target dimension mismatch");
  const Complex out_target = jac.output.amplitudes().dot(target.amplitudes());
  std::vector<double> g(jac.derivatives.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex target_d = target.amplitudes().dot(jac.derivatives[k]);
    g[k] = -2.0 * std::real(target_d * out_target);
  }
  return g;
}

void adam_step(ansatz::ParamVector& params, std::span<const double> grads, AdamState& state,
               double lr, const AdamConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size())
    throw ValidationError("adam_step: shape mismatch");
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] = std::max(params[i] - lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon), 0.0);
  }
}

double validate(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                const ComplexMatrix& u_ref, const states::StateSet& val) {
  if (val.states.empty()) throw ValidationError("validation set is empty");
  const ComplexMatrix u = ansatz::evaluate(spec, params);
  if (u_ref.rows() != u.rows()) throw ValidationError("reference unitary dimension mismatch");
  return kernels::max_infidelity(u, u_ref, val.states);
}

TrainReport train(const ComplexMatrix& u_ref, const ansatz::AnsatzSpec& spec,
                  const TrainConfig& cfg) {
  cfg.check();
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits();
  if (u_ref.rows() != dim || u_ref.cols() != dim)
    throw ValidationError("reference unitary does not match ansatz width");

  const auto [train_set, val_set] =
      states::sample_sets(spec.n_qubits(), cfg.n_train, cfg.n_val, cfg.seed);
  std::mt19937_64 picker(cfg.seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_int_distribution<std::size_t> pick(0, train_set.states.size() - 1);

  TrainReport report;
  report.learning_rate = cfg.learning_rate;
  ansatz::ParamVector params(spec.n_params(), 1.0);
  report.params = params;
  AdamState adam(params.size());
  std::vector<double> grads(params.size());

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    std::fill(grads.begin(), grads.end(), 0.0);
    double loss = 0.0;
    for (int b = 0; b < cfg.batch_size; ++b) {
      const auto& phi = train_set.states[pick(picker)];
      const StateVector target = apply(u_ref, phi);
      const auto jac = ansatz::evaluate_with_jacobian(spec, params, phi);
      loss += state_loss(jac.output, target);
      const Complex out_target = jac.output.amplitudes().dot(target.amplitudes());
      for (std::size_t k = 0; k < grads.size(); ++k) {
        const Complex target_d = target.amplitudes().dot(jac.derivatives[k]);
        grads[k] += -2.0 * std::real(target_d * out_target);
      }
    }
    const double inv = 1.0 / cfg.batch_size;
    for (auto& g : grads) g *= inv;
    report.loss_history.push_back(loss * inv);
    adam_step(params, grads, adam, cfg.learning_rate, cfg.adam);
    report.rounds_used = round;
    if (cfg.on_round) cfg.on_round(round, params);

    if (round % cfg.validate_every != 0 && round != cfg.max_rounds) continue;
    const double eps = validate(spec, params, u_ref, val_set);
    report.error_history.push_back(eps);
    if (eps < report.final_error) {
      report.final_error = eps;
      report.params = params;
    }
    if (eps <= cfg.error_threshold) {
      report.converged = true;
      break;
    }
  }
  return report;
}

TrainReport train_with_retry(const ComplexMatrix& u_ref, const ansatz::AnsatzSpec& spec,
                             TrainConfig cfg, std::span<const double> learning_rates) {
  if (learning_rates.empty()) return train(u_ref, spec, cfg);
  TrainReport last;
  for (double lr : learning_rates) {
    cfg.learning_rate = lr;
    last = train(u_ref, spec, cfg);
    if (last.converged) break;
  }
  return last;
}

nlohmann::json to_json(const TrainReport& r) {
  return {{"rounds_used", r.rounds_used},   {"final_error", r.final_error},
          {"converged", r.converged},       {"learning_rate", r.learning_rate},
          {"error_history", r.error_history}, {"loss_history", r.loss_history},
          {"params", r.params}};
}

}  // namespace dqd::trainer
