#include "dqd/demos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dqd/error.hpp"

namespace dqd::demos {

using scheduler::CircuitIR;
using scheduler::LogicalOp;

namespace {

double rounding(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace

MbeGradient mbe_gradient(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                         const MaxCutProblem& w) {
  const auto jac = ansatz::evaluate_with_jacobian(spec, params, StateVector::basis(2, 0));
  const auto& psi = jac.output.amplitudes();
  const ComplexMatrix ops[4] = {embed(pauli::Z(), 0, 2), embed(pauli::Z(), 1, 2),
                                embed(pauli::X(), 0, 2), embed(pauli::X(), 1, 2)};
  const Expectations e = measure_expectations(jac.output);
  const double t[4] = {std::tanh(e.z0), std::tanh(e.z1), std::tanh(e.x0), std::tanh(e.x1)};
  double dl_dt[4] = {w.w01 * t[1] + w.w02 * t[2], w.w01 * t[0], w.w02 * t[0] + w.w23 * t[3],
                     w.w23 * t[2]};
  double dl_de[4];
  for (int k = 0; k < 4; ++k) dl_de[k] = dl_dt[k] * (1.0 - t[k] * t[k]);

  MbeGradient out{mbe_loss(e, w), e, std::vector<double>(params.size(), 0.0)};
  for (int k = 0; k < 4; ++k) {
    const ComplexVector o_psi = ops[k] * psi;
    for (std::size_t p = 0; p < params.size(); ++p)
      out.grad[p] += dl_de[k] * 2.0 * std::real(o_psi.dot(jac.derivatives[p]));
  }
  return out;
}

CircuitIR grover_reference_ir() {
  CircuitIR ir;
  ir.n_qubits = 2;
  auto both = [&](const char* g) {
    ir.ops.push_back({g, {0}, std::nullopt});
    ir.ops.push_back({g, {1}, std::nullopt});
  };
  both("H");
  ir.ops.push_back({"CZ", {0, 1}, std::nullopt});
  both("H");
  both("X");
  ir.ops.push_back({"CZ", {0, 1}, std::nullopt});
  both("X");
  both("H");
  return ir;
}

GroverReport grover_demo(const library::GateLibrary& lib, std::uint64_t /*seed*/) {
  GroverReport r;
  r.schedule = scheduler::schedule(grover_reference_ir(), lib);
  const auto result = executor::execute(r.schedule, StateVector::basis(2, 0));
  r.distribution = executor::measure_distribution(result.final_state);
  r.makespan = result.makespan;
  const auto top = std::max_element(r.distribution.begin(), r.distribution.end());
  r.top_outcome = executor::basis_label(static_cast<std::size_t>(top - r.distribution.begin()), 2);
  return r;
}

double mbe_loss(const Expectations& e, const MaxCutProblem& w) {
  const double z0 = std::tanh(e.z0), z1 = std::tanh(e.z1);
  const double x0 = std::tanh(e.x0), x1 = std::tanh(e.x1);
  return w.w01 * z0 * z1 + w.w02 * z0 * x0 + w.w23 * x0 * x1;
}

double cut_count(const Expectations& e, const MaxCutProblem& w) {
  const double z0 = rounding(e.z0), z1 = rounding(e.z1);
  const double x0 = rounding(e.x0), x1 = rounding(e.x1);
  return 0.5 * (w.w01 * (1 - z0 * z1) + w.w02 * (1 - z0 * x0) + w.w23 * (1 - x0 * x1));
}

Expectations measure_expectations(const StateVector& state) {
  if (state.n_qubits() != 2) throw ValidationError("Max-Cut encoding uses two qubits");
  using executor::Axis;
  return {executor::expectation(state, 0, Axis::Z), executor::expectation(state, 1, Axis::Z),
          executor::expectation(state, 0, Axis::X), executor::expectation(state, 1, Axis::X)};
}

CircuitIR maxcut_ir(double init) {
  const auto n = scheduler::dynamic_template(1).n_params();
  CircuitIR ir;
  ir.n_qubits = 2;
  for (int layer = 0; layer < 2; ++layer) {
    ir.ops.push_back({"RY", {0}, ansatz::ParamVector(n, init)});
    ir.ops.push_back({"RY", {1}, ansatz::ParamVector(n, init)});
    ir.ops.push_back({"CZ", {0, 1}, std::nullopt});
  }
  return ir;
}

MaxCutReport maxcut_demo(const library::GateLibrary& lib, const MaxCutConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (cfg.max_rounds < 1) throw ValidationError("max_rounds must be positive");
  const CircuitIR ir = maxcut_ir(1.0);
  auto [spec, params] = scheduler::parametrize(ir, lib);

  MaxCutReport r;
  r.best_loss = std::numeric_limits<double>::infinity();
  trainer::AdamState adam(params.size());
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const auto lg = mbe_gradient(spec, params, cfg.problem);
    r.loss_history.push_back(lg.loss);
    r.cut_history.push_back(cut_count(lg.e, cfg.problem));
    if (lg.loss < r.best_loss) {
      r.best_loss = lg.loss;
      r.best_round = round;
      r.params = params;
      r.expectations = lg.e;
    }
    trainer::adam_step(params, lg.grad, adam, cfg.learning_rate, cfg.adam);
  }
  r.final_cut = cut_count(r.expectations, cfg.problem);
  r.circuit = scheduler::with_dynamic_params(ir, r.params);
  r.schedule = scheduler::schedule(r.circuit, lib);
  return r;
}

nlohmann::json to_json(const GroverReport& r) {
  nlohmann::json dist = nlohmann::json::object();
  for (std::size_t i = 0; i < r.distribution.size(); ++i)
    dist[executor::basis_label(i, 2)] = r.distribution[i];
  return {{"distribution", dist}, {"top_outcome", r.top_outcome}, {"makespan", r.makespan},
          {"makespan_over_pi", r.makespan / kPi}};
}

nlohmann::json to_json(const MaxCutReport& r) {
  return {{"loss_history", r.loss_history},
          {"cut_history", r.cut_history},
          {"best_loss", r.best_loss},
          {"best_round", r.best_round},
          {"final_cut", r.final_cut},
          {"expectations",
           {{"z0", r.expectations.z0}, {"z1", r.expectations.z1}, {"x0", r.expectations.x0},
            {"x1", r.expectations.x1}}},
          {"params", r.params},
          {"makespan", r.schedule.makespan()}};
}

}  // namespace dqd::demos
