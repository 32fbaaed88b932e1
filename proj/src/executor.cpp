#include "dqd/executor.hpp"

#include <cmath>

#include "dqd/error.hpp"
#include "dqd/kernels.hpp"

namespace dqd::executor {

namespace {

void require_valid(const scheduler::Schedule& s) {
  const auto report = scheduler::verify_schedule(s);
  if (report.ok()) return;
  std::string msg = "schedule rejected:";
  for (const auto& c : report.checks)
    for (const auto& v : c.violations) msg += " [" + c.name + "] " + v + ";";
  throw ConstraintViolation(msg);
}

}  // namespace

std::vector<ComplexMatrix> segment_propagators(const scheduler::Schedule& s, Verify verify) {
  if (verify == Verify::On) require_valid(s);
  const model::ChainSpec chain{s.n_qubits, std::nullopt};
  std::vector<ComplexMatrix> props;
  props.reserve(s.segments.size());
  for (const auto& seg : s.segments) props.push_back(model::segment_propagator(seg, chain));
  return props;
}

ExecutionResult execute(const scheduler::Schedule& s, const StateVector& init,
                        bool keep_checkpoints, Verify verify) {
  if (init.n_qubits() != s.n_qubits) throw ValidationError("initial state does not match chain");
  const auto props = segment_propagators(s, verify);
  ExecutionResult out;
  out.makespan = s.makespan();
  ComplexVector psi = init.amplitudes();
  for (const auto& p : props) {
    psi = p * psi;
    if (keep_checkpoints) out.checkpoints.emplace_back(psi);
  }
  out.final_state = StateVector(std::move(psi));
  return out;
}

ComplexMatrix executed_unitary(const scheduler::Schedule& s, Verify verify) {
  const auto props = segment_propagators(s, verify);
  if (props.empty()) {
    const Eigen::Index d = Eigen::Index{1} << s.n_qubits;
    return ComplexMatrix::Identity(d, d);
  }
  return kernels::propagate_columns(props);
}

std::vector<double> measure_distribution(const StateVector& state) {
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

std::string basis_label(std::size_t index, int n_qubits) {
  std::string out(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((index >> (n_qubits - 1 - q)) & 1U) out[static_cast<std::size_t>(q)] = '1';
  return out;
}

double expectation(const StateVector& state, int qubit, Axis axis) {
  const int n = state.n_qubits();
  if (qubit < 0 || qubit >= n) throw ValidationError("expectation: qubit index out of range");
  const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (axis == Axis::Z) {
      acc += ((i & bit) ? -1.0 : 1.0) * std::norm(state[i]);
    } else {
      acc += std::real(std::conj(state[i]) * state[i ^ bit]);
    }
  }
  return acc;
}

double process_fidelity(const scheduler::Schedule& s, const ComplexMatrix& u_ref,
                        Verify verify) {
  const Eigen::Index d = Eigen::Index{1} << s.n_qubits;
  if (u_ref.rows() != d || u_ref.cols() != d)
    throw ValidationError("process_fidelity: dimension mismatch");
  return trace_fidelity(u_ref, executed_unitary(s, verify));
}

}  // namespace dqd::executor
