#pragma once

#include <cstddef>
#include <vector>

#include "dqd/linalg.hpp"
#include "dqd/model.hpp"

namespace dqd::ansatz {

using ParamVector = std::vector<double>;

/// Where a pulse strength comes from: a trainable parameter or a constant.
struct Binding {
  enum class Kind { Param, Fixed };
  Kind kind = Kind::Param;
  std::size_t index = 0;  // Param only
  double value = 0.0;     // Fixed only

  static Binding param(std::size_t i) { return {Kind::Param, i, 0.0}; }
  static Binding fixed(double v) { return {Kind::Fixed, 0, v}; }
  bool operator==(const Binding&) const = default;
};

/// One block of a time slice. TwoQubit acts on (qubit, qubit + 1) with
/// exactly one of its two pulses fixed.
struct Slot {
  enum class Kind { OneQubit, TwoQubit, Idle };
  Kind kind = Kind::Idle;
  int qubit = 0;
  Binding first{};
  Binding second{};

  static Slot one(int q, Binding b) { return {Kind::OneQubit, q, b, {}}; }
  static Slot two(int q, Binding b0, Binding b1) { return {Kind::TwoQubit, q, b0, b1}; }
  static Slot idle(int q) { return {Kind::Idle, q, {}, {}}; }
  bool operator==(const Slot&) const = default;
};

/// Piecewise-constant interval in which every qubit is covered by one slot.
struct Slice {
  double dt = 0.0;
  std::vector<Slot> slots;
  bool operator==(const Slice&) const = default;
};

/// Fixed-structure sequence of native gates with trainable pulse strengths.
/// Adjacent pulsed qubits within a slice evolve under the coupled chain
/// Hamiltonian.
class AnsatzSpec {
 public:
  AnsatzSpec() = default;
  /// Validates coverage, durations, fixed values, dense parameter indices,
  /// and that the total duration is a multiple of pi.
  AnsatzSpec(int n_qubits, std::vector<Slice> slices);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Slice>& slices() const { return slices_; }
  std::size_t n_params() const { return n_params_; }
  double total_duration() const { return total_duration_; }

  /// Per-qubit pulses of one slice (idle -> empty) for the given parameters.
  std::vector<model::Pulse> pulses(std::size_t slice, const ParamVector& params) const;

  bool operator==(const AnsatzSpec& o) const {
    return n_qubits_ == o.n_qubits_ && slices_ == o.slices_;
  }

 private:
  int n_qubits_ = 0;
  std::vector<Slice> slices_;
  std::size_t n_params_ = 0;
  double total_duration_ = 0.0;
};

/// True when t is an integer multiple of pi (relative tolerance 1e-9).
bool is_pi_multiple(double t);

/// n_gates pulsed single-qubit native gates of duration dt on qubit 0.
AnsatzSpec single_qubit_ansatz(int n_gates = 12, double dt = kPi / 2);

/// Individual operations (20 x pi/10, both qubits pulsed), entanglement
/// generation (4 x pi/2 with one pulse pinned to 1), individual operations.
/// 84 parameters, 6 pi total.
AnsatzSpec two_qubit_ansatz();

ComplexMatrix evaluate(const AnsatzSpec& spec, const ParamVector& params);

struct Jacobian {
  StateVector output;
  /// d output / d param_k, one entry per parameter.
  std::vector<ComplexVector> derivatives;
};

/// Output state and its derivative with respect to every parameter, from one
/// cached forward sweep and one backward sweep.
Jacobian evaluate_with_jacobian(const AnsatzSpec& spec, const ParamVector& params,
                                const StateVector& input);

/// Throws ConstraintViolation on negative entries, ValidationError on length.
void check_params(const AnsatzSpec& spec, const ParamVector& params);

}  // namespace dqd::ansatz
