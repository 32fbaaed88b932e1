#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqd/linalg.hpp"

// Singlet-triplet double-quantum-dot chain: every qubit rotates about x at the
// fixed rate h = 1 and about z at its pulse strength J >= 0. Adjacent qubits
// couple with strength J_i * J_{i+1} / 2 through (sz - I) (x) (sz - I) / 2.
namespace dqd::model {

/// A pulse on one qubit during a segment. An empty value means the qubit is
/// idle: J is exactly zero and the qubit is exempt from the adjacency rule.
using Pulse = std::optional<double>;

struct PulseSegment {
  double duration = 0.0;
  std::vector<Pulse> pulses;

  /// Pulse strengths with idles mapped to zero.
  std::vector<double> strengths() const;
};

struct ChainSpec {
  int n_qubits = 1;
  /// Soft upper bound on J. Exceeding it produces warnings, never errors.
  std::optional<double> j_max;
};

/// J sz + sx.
ComplexMatrix h1q(double j);

/// exp(-i (J sz + sx) dt).
ComplexMatrix native_1q(double j, double dt);

/// Two adjacent qubits, first argument on the more significant qubit.
ComplexMatrix h2q(double j1, double j2);

/// Full chain Hamiltonian for the given per-qubit strengths.
ComplexMatrix chain_hamiltonian(std::span<const double> j, const ChainSpec& spec);

/// dH/dJ_q at the given strengths: sz_q plus the coupling terms incident to q.
ComplexMatrix chain_hamiltonian_derivative(std::span<const double> j, int qubit,
                                           const ChainSpec& spec);

ComplexMatrix segment_propagator(const PulseSegment& seg, const ChainSpec& spec);

/// Messages for every pulse above spec.j_max (empty when no bound is set).
std::vector<std::string> pulse_bound_warnings(const PulseSegment& seg, const ChainSpec& spec);

}  // namespace dqd::model
