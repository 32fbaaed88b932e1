#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "dqd/linalg.hpp"

namespace dqd::states {

struct U3Angles {
  double theta = 0.0;
  double phi = 0.0;
  double lam = 0.0;
};

enum class Role { Train, Validation };

struct StateSet {
  std::vector<StateVector> states;
  std::uint64_t seed = 0;
  Role role = Role::Train;
};

/// U3(theta, phi, lambda) as a 2x2 matrix.
ComplexMatrix u3_matrix(const U3Angles& a);

/// U3(theta, phi, lambda)|0>.
StateVector u3_state(const U3Angles& a);

/// Ry(theta_s) on q0, CX(q0 -> q1), then U3 on each qubit, applied to |00>.
StateVector two_qubit_state(double theta_s, const U3Angles& local0, const U3Angles& local1);

/// Training and validation sets drawn from independent streams of `seed`.
/// theta, theta_s ~ U[0, pi]; phi, lambda ~ U[0, 2 pi).
std::pair<StateSet, StateSet> sample_sets(int n_qubits, std::size_t n_train, std::size_t n_val,
                                          std::uint64_t seed);

}  // namespace dqd::states
