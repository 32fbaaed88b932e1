#pragma once

#include <string>
#include <vector>

#include "dqd/linalg.hpp"
#include "dqd/scheduler.hpp"

namespace dqd::executor {

struct ExecutionResult {
  StateVector final_state;
  double makespan = 0.0;
  /// State after each segment, filled only when checkpoints are requested.
  std::vector<StateVector> checkpoints;
};

enum class Axis { Z, X };

/// Off evaluates the physics of a schedule that fails verification, for
/// studying corrupted timings.
enum class Verify { On, Off };

/// Propagators of every segment in time order. With Verify::On, rejects
/// schedules that fail verify_schedule with ConstraintViolation.
std::vector<ComplexMatrix> segment_propagators(const scheduler::Schedule& s,
                                               Verify verify = Verify::On);

ExecutionResult execute(const scheduler::Schedule& s, const StateVector& init,
                        bool keep_checkpoints = false, Verify verify = Verify::On);

/// Executed unitary, one column per basis state.
ComplexMatrix executed_unitary(const scheduler::Schedule& s, Verify verify = Verify::On);

std::vector<double> measure_distribution(const StateVector& state);

/// Basis label of index i, qubit 0 first.
std::string basis_label(std::size_t index, int n_qubits);

double expectation(const StateVector& state, int qubit, Axis axis);

/// |tr(U_ref^dagger U_exec)|^2 / 4^n.
double process_fidelity(const scheduler::Schedule& s, const ComplexMatrix& u_ref,
                        Verify verify = Verify::On);

}  // namespace dqd::executor
