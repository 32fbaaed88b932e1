#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dqd/linalg.hpp"

// Data-parallel inner loops. Every kernel has a serial reference in
// `serial::` and an OpenMP version in `omp::`; tests require them to agree
// bitwise and the benchmark target compares their throughput.
namespace dqd::kernels {

namespace serial {

/// max over states of 1 - |<U_ref phi | U phi>|^2.
double max_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                      std::span<const StateVector> states);

/// Columns of props[n-1] ... props[0], each built by applying the propagators
/// to a basis vector in time order.
ComplexMatrix propagate_columns(std::span<const ComplexMatrix> props);

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace omp {

double max_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                      std::span<const StateVector> states);

ComplexMatrix propagate_columns(std::span<const ComplexMatrix> props);

/// Runs independent jobs across threads. The first exception thrown by any
/// job is rethrown after the loop finishes.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace omp

using omp::for_each_index;
using omp::max_infidelity;
using omp::propagate_columns;

int max_threads();

}  // namespace dqd::kernels
