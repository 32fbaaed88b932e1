#include "dqd/kernels.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include <omp.h>

#include "dqd/error.hpp"

namespace dqd::kernels {

namespace {

double infidelity(const ComplexMatrix& u, const ComplexMatrix& u_ref, const StateVector& phi) {
  const ComplexVector got = u * phi.amplitudes();
  const ComplexVector want = u_ref * phi.amplitudes();
  return 1.0 - std::norm(want.dot(got));
}

void check_shapes(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                  std::span<const StateVector> states) {
  if (states.empty()) throw ValidationError("validation set is empty");
  if (u.rows() != u_ref.rows() || u.cols() != u_ref.cols())
    throw ValidationError("model and reference unitaries differ in shape");
  for (const auto& s : states)
    if (static_cast<Eigen::Index>(s.dim()) != u.cols())
      throw ValidationError("state dimension does not match unitary");
}

Eigen::Index prop_dim(std::span<const ComplexMatrix> props) {
  if (props.empty()) throw ValidationError("no propagators to apply");
  return props.front().rows();
}

ComplexVector propagate_column(std::span<const ComplexMatrix> props, Eigen::Index col) {
  ComplexVector v = ComplexVector::Zero(prop_dim(props));
  v(col) = 1.0;
  for (const auto& p : props) v = p * v;
  return v;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

namespace serial {

double max_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                      std::span<const StateVector> states) {
  check_shapes(u, u_ref, states);
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, infidelity(u, u_ref, s));
  return worst;
}

ComplexMatrix propagate_columns(std::span<const ComplexMatrix> props) {
  const Eigen::Index d = prop_dim(props);
  ComplexMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) out.col(c) = propagate_column(props, c);
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace serial

namespace omp {

double max_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                      std::span<const StateVector> states) {
  check_shapes(u, u_ref, states);
  const auto n = static_cast<long>(states.size());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long i = 0; i < n; ++i)
    worst = std::max(worst, infidelity(u, u_ref, states[static_cast<std::size_t>(i)]));
  return worst;
}

ComplexMatrix propagate_columns(std::span<const ComplexMatrix> props) {
  const Eigen::Index d = prop_dim(props);
  ComplexMatrix out(d, d);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < d; ++c) out.col(c) = propagate_column(props, c);
  return out;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace omp

}  // namespace dqd::kernels
