#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace dqd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;
// Largest chain the dense simulator handles (dimension 32).
inline constexpr int kMaxQubits = 5;

/// Normalized pure state over 2^n computational basis states. Qubit 0 is the
/// most significant bit of the basis index.
class StateVector {
 public:
  StateVector() = default;

  /// Throws ValidationError if the amplitude count is not a power of two or
  /// the norm differs from 1 by more than 1e-10.
  explicit StateVector(ComplexVector amplitudes);

  static StateVector basis(int n_qubits, std::size_t index);
  /// Parses a bitstring such as "01" (qubit 0 first).
  static StateVector from_bitstring(std::string_view bits);
  /// Normalizes an arbitrary non-zero vector.
  static StateVector normalized(ComplexVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  int n_qubits_ = 0;
  ComplexVector amps_ = ComplexVector::Ones(1);
};

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

bool is_hermitian(const ComplexMatrix& h, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTol);
double max_abs(const ComplexMatrix& m);

/// exp(-i H t) for Hermitian H via eigendecomposition.
ComplexMatrix expm_neg_i_Ht(const ComplexMatrix& h, double t);

struct PropagatorDerivative {
  ComplexMatrix u;
  ComplexMatrix du;
};

/// exp(-i H t) together with its derivative along the Hermitian direction dH,
/// taken from the upper-right block of exp([[-iHt, -i dH t], [0, -iHt]]).
PropagatorDerivative expm_with_derivative(const ComplexMatrix& h,
                                          const ComplexMatrix& dh, double t);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product of a list of factors, first factor most significant.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Embeds a single-qubit operator at `qubit` of an n-qubit register.
ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits);

/// U|v>; throws ValidationError on shape mismatch or if the result is not
/// normalized (i.e. U was not unitary).
StateVector apply(const ComplexMatrix& u, const StateVector& v);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const StateVector& a, const StateVector& b);

/// |<a|b>|^2
double overlap_sq(const StateVector& a, const StateVector& b);

/// |tr(A^dagger B)|^2 / d^2, invariant under global phase.
double trace_fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace dqd
