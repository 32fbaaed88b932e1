#include "dqd/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dqd/error.hpp"

namespace dqd {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

void require_hermitian(const ComplexMatrix& h, const char* what) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw ValidationError(std::string(what) + ": generator must be square and non-empty");
  require_finite(h, what);
  if (!is_hermitian(h)) throw ValidationError(std::string(what) + ": generator is not Hermitian");
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  const auto n = static_cast<std::size_t>(amps_.size());
  if (!is_power_of_two(n)) throw ValidationError("state dimension must be a power of two");
  if (!amps_.allFinite()) throw ValidationError("state has non-finite amplitude");
  if (std::abs(amps_.norm() - 1.0) > 1e-10) throw ValidationError("state is not normalized");
  n_qubits_ = log2_exact(n);
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) throw CapacityError("too many qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw ValidationError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bitstring(std::string_view bits) {
  if (bits.empty()) throw ValidationError("empty bitstring");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("bitstring may only contain 0 and 1");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return basis(static_cast<int>(bits.size()), index);
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("cannot normalize zero vector");
  return StateVector(amplitudes / n);
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const ComplexMatrix& h, double tol) {
  return h.rows() == h.cols() && max_abs(h - h.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

ComplexMatrix expm_neg_i_Ht(const ComplexMatrix& h, double t) {
  require_hermitian(h, "expm_neg_i_Ht");
  if (!std::isfinite(t)) throw ValidationError("expm_neg_i_Ht: non-finite duration");
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs);
  const auto& vecs = es.eigenvectors();
  const Eigen::VectorXd& vals = es.eigenvalues();
  ComplexVector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases(k) = std::polar(1.0, -vals(k) * t);
  ComplexMatrix u = vecs * phases.asDiagonal() * vecs.adjoint();
  return u;
}

PropagatorDerivative expm_with_derivative(const ComplexMatrix& h, const ComplexMatrix& dh,
                                          double t) {
  require_hermitian(h, "expm_with_derivative");
  require_hermitian(dh, "expm_with_derivative");
  if (h.rows() != dh.rows()) throw ValidationError("expm_with_derivative: dimension mismatch");
  if (!std::isfinite(t)) throw ValidationError("expm_with_derivative: non-finite duration");

  const Eigen::Index d = h.rows();
  const Complex minus_i_t(0.0, -t);
  ComplexMatrix aug = ComplexMatrix::Zero(2 * d, 2 * d);
  aug.topLeftCorner(d, d) = minus_i_t * h;
  aug.topRightCorner(d, d) = minus_i_t * dh;
  aug.bottomRightCorner(d, d) = minus_i_t * h;
  const ComplexMatrix e = aug.exp();

  return {expm_neg_i_Ht(h, t), e.topRightCorner(d, d)};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw ValidationError("embed: qubit index out of range");
  if (op.rows() != 2 || op.cols() != 2) throw ValidationError("embed: operator must be 2x2");
  const Eigen::Index left = Eigen::Index{1} << qubit;
  const Eigen::Index right = Eigen::Index{1} << (n_qubits - qubit - 1);
  return kron(kron(ComplexMatrix::Identity(left, left), op), ComplexMatrix::Identity(right, right));
}

StateVector apply(const ComplexMatrix& u, const StateVector& v) {
  if (u.cols() != static_cast<Eigen::Index>(v.dim()) || u.rows() != u.cols())
    throw ValidationError("apply: shape mismatch");
  return StateVector(u * v.amplitudes());
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ValidationError("inner: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double overlap_sq(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

double trace_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw ValidationError("trace_fidelity: dimension mismatch");
  const double d = static_cast<double>(a.rows());
  return std::norm((a.adjoint() * b).trace()) / (d * d);
}

}  // namespace dqd
