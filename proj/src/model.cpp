#include "dqd/model.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <sstream>

#include "dqd/error.hpp"

namespace dqd::model {

namespace {

// sz_i, sx_i and (sz - I)_i (sz - I)_{i+1} embedded in an n-qubit chain.
struct ChainOperators {
  std::vector<ComplexMatrix> z;
  std::vector<ComplexMatrix> x;
  std::vector<ComplexMatrix> zz;
};

const ChainOperators& chain_operators(int n) {
  static std::array<ChainOperators, kMaxQubits + 1> table;
  static std::array<std::once_flag, kMaxQubits + 1> flags;
  std::call_once(flags[static_cast<std::size_t>(n)], [n] {
    auto& ops = table[static_cast<std::size_t>(n)];
    const ComplexMatrix zm = pauli::Z() - pauli::I();
    for (int q = 0; q < n; ++q) {
      ops.z.push_back(embed(pauli::Z(), q, n));
      ops.x.push_back(embed(pauli::X(), q, n));
    }
    for (int q = 0; q + 1 < n; ++q) {
      const Eigen::Index left = Eigen::Index{1} << q;
      const Eigen::Index right = Eigen::Index{1} << (n - q - 2);
      ops.zz.push_back(kron(kron(ComplexMatrix::Identity(left, left), kron(zm, zm)),
                            ComplexMatrix::Identity(right, right)));
    }
  });
  return table[static_cast<std::size_t>(n)];
}

void require_non_negative(double j) {
  if (!std::isfinite(j)) throw ValidationError("pulse strength is not finite");
  if (j < 0.0) {
    std::ostringstream os;
    os << "pulse strength must be non-negative, got " << j;
    throw ConstraintViolation(os.str());
  }
}

void require_chain(std::span<const double> j, const ChainSpec& spec) {
  if (spec.n_qubits < 1) throw ValidationError("chain needs at least one qubit");
  if (spec.n_qubits > kMaxQubits) throw CapacityError("chain exceeds the 5-qubit simulator limit");
  if (j.size() != static_cast<std::size_t>(spec.n_qubits))
    throw ValidationError("pulse vector length does not match chain size");
  for (double v : j) require_non_negative(v);
}

}  // namespace

std::vector<double> PulseSegment::strengths() const {
  std::vector<double> out;
  out.reserve(pulses.size());
  for (const auto& p : pulses) out.push_back(p.value_or(0.0));
  return out;
}

ComplexMatrix h1q(double j) {
  require_non_negative(j);
  return j * pauli::Z() + pauli::X();
}

ComplexMatrix native_1q(double j, double dt) {
  if (!(dt > 0.0)) throw ValidationError("native gate duration must be positive");
  return expm_neg_i_Ht(h1q(j), dt);
}

ComplexMatrix h2q(double j1, double j2) {
  const std::array<double, 2> j{j1, j2};
  return chain_hamiltonian(j, ChainSpec{2, std::nullopt});
}

ComplexMatrix chain_hamiltonian(std::span<const double> j, const ChainSpec& spec) {
  require_chain(j, spec);
  const auto& ops = chain_operators(spec.n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int q = 0; q < spec.n_qubits; ++q) {
    const auto qi = static_cast<std::size_t>(q);
    if (j[qi] != 0.0) h += j[qi] * ops.z[qi];
    h += ops.x[qi];
  }
  // (J12 / 2) with J12 = J_q J_{q+1} / 2.
  for (int q = 0; q + 1 < spec.n_qubits; ++q) {
    const auto qi = static_cast<std::size_t>(q);
    const double c = j[qi] * j[qi + 1] / 4.0;
    if (c != 0.0) h += c * ops.zz[qi];
  }
  return h;
}

ComplexMatrix chain_hamiltonian_derivative(std::span<const double> j, int qubit,
                                           const ChainSpec& spec) {
  require_chain(j, spec);
  if (qubit < 0 || qubit >= spec.n_qubits) throw ValidationError("qubit index out of range");
  const auto& ops = chain_operators(spec.n_qubits);
  const auto qi = static_cast<std::size_t>(qubit);
  ComplexMatrix dh = ops.z[qi];
  if (qubit > 0 && j[qi - 1] != 0.0) dh += (j[qi - 1] / 4.0) * ops.zz[qi - 1];
  if (qubit + 1 < spec.n_qubits && j[qi + 1] != 0.0) dh += (j[qi + 1] / 4.0) * ops.zz[qi];
  return dh;
}

ComplexMatrix segment_propagator(const PulseSegment& seg, const ChainSpec& spec) {
  if (!(seg.duration > 0.0)) throw ValidationError("segment duration must be positive");
  const auto j = seg.strengths();
  return expm_neg_i_Ht(chain_hamiltonian(j, spec), seg.duration);
}

std::vector<std::string> pulse_bound_warnings(const PulseSegment& seg, const ChainSpec& spec) {
  std::vector<std::string> out;
  if (!spec.j_max) return out;
  for (std::size_t q = 0; q < seg.pulses.size(); ++q) {
    if (seg.pulses[q] && *seg.pulses[q] > *spec.j_max) {
      std::ostringstream os;
      os << "qubit " << q << " pulse " << *seg.pulses[q] << " exceeds j_max " << *spec.j_max;
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace dqd::model
