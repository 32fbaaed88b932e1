#include "dqd/states.hpp"

#include <cmath>
#include <random>

#include "dqd/error.hpp"

namespace dqd::states {

namespace {

// Distinct stream constants so train and validation never share draws.
constexpr std::uint64_t kTrainStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kValStream = 0xc2b2ae3d27d4eb4fULL;

StateSet draw(int n_qubits, std::size_t count, std::uint64_t seed, std::uint64_t stream, Role role) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> polar(0.0, kPi);
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * kPi);
  auto angles = [&] {
    U3Angles a;
    a.theta = polar(rng);
    a.phi = azimuth(rng);
    a.lam = azimuth(rng);
    return a;
  };
  StateSet out{{}, seed, role};
  out.states.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (n_qubits == 1) {
      out.states.push_back(u3_state(angles()));
    } else {
      const double ts = polar(rng);
      const U3Angles a0 = angles();
      const U3Angles a1 = angles();
      out.states.push_back(two_qubit_state(ts, a0, a1));
    }
  }
  return out;
}

}  // namespace

ComplexMatrix u3_matrix(const U3Angles& a) {
  const double c = std::cos(a.theta / 2);
  const double s = std::sin(a.theta / 2);
  ComplexMatrix m(2, 2);
  m << c, -std::polar(s, a.lam), std::polar(s, a.phi), std::polar(c, a.phi + a.lam);
  return m;
}

StateVector u3_state(const U3Angles& a) {
  return StateVector::normalized(u3_matrix(a).col(0));
}

StateVector two_qubit_state(double theta_s, const U3Angles& local0, const U3Angles& local1) {
  // Ry(theta_s)|0> = cos|0> + sin|1>, then CX gives cos|00> + sin|11>.
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::cos(theta_s / 2);
  v(3) = std::sin(theta_s / 2);
  const ComplexMatrix local = kron(u3_matrix(local0), u3_matrix(local1));
  return StateVector::normalized(local * v);
}

std::pair<StateSet, StateSet> sample_sets(int n_qubits, std::size_t n_train, std::size_t n_val,
                                          std::uint64_t seed) {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("state sampler supports 1 or 2 qubits");
  if (n_train == 0 || n_val == 0) throw ValidationError("state set sizes must be positive");
  return {draw(n_qubits, n_train, seed, kTrainStream, Role::Train),
          draw(n_qubits, n_val, seed, kValStream, Role::Validation)};
}

}  // namespace dqd::states
