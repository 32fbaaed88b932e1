#include "dqd/gates.hpp"

#include <cmath>

namespace dqd::gates {

std::string canonical_name(std::string_view name) {
  if (name == "CX" || name == "CNOT") return "CX_01";
  return std::string(name);
}

const std::vector<std::string>& standard_names() {
  static const std::vector<std::string> names{"H", "T", "S", "X", "Y", "Z", "CX_01", "CX_10", "CZ"};
  return names;
}

ComplexMatrix ry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

std::optional<ComplexMatrix> reference_unitary(std::string_view raw) {
  const std::string name = canonical_name(raw);
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "I") return pauli::I();
  if (name == "X") return pauli::X();
  if (name == "Y") return pauli::Y();
  if (name == "Z") return pauli::Z();
  if (name == "H") {
    ComplexMatrix m(2, 2);
    m << r, r, r, -r;
    return m;
  }
  if (name == "S") {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, Complex(0, 1);
    return m;
  }
  if (name == "T") {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, std::polar(1.0, kPi / 4);
    return m;
  }
  if (name == "CX_01") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
  }
  if (name == "CX_10") {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(3, 1) = m(2, 2) = m(1, 3) = 1;
    return m;
  }
  if (name == "CZ") {
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
  }
  return std::nullopt;
}

}  // namespace dqd::gates
