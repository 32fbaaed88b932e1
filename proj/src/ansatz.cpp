#include "dqd/ansatz.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "dqd/error.hpp"

namespace dqd::ansatz {

namespace {

void check_binding(const Binding& b, std::vector<bool>& seen) {
  if (b.kind == Binding::Kind::Fixed) {
    if (!std::isfinite(b.value) || b.value < 0.0)
      throw ValidationError("fixed pulse strength must be finite and non-negative");
    return;
  }
  if (b.index >= seen.size()) seen.resize(b.index + 1, false);
  seen[b.index] = true;
}

double resolve(const Binding& b, const ParamVector& params) {
  return b.kind == Binding::Kind::Fixed ? b.value : params[b.index];
}

// Parameter -> qubits it drives within one slice.
std::map<std::size_t, std::vector<int>> slice_params(const Slice& s) {
  std::map<std::size_t, std::vector<int>> out;
  for (const auto& slot : s.slots) {
    if (slot.kind == Slot::Kind::Idle) continue;
    if (slot.first.kind == Binding::Kind::Param) out[slot.first.index].push_back(slot.qubit);
    if (slot.kind == Slot::Kind::TwoQubit && slot.second.kind == Binding::Kind::Param)
      out[slot.second.index].push_back(slot.qubit + 1);
  }
  return out;
}

}  // namespace

bool is_pi_multiple(double t) {
  const double k = std::round(t / kPi);
  return std::abs(t - k * kPi) <= 1e-9 * std::max(1.0, std::abs(t));
}

AnsatzSpec::AnsatzSpec(int n_qubits, std::vector<Slice> slices)
    : n_qubits_(n_qubits), slices_(std::move(slices)) {
  if (n_qubits_ < 1) throw ValidationError("ansatz needs at least one qubit");
  if (n_qubits_ > kMaxQubits) throw CapacityError("ansatz exceeds the simulator limit");
  std::vector<bool> seen;
  for (std::size_t si = 0; si < slices_.size(); ++si) {
    const auto& s = slices_[si];
    if (!(s.dt > 0.0) || !std::isfinite(s.dt))
      throw ValidationError("slice duration must be positive and finite");
    std::vector<int> cover(static_cast<std::size_t>(n_qubits_), 0);
    for (const auto& slot : s.slots) {
      const int width = slot.kind == Slot::Kind::TwoQubit ? 2 : 1;
      if (slot.qubit < 0 || slot.qubit + width > n_qubits_)
        throw ValidationError("slot qubit out of range");
      for (int w = 0; w < width; ++w) ++cover[static_cast<std::size_t>(slot.qubit + w)];
      if (slot.kind == Slot::Kind::Idle) continue;
      check_binding(slot.first, seen);
      if (slot.kind == Slot::Kind::TwoQubit) {
        check_binding(slot.second, seen);
        const bool one_fixed = (slot.first.kind == Binding::Kind::Fixed) !=
                               (slot.second.kind == Binding::Kind::Fixed);
        if (!one_fixed)
          throw ValidationError("two-qubit slot must pin exactly one of its pulses");
      }
    }
    for (int c : cover) {
      if (c != 1) {
        std::ostringstream os;
        os << "slice " << si << " does not cover every qubit exactly once";
        throw ValidationError(os.str());
      }
    }
    total_duration_ += s.dt;
  }
  for (bool b : seen)
    if (!b) throw ValidationError("parameter indices must be dense");
  n_params_ = seen.size();
  if (!is_pi_multiple(total_duration_))
    throw StructuralError("ansatz duration must be a multiple of pi");
}

std::vector<model::Pulse> AnsatzSpec::pulses(std::size_t slice, const ParamVector& params) const {
  std::vector<model::Pulse> out(static_cast<std::size_t>(n_qubits_));
  for (const auto& slot : slices_.at(slice).slots) {
    const auto q = static_cast<std::size_t>(slot.qubit);
    switch (slot.kind) {
      case Slot::Kind::Idle:
        break;
      case Slot::Kind::OneQubit:
        out[q] = resolve(slot.first, params);
        break;
      case Slot::Kind::TwoQubit:
        out[q] = resolve(slot.first, params);
        out[q + 1] = resolve(slot.second, params);
        break;
    }
  }
  return out;
}

AnsatzSpec single_qubit_ansatz(int n_gates, double dt) {
  if (n_gates < 1) throw ValidationError("ansatz needs at least one gate");
  if (!is_pi_multiple(n_gates * dt))
    throw StructuralError("single-qubit ansatz duration must be a multiple of pi");
  std::vector<Slice> slices;
  for (int g = 0; g < n_gates; ++g)
    slices.push_back({dt, {Slot::one(0, Binding::param(static_cast<std::size_t>(g)))}});
  return AnsatzSpec(1, std::move(slices));
}

AnsatzSpec two_qubit_ansatz() {
  constexpr int kIoSlices = 20;
  constexpr double kIoDt = kPi / 10;
  constexpr double kEgDt = kPi / 2;
  std::vector<Slice> slices;
  std::size_t next = 0;
  auto individual_ops = [&] {
    for (int s = 0; s < kIoSlices; ++s) {
      const std::size_t p0 = next++;
      const std::size_t p1 = next++;
      slices.push_back({kIoDt, {Slot::one(0, Binding::param(p0)), Slot::one(1, Binding::param(p1))}});
    }
  };
  individual_ops();
  for (int e = 0; e < 2; ++e)
    slices.push_back({kEgDt, {Slot::two(0, Binding::fixed(1.0), Binding::param(next++))}});
  for (int e = 0; e < 2; ++e)
    slices.push_back({kEgDt, {Slot::two(0, Binding::param(next++), Binding::fixed(1.0))}});
  individual_ops();
  return AnsatzSpec(2, std::move(slices));
}

void check_params(const AnsatzSpec& spec, const ParamVector& params) {
  if (params.size() != spec.n_params()) throw ValidationError("parameter vector has wrong length");
  for (double p : params) {
    if (!std::isfinite(p)) throw ValidationError("parameter is not finite");
    if (p < 0.0) throw ConstraintViolation("pulse parameters must be non-negative");
  }
}

ComplexMatrix evaluate(const AnsatzSpec& spec, const ParamVector& params) {
  check_params(spec, params);
  const model::ChainSpec chain{spec.n_qubits(), std::nullopt};
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (std::size_t k = 0; k < spec.slices().size(); ++k) {
    const model::PulseSegment seg{spec.slices()[k].dt, spec.pulses(k, params)};
    u = model::segment_propagator(seg, chain) * u;
  }
  return u;
}

Jacobian evaluate_with_jacobian(const AnsatzSpec& spec, const ParamVector& params,
                                const StateVector& input) {
  check_params(spec, params);
  if (input.n_qubits() != spec.n_qubits())
    throw ValidationError("input state does not match ansatz width");
  const model::ChainSpec chain{spec.n_qubits(), std::nullopt};
  const auto n_slices = spec.slices().size();
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits();

  struct Tangent {
    std::size_t param;
    ComplexVector du_psi;  // dU_k psi_{k-1}
  };
  std::vector<ComplexMatrix> props(n_slices);
  std::vector<std::vector<Tangent>> tangents(n_slices);

  // Forward sweep.
  ComplexVector psi = input.amplitudes();
  for (std::size_t k = 0; k < n_slices; ++k) {
    const auto& slice = spec.slices()[k];
    const auto j = model::PulseSegment{slice.dt, spec.pulses(k, params)}.strengths();
    const ComplexMatrix h = model::chain_hamiltonian(j, chain);
    const auto driven = slice_params(slice);
    if (driven.empty()) {
      props[k] = expm_neg_i_Ht(h, slice.dt);
    } else {
      for (const auto& [p, qubits] : driven) {
        ComplexMatrix dh = ComplexMatrix::Zero(dim, dim);
        for (int q : qubits) dh += model::chain_hamiltonian_derivative(j, q, chain);
        auto pd = expm_with_derivative(h, dh, slice.dt);
        tangents[k].push_back({p, pd.du * psi});
        props[k] = std::move(pd.u);
      }
    }
    psi = props[k] * psi;
  }

  // Backward sweep: suffix holds U_N ... U_{k+1}.
  std::vector<ComplexVector> derivs(spec.n_params(), ComplexVector::Zero(dim));
  ComplexMatrix suffix = ComplexMatrix::Identity(dim, dim);
  for (std::size_t k = n_slices; k-- > 0;) {
    for (const auto& t : tangents[k]) derivs[t.param] += suffix * t.du_psi;
    suffix = suffix * props[k];
  }
  return {StateVector(std::move(psi)), std::move(derivs)};
}

}  // namespace dqd::ansatz
