#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqd/ansatz.hpp"
#include "dqd/library.hpp"
#include "dqd/model.hpp"

// Modular layout: every logical gate occupies one 6 pi slot, a qubit adjacent
// to a pulsed qubit of another operation stays idle for the whole slot, and
// idle qubits return to themselves because free evolution over k pi is the
// identity up to sign.
namespace dqd::scheduler {

struct LogicalOp {
  std::string gate;
  std::vector<int> qubits;
  /// Present for dynamic slots: trainable pulse strengths for the default
  /// template of the op's arity instead of a library lookup.
  std::optional<ansatz::ParamVector> params;
  bool operator==(const LogicalOp&) const = default;
};

struct CircuitIR {
  int n_qubits = 1;
  std::vector<LogicalOp> ops;

  /// Qubit range, distinctness, and nearest-neighbour two-qubit operands.
  void check() const;
  bool operator==(const CircuitIR&) const = default;
};

struct Placement {
  std::size_t op = 0;
  std::string gate;
  std::vector<int> qubits;
  int slot = 0;
  double start = 0.0;
  double end = 0.0;
  bool operator==(const Placement&) const = default;
};

struct Schedule {
  int n_qubits = 1;
  double slot_duration = library::kGateDuration;
  std::vector<model::PulseSegment> segments;
  std::vector<Placement> placements;

  double makespan() const;
  int n_slots() const;
};

struct Check {
  std::string name;
  bool passed = true;
  std::vector<std::string> violations;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  bool ok() const;
};

/// Template used for dynamic ops of the given arity.
ansatz::AnsatzSpec dynamic_template(int arity);

/// Greedy list scheduling into 6 pi slots. Throws std::invalid_argument when a
/// gate is missing from the library and ValidationError for malformed IR.
Schedule schedule(const CircuitIR& ir, const library::GateLibrary& lib);

/// The same layout with every dynamic-op pulse bound to a trainable
/// parameter (dynamic ops' params concatenated in IR order) and every library
/// pulse fixed. Returns the ansatz and the IR's current parameter values.
std::pair<ansatz::AnsatzSpec, ansatz::ParamVector> parametrize(const CircuitIR& ir,
                                                               const library::GateLibrary& lib);

/// Replaces the inline parameters of the IR's dynamic ops from a flat vector
/// laid out as by parametrize().
CircuitIR with_dynamic_params(CircuitIR ir, const ansatz::ParamVector& flat);

VerifyReport verify_schedule(const Schedule& s, std::optional<double> j_max = std::nullopt);

/// Ideal unitary of the logical circuit (dynamic ops use their template's
/// realized unitary).
ComplexMatrix ideal_unitary(const CircuitIR& ir);

nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CircuitIR& ir);
/// Accepts either a bare list of {gate, qubits[, params]} or
/// {"n_qubits": n, "ops": [...]}.
CircuitIR circuit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerifyReport& r);

}  // namespace dqd::scheduler
