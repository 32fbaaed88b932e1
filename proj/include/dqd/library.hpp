#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqd/ansatz.hpp"
#include "dqd/trainer.hpp"

namespace dqd::library {

inline constexpr int kFormatVersion = 1;
inline constexpr double kGateDuration = 6 * kPi;
inline constexpr double kAdmissionThreshold = 1e-5;

struct GateMeta {
  double learning_rate = 0.0;
  int rounds = 0;
  std::uint64_t seed = 0;
  double threshold = kAdmissionThreshold;
  int batch_size = 1;
  bool operator==(const GateMeta&) const = default;
};

struct CompiledGate {
  std::string name;
  int arity = 1;
  ansatz::AnsatzSpec spec;
  ansatz::ParamVector params;
  double epsilon = 1.0;
  GateMeta meta;
  bool operator==(const CompiledGate&) const = default;
};

struct GateLibrary {
  int version = kFormatVersion;
  std::map<std::string, CompiledGate> gates;

  /// Looks up by canonical name; nullptr when absent.
  const CompiledGate* find(const std::string& name) const;
  /// Checks the shared-runtime and admission invariants before inserting.
  void add(CompiledGate gate);
  bool operator==(const GateLibrary&) const = default;
};

class CompilationFailed : public std::runtime_error {
 public:
  CompilationFailed(const std::string& what, trainer::TrainReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const trainer::TrainReport& report() const { return report_; }

 private:
  trainer::TrainReport report_;
};

struct CompileOptions {
  std::optional<double> learning_rate;
  std::optional<int> max_rounds;
  std::optional<std::uint64_t> seed;
  std::optional<int> validate_every;
  std::optional<int> batch_size;
  /// Further learning rates tried in order if the first run does not converge.
  std::vector<double> fallback_rates;
};

/// Default learning rate per gate (0.05 single-qubit, 0.1 CX, 0.02 CZ).
double default_learning_rate(const std::string& name);

/// Training states per gradient step: 1 for single-qubit gates, 8 for
/// two-qubit gates.
int default_batch_size(const std::string& name);

/// Trains a standard gate on its template and admits it at epsilon <= 1e-5.
/// Throws std::invalid_argument for unknown names and CompilationFailed when
/// training does not converge or the operator check fails. The training
/// history is copied to `report` when given.
CompiledGate compile_standard(const std::string& name, const CompileOptions& opts = {},
                              trainer::TrainReport* report = nullptr);

/// Wraps an already trained parameter vector as a library gate.
CompiledGate make_gate(std::string name, const ComplexMatrix& u_ref, ansatz::AnsatzSpec spec,
                       const trainer::TrainReport& report, std::uint64_t seed, double threshold);

/// |tr(U_ref^dagger U)|^2 / d^2 for the gate's realized unitary.
double gate_fidelity(const CompiledGate& g, const ComplexMatrix& u_ref);

nlohmann::json ansatz_to_json(const ansatz::AnsatzSpec& spec);
ansatz::AnsatzSpec ansatz_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GateLibrary& lib);
/// Throws SchemaError on version mismatch, malformed content, or bad checksum.
GateLibrary from_json(const nlohmann::json& j);

/// Writes to a temporary file and renames it over `path`.
void save(const GateLibrary& lib, const std::filesystem::path& path);
GateLibrary load(const std::filesystem::path& path);

}  // namespace dqd::library
