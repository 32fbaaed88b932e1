#include "dqd/library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dqd/error.hpp"
#include "dqd/gates.hpp"

namespace dqd::library {

using nlohmann::json;

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json binding_to_json(const ansatz::Binding& b) {
  if (b.kind == ansatz::Binding::Kind::Fixed) return {{"fixed", b.value}};
  return {{"param", b.index}};
}

ansatz::Binding binding_from_json(const json& j) {
  if (j.contains("fixed")) return ansatz::Binding::fixed(j.at("fixed").get<double>());
  return ansatz::Binding::param(j.at("param").get<std::size_t>());
}

json slot_to_json(const ansatz::Slot& s, double dt) {
  using K = ansatz::Slot::Kind;
  switch (s.kind) {
    case K::Idle:
      return {{"kind", "idle"}, {"qubits", {s.qubit}}, {"dt", dt}};
    case K::OneQubit:
      return {{"kind", "one"}, {"qubits", {s.qubit}}, {"dt", dt}, {"bindings", {binding_to_json(s.first)}}};
    case K::TwoQubit:
      return {{"kind", "two"},
              {"qubits", {s.qubit, s.qubit + 1}},
              {"dt", dt},
              {"bindings", {binding_to_json(s.first), binding_to_json(s.second)}}};
  }
  return {};
}

ansatz::Slot slot_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto qubits = j.at("qubits").get<std::vector<int>>();
  if (qubits.empty()) throw SchemaError("slot without qubits");
  if (kind == "idle") return ansatz::Slot::idle(qubits[0]);
  const auto& b = j.at("bindings");
  if (kind == "one") return ansatz::Slot::one(qubits[0], binding_from_json(b.at(0)));
  if (kind == "two") {
    if (qubits.size() != 2 || qubits[1] != qubits[0] + 1)
      throw SchemaError("two-qubit slot must name adjacent qubits");
    return ansatz::Slot::two(qubits[0], binding_from_json(b.at(0)), binding_from_json(b.at(1)));
  }
  throw SchemaError("unknown slot kind '" + kind + "'");
}

json gate_to_json(const CompiledGate& g) {
  return {{"name", g.name},
          {"arity", g.arity},
          {"epsilon", g.epsilon},
          {"meta",
           {{"learning_rate", g.meta.learning_rate},
            {"rounds", g.meta.rounds},
            {"seed", g.meta.seed},
            {"threshold", g.meta.threshold},
            {"batch_size", g.meta.batch_size}}},
          {"ansatz", ansatz_to_json(g.spec)},
          {"params", g.params}};
}

CompiledGate gate_from_json(const json& j) {
  CompiledGate g;
  g.name = j.at("name").get<std::string>();
  g.arity = j.at("arity").get<int>();
  g.epsilon = j.at("epsilon").get<double>();
  const auto& m = j.at("meta");
  g.meta.learning_rate = m.at("learning_rate").get<double>();
  g.meta.rounds = m.at("rounds").get<int>();
  g.meta.seed = m.at("seed").get<std::uint64_t>();
  g.meta.threshold = m.at("threshold").get<double>();
  g.meta.batch_size = m.value("batch_size", 1);
  g.spec = ansatz_from_json(j.at("ansatz"));
  g.params = j.at("params").get<ansatz::ParamVector>();
  if (g.spec.n_qubits() != g.arity) throw SchemaError("gate arity does not match its ansatz");
  ansatz::check_params(g.spec, g.params);
  return g;
}

}  // namespace

const CompiledGate* GateLibrary::find(const std::string& name) const {
  const auto it = gates.find(gates::canonical_name(name));
  return it == gates.end() ? nullptr : &it->second;
}

void GateLibrary::add(CompiledGate gate) {
  if (std::abs(gate.spec.total_duration() - kGateDuration) > 1e-9)
    throw StructuralError("library gates must all run for 6 pi");
  if (!(gate.epsilon <= gate.meta.threshold))
    throw ValidationError("gate '" + gate.name + "' was not admitted at its threshold");
  ansatz::check_params(gate.spec, gate.params);
  gate.name = gates::canonical_name(gate.name);
  gates.insert_or_assign(gate.name, std::move(gate));
}

double default_learning_rate(const std::string& name) {
  const auto n = gates::canonical_name(name);
  if (n == "CX_01" || n == "CX_10") return 0.1;
  if (n == "CZ") return 0.02;
  return 0.05;
}

CompiledGate make_gate(std::string name, const ComplexMatrix& u_ref, ansatz::AnsatzSpec spec,
                       const trainer::TrainReport& report, std::uint64_t seed, double threshold) {
  CompiledGate g;
  g.name = gates::canonical_name(name);
  g.arity = spec.n_qubits();
  g.spec = std::move(spec);
  g.params = report.params;
  g.epsilon = report.final_error;
  g.meta = {report.learning_rate, report.rounds_used, seed, threshold};
  if (!report.converged || report.final_error > threshold)
    throw CompilationFailed("gate '" + g.name + "' did not reach the error threshold", report);
  const double f = gate_fidelity(g, u_ref);
  if (f < 1.0 - 2.0 * g.epsilon)
    throw CompilationFailed("gate '" + g.name + "' operator fidelity inconsistent with epsilon",
                            report);
  return g;
}

int default_batch_size(const std::string& name) {
  const auto u = gates::reference_unitary(gates::canonical_name(name));
  return u && u->rows() == 4 ? 8 : 1;
}

CompiledGate compile_standard(const std::string& raw_name, const CompileOptions& opts,
                              trainer::TrainReport* report_out) {
  const std::string name = gates::canonical_name(raw_name);
  const auto& names = gates::standard_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown standard gate '" + raw_name + "'");
  const ComplexMatrix u_ref = *gates::reference_unitary(name);
  const bool two = u_ref.rows() == 4;

  trainer::TrainConfig cfg;
  cfg.learning_rate = opts.learning_rate.value_or(default_learning_rate(name));
  cfg.max_rounds = opts.max_rounds.value_or(two ? 8000 : 4000);
  cfg.seed = opts.seed.value_or(0);
  cfg.validate_every = opts.validate_every.value_or(1);
  cfg.batch_size = opts.batch_size.value_or(default_batch_size(name));
  cfg.error_threshold = kAdmissionThreshold;

  auto spec = two ? ansatz::two_qubit_ansatz() : ansatz::single_qubit_ansatz();
  std::vector<double> rates{cfg.learning_rate};
  rates.insert(rates.end(), opts.fallback_rates.begin(), opts.fallback_rates.end());
  const auto report = trainer::train_with_retry(u_ref, spec, cfg, rates);
  if (report_out) *report_out = report;
  auto gate = make_gate(name, u_ref, std::move(spec), report, cfg.seed, cfg.error_threshold);
  gate.meta.batch_size = cfg.batch_size;
  return gate;
}

double gate_fidelity(const CompiledGate& g, const ComplexMatrix& u_ref) {
  const ComplexMatrix u = ansatz::evaluate(g.spec, g.params);
  if (u.rows() != u_ref.rows()) throw ValidationError("gate_fidelity: dimension mismatch");
  return trace_fidelity(u_ref, u);
}

json ansatz_to_json(const ansatz::AnsatzSpec& spec) {
  json slices = json::array();
  for (const auto& s : spec.slices()) {
    json slots = json::array();
    for (const auto& slot : s.slots) slots.push_back(slot_to_json(slot, s.dt));
    slices.push_back({{"dt", s.dt}, {"slots", std::move(slots)}});
  }
  return {{"n_qubits", spec.n_qubits()}, {"slices", std::move(slices)}};
}

ansatz::AnsatzSpec ansatz_from_json(const json& j) {
  std::vector<ansatz::Slice> slices;
  for (const auto& s : j.at("slices")) {
    ansatz::Slice slice;
    slice.dt = s.at("dt").get<double>();
    for (const auto& slot : s.at("slots")) {
      if (slot.contains("dt") && slot.at("dt").get<double>() != slice.dt)
        throw SchemaError("slot duration differs from its slice");
      slice.slots.push_back(slot_from_json(slot));
    }
    slices.push_back(std::move(slice));
  }
  return ansatz::AnsatzSpec(j.at("n_qubits").get<int>(), std::move(slices));
}

json to_json(const GateLibrary& lib) {
  json gates = json::array();
  for (const auto& [name, g] : lib.gates) gates.push_back(gate_to_json(g));
  json out{{"format", "dqd-gate-library"}, {"version", lib.version}, {"gates", gates}};
  out["checksum"] = fnv1a_hex(gates.dump());
  return out;
}

GateLibrary from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "dqd-gate-library")
      throw SchemaError("not a gate library file");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion)
      throw SchemaError("unsupported gate library version " + std::to_string(version));
    const auto& gates = j.at("gates");
    if (!gates.is_array()) throw SchemaError("gates must be an array");
    if (j.at("checksum").get<std::string>() != fnv1a_hex(gates.dump()))
      throw SchemaError("gate library checksum mismatch");
    GateLibrary lib;
    lib.version = version;
    for (const auto& g : gates) {
      auto gate = gate_from_json(g);
      if (lib.gates.count(gate.name)) throw SchemaError("duplicate gate '" + gate.name + "'");
      lib.add(std::move(gate));
    }
    return lib;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("gate library schema error: ") + e.what());
  } catch (const ValidationError& e) {
    throw SchemaError(std::string("gate library schema error: ") + e.what());
  } catch (const StructuralError& e) {
    throw SchemaError(std::string("gate library schema error: ") + e.what());
  } catch (const ConstraintViolation& e) {
    throw SchemaError(std::string("gate library schema error: ") + e.what());
  }
}

void save(const GateLibrary& lib, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << to_json(lib).dump(1) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

GateLibrary load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("gate library is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

}  // namespace dqd::library
