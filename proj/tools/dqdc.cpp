// dqdc: compile gates, schedule circuits, and run the demos from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 constraint or validation failure,
// 3 non-convergence.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dqd/demos.hpp"
#include "dqd/error.hpp"
#include "dqd/executor.hpp"
#include "dqd/gates.hpp"
#include "dqd/kernels.hpp"
#include "dqd/library.hpp"
#include "dqd/scheduler.hpp"

namespace {

using nlohmann::json;
using namespace dqd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  bool json = false;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
  }
  std::filesystem::rename(tmp, target);
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json)
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

json gate_summary(const library::CompiledGate& g) {
  return {{"name", g.name},
          {"arity", g.arity},
          {"epsilon", g.epsilon},
          {"rounds", g.meta.rounds},
          {"learning_rate", g.meta.learning_rate},
          {"batch_size", g.meta.batch_size},
          {"seed", g.meta.seed},
          {"params", g.params}};
}

// ---------------------------------------------------------------------------

struct CompileGateArgs {
  std::string name;
  std::optional<double> lr;
  std::optional<int> max_rounds;
  std::optional<int> batch_size;
  std::optional<int> validate_every;
  std::string out;
  std::string history;
};

int compile_gate(const Globals& g, const CompileGateArgs& a) {
  library::CompileOptions opts;
  opts.learning_rate = a.lr;
  opts.max_rounds = a.max_rounds;
  opts.batch_size = a.batch_size;
  opts.validate_every = a.validate_every;
  opts.seed = g.seed;
  trainer::TrainReport report;
  try {
    auto gate = library::compile_standard(a.name, opts, &report);
    if (!a.history.empty()) write_text(a.history, trainer::to_json(report).dump(1) + "\n");
    if (!a.out.empty()) {
      library::GateLibrary lib;
      if (std::filesystem::exists(a.out)) lib = library::load(a.out);
      lib.add(gate);
      library::save(lib, a.out);
    }
    emit(g, gate_summary(gate),
         gate.name + ": epsilon " + fixed(gate.epsilon) + " after " +
             std::to_string(gate.meta.rounds) + " rounds (lr " + fixed(gate.meta.learning_rate) +
             ")\n");
    return kExitOk;
  } catch (const library::CompilationFailed& e) {
    if (!a.history.empty()) write_text(a.history, trainer::to_json(e.report()).dump(1) + "\n");
    emit(g, {{"name", a.name}, {"error", e.what()}, {"report", trainer::to_json(e.report())}},
         std::string("compilation failed: ") + e.what() + " (best epsilon " +
             fixed(e.report().final_error) + " after " + std::to_string(e.report().rounds_used) +
             " rounds)\n");
    return kExitNoConvergence;
  }
}

// ---------------------------------------------------------------------------

struct BuildLibraryArgs {
  std::string out = "lib.json";
  std::vector<std::string> gates;
};

int build_library(const Globals& g, const BuildLibraryArgs& a) {
  const auto names = a.gates.empty() ? gates::standard_names() : a.gates;
  for (const auto& n : names) {
    const auto& std_names = gates::standard_names();
    if (std::find(std_names.begin(), std_names.end(), gates::canonical_name(n)) == std_names.end())
      throw std::invalid_argument("unknown standard gate '" + n + "'");
  }
  std::vector<std::optional<library::CompiledGate>> compiled(names.size());
  std::vector<std::string> failures(names.size());
  kernels::for_each_index(names.size(), [&](std::size_t i) {
    library::CompileOptions opts;
    opts.seed = g.seed;
    try {
      compiled[i] = library::compile_standard(names[i], opts);
    } catch (const library::CompilationFailed& e) {
      failures[i] = e.what();
    }
  });

  library::GateLibrary lib;
  json gates_json = json::array();
  std::string text;
  bool all_ok = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (compiled[i]) {
      gates_json.push_back(gate_summary(*compiled[i]));
      text += compiled[i]->name + ": epsilon " + fixed(compiled[i]->epsilon) + ", " +
              std::to_string(compiled[i]->meta.rounds) + " rounds\n";
      lib.add(*compiled[i]);
    } else {
      all_ok = false;
      gates_json.push_back({{"name", names[i]}, {"error", failures[i]}});
      text += names[i] + ": FAILED (" + failures[i] + ")\n";
    }
  }
  if (!all_ok) {
    emit(g, {{"gates", gates_json}, {"written", false}}, text + "library not written\n");
    return kExitNoConvergence;
  }
  library::save(lib, a.out);
  emit(g, {{"gates", gates_json}, {"written", true}, {"path", a.out}},
       text + "wrote " + std::to_string(lib.gates.size()) + " gates to " + a.out + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompileCircuitArgs {
  std::string ir;
  std::string lib;
  std::string out = "sched.json";
};

int compile_circuit(const Globals& g, const CompileCircuitArgs& a) {
  const auto ir = scheduler::circuit_from_json(read_json(a.ir));
  const auto lib = library::load(a.lib);
  const auto s = scheduler::schedule(ir, lib);
  write_text(a.out, scheduler::to_json(s).dump(1) + "\n");
  emit(g,
       {{"path", a.out},
        {"n_qubits", s.n_qubits},
        {"makespan", s.makespan()},
        {"slots", s.n_slots()},
        {"segments", s.segments.size()}},
       "scheduled " + std::to_string(ir.ops.size()) + " ops on " + std::to_string(s.n_qubits) +
           " qubits: " + std::to_string(s.n_slots()) + " slots, makespan " +
           fixed(s.makespan() / kPi) + " pi\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string schedule;
  std::string init;
  std::string csv;
};

int run(const Globals& g, const RunArgs& a) {
  const auto s = scheduler::schedule_from_json(read_json(a.schedule));
  const std::string init = a.init.empty() ? std::string(static_cast<std::size_t>(s.n_qubits), '0') : a.init;
  const auto result = executor::execute(s, StateVector::from_bitstring(init));
  const auto dist = executor::measure_distribution(result.final_state);

  json probs = json::object();
  std::string text = "basis probability\n";
  std::string csv = "basis,probability\n";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const auto label = executor::basis_label(i, s.n_qubits);
    probs[label] = dist[i];
    text += label + " " + fixed(dist[i], 10) + "\n";
    std::ostringstream row;
    row << label << ',' << std::setprecision(17) << dist[i] << '\n';
    csv += row.str();
  }
  json expect = json::array();
  text += "qubit <Z> <X>\n";
  for (int q = 0; q < s.n_qubits; ++q) {
    const double z = executor::expectation(result.final_state, q, executor::Axis::Z);
    const double x = executor::expectation(result.final_state, q, executor::Axis::X);
    expect.push_back({{"qubit", q}, {"z", z}, {"x", x}});
    text += std::to_string(q) + " " + fixed(z) + " " + fixed(x) + "\n";
  }
  if (!a.csv.empty()) write_text(a.csv, csv);
  emit(g,
       {{"init", init}, {"makespan", result.makespan}, {"distribution", probs}, {"expectations", expect}},
       text);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string schedule;
  std::optional<double> j_max;
};

int verify(const Globals& g, const VerifyArgs& a) {
  const auto s = scheduler::schedule_from_json(read_json(a.schedule));
  const auto report = scheduler::verify_schedule(s, a.j_max);
  std::string text;
  for (const auto& c : report.checks) {
    text += (c.passed ? "[PASS] " : "[FAIL] ") + c.name + "\n";
    for (const auto& v : c.violations) text += "  " + v + "\n";
  }
  for (const auto& w : report.warnings) text += "warning: " + w + "\n";
  emit(g, scheduler::to_json(report), text);
  return report.ok() ? kExitOk : kExitInvalid;
}

// ---------------------------------------------------------------------------

struct GroverArgs {
  std::string lib;
};

int demo_grover(const Globals& g, const GroverArgs& a) {
  const auto r = demos::grover_demo(library::load(a.lib), g.seed);
  std::string text = "outcome probability\n";
  for (std::size_t i = 0; i < r.distribution.size(); ++i)
    text += executor::basis_label(i, 2) + " " + fixed(r.distribution[i], 10) + "\n";
  text += "top outcome " + r.top_outcome + ", makespan " + fixed(r.makespan / kPi) + " pi\n";
  emit(g, demos::to_json(r), text);
  return kExitOk;
}

struct MaxCutArgs {
  std::string lib;
  double lr = 0.1;
  int max_rounds = 200;
  std::string csv;
  std::string schedule_out;
};

int demo_maxcut(const Globals& g, const MaxCutArgs& a) {
  demos::MaxCutConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.max_rounds = a.max_rounds;
  cfg.seed = g.seed;
  const auto r = demos::maxcut_demo(library::load(a.lib), cfg);
  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "round,loss,cut\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.loss_history.size(); ++i)
      csv << i + 1 << ',' << r.loss_history[i] << ',' << r.cut_history[i] << '\n';
    write_text(a.csv, csv.str());
  }
  if (!a.schedule_out.empty()) write_text(a.schedule_out, scheduler::to_json(r.schedule).dump(1) + "\n");
  const auto first_cut = std::find(r.cut_history.begin(), r.cut_history.end(), r.final_cut);
  const std::string text =
      "best loss " + fixed(r.best_loss, 10) + " at round " + std::to_string(r.best_round) + "\n" +
      "cut " + fixed(r.final_cut) + " (first reached at round " +
      std::to_string(first_cut - r.cut_history.begin() + 1) + ")\n" + "<Z0> " +
      fixed(r.expectations.z0) + " <Z1> " + fixed(r.expectations.z1) + " <X0> " +
      fixed(r.expectations.x0) + " <X1> " + fixed(r.expectations.x1) + "\n";
  emit(g, demos::to_json(r), text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level gate compiler and scheduler for quantum-dot spin chains", "dqdc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file of option overrides");
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for state sampling and training")->capture_default_str();
  app.add_flag("--json", globals.json, "Machine-readable output on stdout");

  CompileGateArgs cg;
  auto* compile_cmd = app.add_subcommand("compile-gate", "Train one standard gate");
  compile_cmd->add_option("name", cg.name, "Gate name (H T S X Y Z CX CX_10 CZ)")->required();
  compile_cmd->add_option("--lr", cg.lr, "Learning rate");
  compile_cmd->add_option("--max-rounds", cg.max_rounds, "Round cap")->check(CLI::PositiveNumber);
  compile_cmd->add_option("--batch-size", cg.batch_size, "Training states per step")
      ->check(CLI::PositiveNumber);
  compile_cmd->add_option("--validate-every", cg.validate_every, "Validation stride")
      ->check(CLI::PositiveNumber);
  compile_cmd->add_option("--out", cg.out, "Library file to add the gate to");
  compile_cmd->add_option("--history", cg.history, "Write the training report (JSON)");

  BuildLibraryArgs bl;
  auto* build_cmd = app.add_subcommand("build-library", "Compile the standard gate set");
  build_cmd->add_option("--out", bl.out, "Output library file")->capture_default_str();
  build_cmd->add_option("--gates", bl.gates, "Subset of gates to compile");

  CompileCircuitArgs cc;
  auto* circuit_cmd = app.add_subcommand("compile-circuit", "Schedule a logical circuit");
  circuit_cmd->add_option("ir", cc.ir, "Circuit JSON")->required()->check(CLI::ExistingFile);
  circuit_cmd->add_option("--lib", cc.lib, "Gate library")->required()->check(CLI::ExistingFile);
  circuit_cmd->add_option("--out", cc.out, "Output schedule file")->capture_default_str();

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Execute a schedule on the chain simulator");
  run_cmd->add_option("schedule", ra.schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--init", ra.init, "Initial basis state, qubit 0 first (default all zeros)");
  run_cmd->add_option("--csv", ra.csv, "Write basis,probability CSV");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check a schedule against the layout rules");
  verify_cmd->add_option("schedule", va.schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--j-max", va.j_max, "Warn about pulses above this strength");

  auto* demo_cmd = app.add_subcommand("demo", "End-to-end demonstrations");
  demo_cmd->require_subcommand(1);
  GroverArgs ga;
  auto* grover_cmd = demo_cmd->add_subcommand("grover", "Two-qubit Grover search for |11>");
  grover_cmd->add_option("--lib", ga.lib, "Gate library")->required()->check(CLI::ExistingFile);
  MaxCutArgs ma;
  auto* maxcut_cmd = demo_cmd->add_subcommand("maxcut", "Max-Cut with trainable RY slots");
  maxcut_cmd->add_option("--lib", ma.lib, "Gate library")->required()->check(CLI::ExistingFile);
  maxcut_cmd->add_option("--lr", ma.lr, "Learning rate")->capture_default_str();
  maxcut_cmd->add_option("--max-rounds", ma.max_rounds, "Training rounds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  maxcut_cmd->add_option("--csv", ma.csv, "Write round,loss,cut CSV");
  maxcut_cmd->add_option("--schedule-out", ma.schedule_out, "Write the trained schedule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compile_cmd) return compile_gate(globals, cg);
    if (*build_cmd) return build_library(globals, bl);
    if (*circuit_cmd) return compile_circuit(globals, cc);
    if (*run_cmd) return run(globals, ra);
    if (*verify_cmd) return verify(globals, va);
    if (*grover_cmd) return demo_grover(globals, ga);
    if (*maxcut_cmd) return demo_maxcut(globals, ma);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const library::CompilationFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    // Validation, constraint, schema and structural errors all land here.
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}
