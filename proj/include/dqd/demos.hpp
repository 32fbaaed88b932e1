#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dqd/executor.hpp"
#include "dqd/library.hpp"
#include "dqd/scheduler.hpp"
#include "dqd/trainer.hpp"

namespace dqd::demos {

/// Hadamard transform, CZ oracle marking |11>, and the H X CZ X H diffusion.
scheduler::CircuitIR grover_reference_ir();

struct GroverReport {
  std::vector<double> distribution;
  std::string top_outcome;
  double makespan = 0.0;
  scheduler::Schedule schedule;
};

GroverReport grover_demo(const library::GateLibrary& lib, std::uint64_t seed = 0);

/// <sz_0>, <sz_1>, <sx_0>, <sx_1>: vertices 0, 1, 2, 3 of the encoded graph.
struct Expectations {
  double z0 = 0.0;
  double z1 = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;
};

/// Edge weights of the 4-vertex, 3-edge graph (0-1, 0-2, 2-3).
struct MaxCutProblem {
  double w01 = 1.0;
  double w02 = 1.0;
  double w23 = 1.0;
};

double mbe_loss(const Expectations& e, const MaxCutProblem& w);

/// Rounded cut value; R(x) = +1 for x >= 0, else -1.
double cut_count(const Expectations& e, const MaxCutProblem& w);

Expectations measure_expectations(const StateVector& state);

struct MbeGradient {
  double loss = 0.0;
  Expectations e;
  std::vector<double> grad;
};

/// MBE loss of the ansatz output from |00> and its gradient, chained through
/// the expectation values with one forward and one backward sweep.
MbeGradient mbe_gradient(const ansatz::AnsatzSpec& spec, const ansatz::ParamVector& params,
                         const MaxCutProblem& w);

/// Two layers of [RY@q0, RY@q1, CZ(q0,q1)]; each RY is a dynamic slot of 12
/// trainable native gates, initialised to `init`.
scheduler::CircuitIR maxcut_ir(double init = 1.0);

struct MaxCutConfig {
  double learning_rate = 0.1;
  int max_rounds = 200;
  std::uint64_t seed = 0;
  MaxCutProblem problem;
  trainer::AdamConfig adam;
};

struct MaxCutReport {
  std::vector<double> loss_history;  // loss at the start of each round
  std::vector<double> cut_history;
  double best_loss = 0.0;
  double final_cut = 0.0;
  int best_round = 0;
  ansatz::ParamVector params;  // best-so-far
  Expectations expectations;   // at best params
  scheduler::CircuitIR circuit;
  scheduler::Schedule schedule;
};

/// Trains the RY pulse strengths directly against the MBE loss.
MaxCutReport maxcut_demo(const library::GateLibrary& lib, const MaxCutConfig& cfg = {});

nlohmann::json to_json(const GroverReport& r);
nlohmann::json to_json(const MaxCutReport& r);

}  // namespace dqd::demos
