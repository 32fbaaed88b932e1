#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dqd/demos.hpp"
#include "dqd/error.hpp"
#include "dqd/executor.hpp"
#include "library_fixture.hpp"
#include "maxcut_oracle.hpp"

using namespace dqd;
using namespace dqd::demos;

namespace {

const library::GateLibrary& lib() { return fixture::standard_library(); }

}  // namespace

TEST(Grover, ReferenceCircuit) {
  const auto ir = grover_reference_ir();
  EXPECT_EQ(ir.n_qubits, 2);
  EXPECT_EQ(ir.ops.size(), 12u);
  for (const auto& op : ir.ops) EXPECT_TRUE(op.gate == "H" || op.gate == "X" || op.gate == "CZ");
  const ComplexMatrix u = scheduler::ideal_unitary(ir);
  EXPECT_NEAR(std::norm(u(3, 0)), 1.0, 1e-12);
}

TEST(Grover, CompiledDemo) {
  const auto r = grover_demo(lib());
  ASSERT_EQ(r.distribution.size(), 4u);
  double sum = 0;
  for (double p : r.distribution) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_GE(r.distribution[3], 0.99);
  EXPECT_EQ(r.top_outcome, "11");
  EXPECT_NEAR(std::remainder(r.makespan, 6 * kPi), 0.0, 1e-9);
  EXPECT_GE(r.makespan, 13 * 6 * kPi / 2 - 1e-9);
  EXPECT_TRUE(scheduler::verify_schedule(r.schedule).ok());
  const auto j = to_json(r);
  EXPECT_GE(j.at("distribution").at("11").get<double>(), 0.99);
}

TEST(Grover, MissingGate) {
  library::GateLibrary partial;
  partial.add(*lib().find("H"));
  EXPECT_THROW(grover_demo(partial), std::invalid_argument);
}

TEST(Mbe, LossExamples) {
  const MaxCutProblem unit;
  EXPECT_DOUBLE_EQ(mbe_loss({0, 0, 0, 0}, unit), 0.0);
  const double t = std::tanh(1.0);
  EXPECT_NEAR(mbe_loss({1, -1, -1, 1}, unit), -3 * t * t, 1e-15);
  EXPECT_NEAR(mbe_loss({1, 1, 0.3, -0.2}, {2, 0, 0}), 2 * t * t, 1e-15);
}

TEST(Mbe, CutExamples) {
  const MaxCutProblem unit;
  EXPECT_DOUBLE_EQ(cut_count({0.5, -0.5, -0.5, 0.5}, unit), 3.0);
  EXPECT_DOUBLE_EQ(cut_count({0.5, 0.5, 0.5, 0.5}, unit), 0.0);
  EXPECT_DOUBLE_EQ(cut_count({0.5, -0.5, 0.5, 0.5}, unit), 1.0);
  EXPECT_DOUBLE_EQ(cut_count({0.0, -0.0, 0.0, 0.0}, unit), 0.0);  // R(0) = +1
}

TEST(Mbe, Properties) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1), w(0, 3);
  for (int i = 0; i < 1000; ++i) {
    const Expectations e{u(rng), u(rng), u(rng), u(rng)};
    const MaxCutProblem p{w(rng), w(rng), w(rng)};
    const double c = cut_count(e, p);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, p.w01 + p.w02 + p.w23 + 1e-12);
    const double unit_cut = cut_count(e, {});
    EXPECT_EQ(unit_cut, std::round(unit_cut));
    // Flipping qubit 0's pair together with qubit 1's pair leaves the loss unchanged.
    EXPECT_NEAR(mbe_loss({-e.z0, -e.z1, -e.x0, -e.x1}, p), mbe_loss(e, p), 1e-14);
  }
}

TEST(Mbe, MeasuredExpectations) {
  const auto e = measure_expectations(StateVector::basis(2, 1));
  EXPECT_NEAR(e.z0, 1.0, 1e-15);
  EXPECT_NEAR(e.z1, -1.0, 1e-15);
  EXPECT_NEAR(e.x0, 0.0, 1e-15);
}

TEST(MaxCut, ConstrainedOptimumOracle) {
  const double t = std::tanh(1 / std::sqrt(2.0));
  const double oracle = oracle::maxcut_optimum({});
  EXPECT_NEAR(oracle, -1.1121291790954388, 1e-9);
  EXPECT_NEAR(oracle, -3 * t * t, 1e-9);
}

TEST(MaxCut, IrLayout) {
  const auto ir = maxcut_ir();
  ASSERT_EQ(ir.ops.size(), 6u);
  for (const auto& op : ir.ops) {
    if (op.gate == "CZ") {
      EXPECT_FALSE(op.params.has_value());
    } else {
      ASSERT_TRUE(op.params.has_value());
      EXPECT_EQ(*op.params, ansatz::ParamVector(12, 1.0));
    }
  }
}

TEST(MaxCut, ReachesOptimalCut) {
  const auto r = maxcut_demo(lib());
  EXPECT_EQ(r.final_cut, 3.0);
  EXPECT_LE(r.best_round, 200);
  EXPECT_LE(std::abs(r.best_loss - oracle::maxcut_optimum({})), 0.05);
  EXPECT_DOUBLE_EQ(r.best_loss, *std::min_element(r.loss_history.begin(), r.loss_history.end()));
  EXPECT_EQ(r.loss_history.size(), 200u);
  EXPECT_TRUE(std::all_of(r.params.begin(), r.params.end(), [](double v) { return v >= 0; }));
  // The reported schedule reproduces the best loss on the executor.
  EXPECT_TRUE(scheduler::verify_schedule(r.schedule).ok());
  const auto state = executor::execute(r.schedule, StateVector::basis(2, 0)).final_state;
  EXPECT_NEAR(mbe_loss(measure_expectations(state), {}), r.best_loss, 1e-9);
}

TEST(MaxCut, GradientMatchesFiniteDifference) {
  const auto [spec, params] = scheduler::parametrize(maxcut_ir(0.7), lib());
  auto loss_at = [&](const ansatz::ParamVector& p) {
    const ComplexVector out = ansatz::evaluate(spec, p).col(0);
    return mbe_loss(measure_expectations(StateVector(out)), {});
  };
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  auto p = params;
  for (auto& v : p) v = u(rng);
  const auto g = mbe_gradient(spec, p, {});
  EXPECT_NEAR(g.loss, loss_at(p), 1e-12);
  ASSERT_EQ(g.grad.size(), 48u);
  for (std::size_t k = 0; k < g.grad.size(); ++k) {
    auto hi = p, lo = p;
    hi[k] += 1e-6;
    lo[k] -= 1e-6;
    const double fd = (loss_at(hi) - loss_at(lo)) / 2e-6;
    EXPECT_LE(std::abs(g.grad[k] - fd) / std::max(std::abs(fd), 1e-3), 1e-6) << k;
  }
}

TEST(MaxCut, Deterministic) {
  MaxCutConfig cfg;
  cfg.max_rounds = 40;
  const auto a = maxcut_demo(lib(), cfg);
  const auto b = maxcut_demo(lib(), cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.cut_history, b.cut_history);
  EXPECT_EQ(a.params, b.params);
  cfg.learning_rate = 0;
  EXPECT_THROW(maxcut_demo(lib(), cfg), ValidationError);
}

TEST(Json, MaxCutReport) {
  MaxCutConfig cfg;
  cfg.max_rounds = 3;
  const auto j = to_json(maxcut_demo(lib(), cfg));
  EXPECT_EQ(j.at("loss_history").size(), 3u);
  EXPECT_TRUE(j.contains("expectations"));
}
