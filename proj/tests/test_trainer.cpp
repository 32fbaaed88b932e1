#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dqd/error.hpp"
#include "dqd/gates.hpp"
#include "dqd/trainer.hpp"
#include "oracles.hpp"

using namespace dqd;
using namespace dqd::trainer;
using ansatz::ParamVector;

namespace {

ParamVector random_params(std::mt19937_64& rng, std::size_t n, double lo = 0.0) {
  std::uniform_real_distribution<double> u(lo, 2.0);
  ParamVector p(n);
  for (auto& v : p) v = u(rng);
  return p;
}

double fd_gradient(const ansatz::AnsatzSpec& spec, ParamVector p, std::size_t k,
                   const StateVector& in, const StateVector& target) {
  const double x = p[k];
  return oracle::central_difference_scalar(
      [&](double v) {
        p[k] = v;
        return state_loss(StateVector(ComplexVector(ansatz::evaluate(spec, p) * in.amplitudes())),
                          target);
      },
      x, 1e-6);
}

}  // namespace

TEST(Loss, Examples) {
  const auto zero = StateVector::basis(1, 0);
  const auto one = StateVector::basis(1, 1);
  const auto plus = StateVector::normalized(ComplexVector{{1, 1}});
  EXPECT_DOUBLE_EQ(state_loss(zero, zero), -1.0);
  EXPECT_DOUBLE_EQ(state_loss(zero, one), 0.0);
  EXPECT_NEAR(state_loss(plus, zero), -0.5, 1e-15);
  EXPECT_THROW(state_loss(zero, StateVector::basis(2, 0)), ValidationError);
}

TEST(Gradients, MatchFiniteDifferencesOnRandomDraws) {
  std::mt19937_64 rng(23);
  const auto one = ansatz::single_qubit_ansatz();
  const auto two = ansatz::two_qubit_ansatz();
  for (int draw = 0; draw < 50; ++draw) {
    const auto& spec = draw % 5 == 4 ? two : one;
    const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits();
    const auto p = random_params(rng, spec.n_params(), 1e-3);
    const auto in = StateVector::normalized(oracle::random_state(rng, dim));
    const auto target = StateVector::normalized(oracle::random_state(rng, dim));
    const auto g = loss_gradients(spec, p, in, target);
    ASSERT_EQ(g.size(), spec.n_params());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double fd = fd_gradient(spec, p, k, in, target);
      EXPECT_LE(std::abs(g[k] - fd) / std::max(std::abs(fd), 1e-3), 1e-6)
          << "draw " << draw << " param " << k;
    }
  }
}

TEST(Gradients, StationaryWhenOutputEqualsTarget) {
  std::mt19937_64 rng(5);
  const auto spec = ansatz::single_qubit_ansatz();
  const auto p = random_params(rng, 12, 0.1);
  const auto in = StateVector::normalized(oracle::random_state(rng, 2));
  const StateVector target(ComplexVector(ansatz::evaluate(spec, p) * in.amplitudes()));
  const auto g = loss_gradients(spec, p, in, target);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(g[k], fd_gradient(spec, p, k, in, target), 1e-6);
    EXPECT_NEAR(g[k], 0.0, 1e-10);
  }
}

TEST(Gradients, FiniteOnZeroBoundary) {
  const auto spec = ansatz::two_qubit_ansatz();
  const auto g = loss_gradients(spec, ParamVector(84, 0.0), StateVector::basis(2, 0),
                                StateVector::basis(2, 3));
  for (double v : g) EXPECT_TRUE(std::isfinite(v));
}

TEST(Adam, ZeroGradientLeavesParams) {
  ParamVector p{0.5, 1.0, 2.0};
  const auto before = p;
  AdamState st(3);
  adam_step(p, std::vector<double>{0, 0, 0}, st, 0.1);
  EXPECT_EQ(p, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ParamVector p{1.0, 1.0, 1.0};
  AdamState st(3);
  adam_step(p, std::vector<double>{0.3, -2.0, 1e-3}, st, 0.05);
  EXPECT_NEAR(p[0], 0.95, 1e-6);
  EXPECT_NEAR(p[1], 1.05, 1e-6);
  EXPECT_NEAR(p[2], 0.95, 1e-4);
  EXPECT_EQ(st.step, 1);
}

TEST(Adam, ProjectsOntoNonNegative) {
  ParamVector p{0.0, 0.01};
  AdamState st(2);
  adam_step(p, std::vector<double>{1.0, 5.0}, st, 0.1);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[1], 0.0);
}

TEST(Adam, MatchesReferenceRecurrence) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  ParamVector p{5, 5, 5, 5};
  std::vector<double> m(4, 0), v(4, 0);
  auto ref = p;
  AdamState st(4);
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  for (int t = 1; t <= 50; ++t) {
    std::vector<double> g(4);
    for (auto& x : g) x = n(rng);
    adam_step(p, g, st, lr);
    for (int k = 0; k < 4; ++k) {
      m[k] = b1 * m[k] + (1 - b1) * g[k];
      v[k] = b2 * v[k] + (1 - b2) * g[k] * g[k];
      const double mh = m[k] / (1 - std::pow(b1, t));
      const double vh = v[k] / (1 - std::pow(b2, t));
      ref[k] = std::max(0.0, ref[k] - lr * mh / (std::sqrt(vh) + eps));
    }
  }
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], ref[k], 1e-12);
}

TEST(Validate, ExactRealizationHasZeroError) {
  const ansatz::AnsatzSpec spec(1, {{kPi, {ansatz::Slot::one(0, ansatz::Binding::param(0))}}});
  const ParamVector p{0.7};
  const auto [train, val] = states::sample_sets(1, 1, 100, 3);
  EXPECT_LE(validate(spec, p, ansatz::evaluate(spec, p), val), 1e-12);
  EXPECT_LE(validate(ansatz::single_qubit_ansatz(), ParamVector(12, 0.0), pauli::I(), val), 1e-12);
}

TEST(Validate, EqualsBruteForceMaximum) {
  const auto spec = ansatz::single_qubit_ansatz();
  const ParamVector p(12, 1.0);
  const auto [train, val] = states::sample_sets(1, 1, 100, 8);
  const ComplexMatrix u = oracle::taylor_propagator(oracle::sz() + oracle::sx(), kPi / 2);
  ComplexMatrix total = ComplexMatrix::Identity(2, 2);
  for (int k = 0; k < 12; ++k) total = u * total;
  double worst = 0;
  for (const auto& s : val.states) {
    const ComplexVector a = pauli::X() * s.amplitudes();
    const ComplexVector b = total * s.amplitudes();
    worst = std::max(worst, 1 - std::norm(a.dot(b)));
  }
  EXPECT_NEAR(validate(spec, p, pauli::X(), val), worst, 1e-12);
  EXPECT_THROW(validate(spec, p, pauli::X(), states::StateSet{}), ValidationError);
}

TEST(Config, Checks) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.check());
  cfg.learning_rate = 0;
  EXPECT_THROW(cfg.check(), ValidationError);
  cfg = {};
  cfg.error_threshold = -1;
  EXPECT_THROW(cfg.check(), ValidationError);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.check(), ValidationError);
}

class TrainStandard : public ::testing::TestWithParam<const char*> {};

TEST_P(TrainStandard, ConvergesAndStaysNonNegative) {
  const auto u_ref = *gates::reference_unitary(GetParam());
  const auto spec = ansatz::single_qubit_ansatz();
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  bool negative = false;
  cfg.on_round = [&](int, const ParamVector& p) {
    negative |= std::any_of(p.begin(), p.end(), [](double v) { return v < 0; });
  };
  const auto r = train(u_ref, spec, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.rounds_used, 4000);
  EXPECT_LE(r.final_error, 1e-5);
  EXPECT_FALSE(negative);
  EXPECT_EQ(r.loss_history.size(), static_cast<std::size_t>(r.rounds_used));
  EXPECT_EQ(r.error_history.size(), static_cast<std::size_t>(r.rounds_used));
  EXPECT_DOUBLE_EQ(r.final_error, *std::min_element(r.error_history.begin(), r.error_history.end()));
  // Small state infidelity bounds the operator distance up to phase.
  EXPECT_LE(oracle::phase_aligned_distance(ansatz::evaluate(spec, r.params), u_ref), 0.01);
  const auto [train_set, val] = states::sample_sets(1, cfg.n_train, cfg.n_val, cfg.seed);
  EXPECT_DOUBLE_EQ(validate(spec, r.params, u_ref, val), r.final_error);
}

INSTANTIATE_TEST_SUITE_P(Gates, TrainStandard, ::testing::Values("H", "X", "I"));

TEST(Train, IdentityBaseline) {
  const auto r = train(pauli::I(), ansatz::single_qubit_ansatz(), {});
  EXPECT_TRUE(r.converged);
  // Regression baseline recorded from the reference implementation.
  EXPECT_EQ(r.rounds_used, 133);
}

TEST(Train, NonConvergenceIsReported) {
  TrainConfig cfg;
  cfg.max_rounds = 3;
  const auto r = train(*gates::reference_unitary("Y"), ansatz::single_qubit_ansatz(), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.rounds_used, 3);
  EXPECT_GT(r.final_error, cfg.error_threshold);
}

TEST(Train, ValidationStrideSubsamples) {
  TrainConfig cfg;
  cfg.max_rounds = 10;
  cfg.validate_every = 4;
  const auto r = train(*gates::reference_unitary("Y"), ansatz::single_qubit_ansatz(), cfg);
  EXPECT_EQ(r.loss_history.size(), 10u);
  EXPECT_EQ(r.error_history.size(), 3u);  // rounds 4, 8 and the final round
}

TEST(Train, BitwiseDeterministic) {
  TrainConfig cfg;
  cfg.max_rounds = 60;
  cfg.seed = 99;
  cfg.batch_size = 3;
  const auto u = *gates::reference_unitary("T");
  const auto a = train(u, ansatz::single_qubit_ansatz(), cfg);
  const auto b = train(u, ansatz::single_qubit_ansatz(), cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.error_history, b.error_history);
  EXPECT_EQ(a.params, b.params);
  cfg.seed = 100;
  EXPECT_NE(train(u, ansatz::single_qubit_ansatz(), cfg).loss_history, a.loss_history);
}

TEST(Train, RejectsMismatchedReference) {
  EXPECT_THROW(train(pauli::I(), ansatz::two_qubit_ansatz(), {}), ValidationError);
}

TEST(Retry, FallsBackToNextRate) {
  TrainConfig cfg;
  cfg.max_rounds = 400;
  const auto u = *gates::reference_unitary("H");
  const std::vector<double> rates{1e-6, 0.05};
  const auto r = train_with_retry(u, ansatz::single_qubit_ansatz(), cfg, rates);
  EXPECT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(r.learning_rate, 0.05);
}

TEST(Report, Json) {
  TrainConfig cfg;
  cfg.max_rounds = 2;
  const auto r = train(pauli::X(), ansatz::single_qubit_ansatz(), cfg);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("rounds_used"), 2);
  EXPECT_EQ(j.at("loss_history").size(), 2u);
  EXPECT_EQ(j.at("params").size(), 12u);
}
