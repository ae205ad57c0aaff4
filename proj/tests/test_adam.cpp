#include <gtest/gtest.h>

#include <cmath>

#include "trajcast/nn/adam.hpp"

using namespace trajcast;

namespace {

// tiny dense-only model: 2 weights + 1 bias
ModelParams tiny_params() {
  ModelConfig c;
  c.input_size = 2;
  c.lstm_layers = {};
  c.dense_layers = {};
  c.bypass = BypassMode::none;
  c.output_size = 1;
  ModelParams p = make_params(c);
  p.output.w(0, 0) = 0.5;
  p.output.w(0, 1) = -0.25;
  p.output.b[0] = 0.125;
  return p;
}

// single-coordinate hand evaluation of the bias-corrected update
double hand_adam_delta(double g, double& m, double& v, size_t step, const AdamConfig& cfg) {
  m = cfg.beta1 * m + (1 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
  const double m_hat = m / (1 - std::pow(cfg.beta1, static_cast<double>(step)));
  const double v_hat = v / (1 - std::pow(cfg.beta2, static_cast<double>(step)));
  return -cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
}

}  // namespace

TEST(Adam, ZeroGradientIsAFixedPoint) {
  ModelParams p = tiny_params();
  const ModelParams before = p;
  ModelParams g = zeros_like(p);
  AdamState s = AdamState::make(p);
  for (int i = 0; i < 5; ++i) adam_update(p, g, s);
  EXPECT_EQ(p.output.w.a, before.output.w.a);
  EXPECT_EQ(p.output.b, before.output.b);
  EXPECT_EQ(s.step, 5u);
}

TEST(Adam, FirstStepIsApproximatelyLrTimesSign) {
  const AdamConfig cfg;
  for (double g0 : {0.37, -2.0, 1e-3, 250.0}) {
    ModelParams p = tiny_params();
    const double before = p.output.w(0, 0);
    ModelParams g = zeros_like(p);
    g.output.w(0, 0) = g0;
    AdamState s = AdamState::make(p);
    adam_update(p, g, s, cfg);
    const double delta = p.output.w(0, 0) - before;
    const double expected = -cfg.learning_rate * (g0 > 0 ? 1.0 : -1.0);
    EXPECT_NEAR(delta, expected, 0.01 * cfg.learning_rate) << "g=" << g0;
    // untouched coordinates stay put
    EXPECT_DOUBLE_EQ(p.output.w(0, 1), -0.25);

    double m = 0, v = 0;
    EXPECT_NEAR(delta, hand_adam_delta(g0, m, v, 1, cfg), 1e-15);
  }
}

TEST(Adam, SecondIdenticalStepNoLargerThanFirst) {
  const AdamConfig cfg;
  const double g0 = 0.8;
  ModelParams p = tiny_params();
  ModelParams g = zeros_like(p);
  g.output.w(0, 0) = g0;
  AdamState s = AdamState::make(p);

  const double x0 = p.output.w(0, 0);
  adam_update(p, g, s, cfg);
  const double step1 = std::abs(p.output.w(0, 0) - x0);
  const double x1 = p.output.w(0, 0);
  adam_update(p, g, s, cfg);
  const double step2 = std::abs(p.output.w(0, 0) - x1);
  EXPECT_LE(step2, step1 * 1.01);

  double m = 0, v = 0;
  const double h1 = std::abs(hand_adam_delta(g0, m, v, 1, cfg));
  const double h2 = std::abs(hand_adam_delta(g0, m, v, 2, cfg));
  EXPECT_NEAR(step1, h1, 1e-15);
  EXPECT_NEAR(step2, h2, 1e-15);
}

TEST(Adam, StructureMismatchRejected) {
  ModelParams p = tiny_params();
  ModelConfig other;
  other.input_size = 3;
  other.lstm_layers = {};
  other.dense_layers = {};
  other.bypass = BypassMode::none;
  other.output_size = 1;
  ModelParams g = make_params(other);
  AdamState s = AdamState::make(p);
  EXPECT_THROW(adam_update(p, g, s), std::invalid_argument);
}
