#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "auxlstm/errors.hpp"
#include "auxlstm/rmsprop.hpp"
#include "auxlstm/schedule.hpp"
#include "oracles.hpp"

using namespace auxlstm;

namespace {

struct Scalar {
  Tensor value = Tensor::from_rows({{1.0}});
  Tensor grad = Tensor::from_rows({{1.0}});
  std::vector<ParamBlock> blocks() { return {{"theta", &value, &grad}}; }
};

PhaseSchedule default_pretrain() {
  PhaseSchedule s;
  s.phase = Phase::kPretrain;
  return s;
}

}  // namespace

TEST(RmsProp, SingleScalarStep) {
  Scalar p;
  RmsPropState st;
  rmsprop_update(st, p.blocks());
  EXPECT_NEAR(st.mean_square[0][0], 0.1, 1e-16);
  const long double oracle = 1.0L - 0.001L / std::sqrt(0.1L + 1e-8L);
  EXPECT_NEAR(p.value[0], static_cast<double>(oracle), 1e-15);
  EXPECT_NEAR(p.value[0], 0.9968377, 5e-8);
}

TEST(RmsProp, TwoStepsAccumulate) {
  Scalar p;
  RmsPropState st;
  rmsprop_update(st, p.blocks());
  rmsprop_update(st, p.blocks());
  EXPECT_NEAR(st.mean_square[0][0], 0.19, 1e-16);
  const long double t1 = 1.0L - 0.001L / std::sqrt(0.1L + 1e-8L);
  const long double t2 = t1 - 0.001L / std::sqrt(0.19L + 1e-8L);
  EXPECT_NEAR(p.value[0], static_cast<double>(t2), 1e-15);
}

TEST(RmsProp, ZeroGradientOnlyDecays) {
  RngStream rng(1);
  Tensor theta = oracle::random_tensor(3, 4, rng);
  Tensor g(3, 4);
  RmsPropState st;
  st.mean_square = {oracle::random_tensor(3, 4, rng, 0.0, 2.0)};
  const Tensor before = theta, ms = st.mean_square[0];
  std::vector<ParamBlock> blocks{{"w", &theta, &g}};
  rmsprop_update(st, blocks);
  EXPECT_EQ(theta, before);
  for (std::size_t i = 0; i < ms.size(); ++i) EXPECT_EQ(st.mean_square[0][i], 0.9 * ms[i]);
}

TEST(RmsProp, NonFiniteGradientNamesBlockAndLeavesParams) {
  Tensor a = Tensor::from_rows({{1.0, 2.0}}), ga = Tensor::from_rows({{0.5, 0.5}});
  Tensor b = Tensor::from_rows({{3.0}}), gb = Tensor::from_rows({{std::nan("")}});
  RmsPropState st;
  std::vector<ParamBlock> blocks{{"lstm.bias", &a, &ga}, {"head.w2", &b, &gb}};
  try {
    rmsprop_update(st, blocks);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("head.w2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(a, Tensor::from_rows({{1.0, 2.0}}));
  gb[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(rmsprop_update(st, blocks), NumericError);
}

TEST(RmsProp, ShapeMismatchThrows) {
  Tensor a(2, 2), g(2, 3);
  RmsPropState st;
  std::vector<ParamBlock> blocks{{"w", &a, &g}};
  EXPECT_THROW(rmsprop_update(st, blocks), DimensionError);
}

TEST(RmsProp, ClippingScalesByGlobalNorm) {
  Tensor a = Tensor::from_rows({{0.0}}), ga = Tensor::from_rows({{3.0}});
  Tensor b = Tensor::from_rows({{0.0}}), gb = Tensor::from_rows({{4.0}});
  std::vector<ParamBlock> blocks{{"a", &a, &ga}, {"b", &b, &gb}};
  EXPECT_EQ(global_grad_norm(blocks), 5.0);
  RmsPropState st;
  st.config.clip_norm = 1.0;
  rmsprop_update(st, blocks);
  EXPECT_NEAR(st.mean_square[0][0], 0.1 * 0.36, 1e-16);
  EXPECT_NEAR(st.mean_square[1][0], 0.1 * 0.64, 1e-16);
}

TEST(RmsProp, StepBoundAndDeterminismProperty) {
  RngStream gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto r = static_cast<std::size_t>(gen.uniform_int(1, 5));
    const auto c = static_cast<std::size_t>(gen.uniform_int(1, 5));
    Tensor theta = oracle::random_tensor(r, c, gen, -2.0, 2.0);
    Tensor g = oracle::random_tensor(r, c, gen, -10.0, 10.0);
    RmsPropState st;
    st.config.lr = gen.uniform(1e-4, 1e-1);
    st.mean_square = {oracle::random_tensor(r, c, gen, 0.0, 5.0)};
    RmsPropState twin = st;
    Tensor theta2 = theta;
    const Tensor before = theta;
    std::vector<ParamBlock> b1{{"w", &theta, &g}}, b2{{"w", &theta2, &g}};
    rmsprop_update(st, b1);
    rmsprop_update(twin, b2);
    ASSERT_EQ(theta, theta2);
    ASSERT_EQ(st.mean_square, twin.mean_square);
    const double bound = st.config.lr / std::sqrt(st.config.epsilon);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      ASSERT_LE(std::abs(theta[i] - before[i]), bound * std::abs(g[i]));
      ASSERT_GE(st.mean_square[0][i], 0.0);
    }
  }
}

TEST(LrSchedule, PretrainHalvesAtMidpoint) {
  const auto s = default_pretrain();
  EXPECT_EQ(lr_at(0, s), 0.001);
  EXPECT_EQ(lr_at(49, s), 0.001);
  EXPECT_EQ(lr_at(50, s), 0.0005);
  EXPECT_EQ(lr_at(99, s), 0.0005);
}

TEST(LrSchedule, JointHalvesEveryPeriod) {
  PhaseSchedule s;
  EXPECT_EQ(lr_at(0, s), 0.001);
  EXPECT_EQ(lr_at(299, s), 0.001);
  EXPECT_EQ(lr_at(300, s), 0.0005);
  EXPECT_EQ(lr_at(600, s), 0.00025);
  EXPECT_EQ(lr_at(999, s), 0.000125);
}

TEST(LrSchedule, JointWithoutRestartContinuesFromPretrainRate) {
  PhaseSchedule s;
  s.joint_restart = false;
  EXPECT_EQ(lr_at(0, s), 0.0005);
  EXPECT_EQ(lr_at(300, s), 0.00025);
  s.pretrain_epochs = 10;  // never reached the halving point
  EXPECT_EQ(lr_at(0, s), 0.001);
}

TEST(LrSchedule, MonotoneProperty) {
  RngStream gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    PhaseSchedule s;
    s.phase = gen.bernoulli(0.5) ? Phase::kPretrain : Phase::kJoint;
    s.initial_lr = gen.uniform(1e-5, 1.0);
    s.pretrain_halve_at = gen.uniform_int(0, 100);
    s.joint_halve_every = gen.uniform_int(0, 400);
    s.joint_restart = gen.bernoulli(0.5);
    double prev = lr_at(0, s);
    for (std::uint64_t e = 1; e <= 1000; ++e) {
      const double cur = lr_at(e, s);
      ASSERT_LE(cur, prev) << "epoch " << e;
      ASSERT_GT(cur, 0.0);
      prev = cur;
    }
  }
}
