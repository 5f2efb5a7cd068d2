#include "support.hpp"

#include <gtest/gtest.h>

using namespace csiaug;

namespace {

Eigen::Index argmax_delay_row(const ComplexMatrix& ha) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  ha.cwiseAbs().maxCoeff(&r, &c);
  return r;
}

TEST(ChannelSim, ZeroDelayBroadsideLandsInRowZero) {
  const ChannelMatrix h = synthesize_channel(1024, 32, {{0.0, 0.0, 0.0, 1.0}});
  const DftPlan full(1024, 32, 1024);
  const ComplexMatrix hp = full.forward(h.values());
  EXPECT_LT(oracle::frob2(hp.bottomRows(1023)) / oracle::frob2(hp), 1e-10);
  EXPECT_NEAR(std::abs(hp(0, 0)), std::sqrt(1024.0 * 32.0), 1e-8);
}

TEST(ChannelSim, IntegerDelayThreeSingleAntenna) {
  ScenarioSpec spec;
  spec.nc = 64;
  spec.nt = 1;
  spec.paths = 1;
  spec.delay_min = 3.0;
  spec.delay_max = 3.0;
  spec.angle_min = spec.angle_max = 0.0;
  const ChannelMatrix h = sample_channel_at(spec, 0);
  const DftPlan plan(64, 1, 8);
  EXPECT_EQ(argmax_delay_row(plan.forward(h.values())), 3);
}

TEST(ChannelSim, MatchesFormulaOracle) {
  ScenarioSpec spec;
  spec.nc = 64;
  spec.nt = 8;
  spec.paths = 4;
  spec.delay_max = 20.0;
  spec.gain_decay = 0.5;
  spec.seed = 31;
  const ChannelMatrix h = sample_channel_at(spec, 2);

  // Redraw the same stream by hand: tau, theta, phi per path.
  Xoshiro256 rng(derive_seed(31, 2));
  ComplexMatrix expected = ComplexMatrix::Zero(64, 8);
  for (int l = 0; l < 4; ++l) {
    const double tau = spec.delay_min + (spec.delay_max - spec.delay_min) * rng.uniform01();
    const double theta = spec.angle_min + (spec.angle_max - spec.angle_min) * rng.uniform01();
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * rng.uniform01();
    const double g = std::exp(-0.5 * l);
    for (int n = 0; n < 64; ++n) {
      for (int a = 0; a < 8; ++a) {
        expected(n, a) += g * std::polar(1.0, phi - 2.0 * std::numbers::pi * n * tau / 64.0 -
                                                  std::numbers::pi * a * std::sin(theta));
      }
    }
  }
  EXPECT_LT((h.values() - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ChannelSim, DeterministicAndDistinct) {
  ScenarioSpec spec;
  spec.nc = 128;
  spec.nt = 8;
  spec.seed = 4;
  const Dataset a = generate_dataset(spec, 3);
  const Dataset b = generate_dataset(spec, 3);
  EXPECT_TRUE(a == b);
  EXPECT_NE(a.sample(0), a.sample(1));
  EXPECT_EQ(a.domain(), Domain::SpatialFrequency);
  ASSERT_TRUE(a.provenance().scenario().has_value());
  EXPECT_EQ(*a.provenance().scenario(), spec);
  EXPECT_EQ(a.provenance().seed(), 4u);

  const Dataset none = generate_dataset(spec, 0);
  EXPECT_TRUE(none.empty());
  EXPECT_TRUE(none.provenance().scenario().has_value());
}

TEST(ChannelSim, ArgmaxConcentratesInsideDelayRange) {
  ScenarioSpec spec;
  spec.nc = 1024;
  spec.nt = 32;
  spec.paths = 3;
  spec.delay_min = 4.0;
  spec.delay_max = 12.0;
  spec.seed = 8;
  const DftPlan plan(1024, 32, 32);
  int inside = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index r = argmax_delay_row(plan.forward(sample_channel_at(spec, i).values()));
    inside += (r >= 4 && r <= 12);
  }
  EXPECT_GE(inside, 990);
}

TEST(ChannelSim, EnergyBound) {
  ScenarioSpec spec;
  spec.nc = 256;
  spec.nt = 16;
  spec.paths = 5;
  spec.delay_max = 100.0;
  spec.angle_min = -1.5;
  spec.angle_max = 1.5;
  spec.gain_decay = 0.3;
  double gain_sum = 0.0;
  for (int l = 0; l < 5; ++l) gain_sum += std::exp(-0.3 * l);
  for (int i = 0; i < 200; ++i) {
    EXPECT_LE(sample_channel_at(spec, i).values().norm(), std::sqrt(256.0 * 16.0) * gain_sum * (1 + 1e-12));
  }
}

TEST(ChannelSim, MotionRangeTestMeanDelayExceedsTrain) {
  ScenarioSpec train;
  train.delay_max = 8.0;
  train.seed = 1;
  ScenarioSpec test = train;
  test.delay_max = 16.0;
  test.seed = 2;
  const DftPlan plan(1024, 32, 32);
  double sum_train = 0.0;
  double sum_test = 0.0;
  for (int i = 0; i < 1000; ++i) {
    sum_train += static_cast<double>(argmax_delay_row(plan.forward(sample_channel_at(train, i).values())));
    sum_test += static_cast<double>(argmax_delay_row(plan.forward(sample_channel_at(test, i).values())));
  }
  EXPECT_GT(sum_test, sum_train);
}

TEST(ChannelSim, InvalidSpecRejected) {
  ScenarioSpec spec;
  spec.paths = 0;
  EXPECT_THROW(generate_dataset(spec, 1), InvalidInput);
  spec.paths = 1;
  spec.delay_max = 1024.0;
  EXPECT_THROW(generate_dataset(spec, 1), InvalidInput);
  spec.delay_max = 8.0;
  spec.gain_decay = -1.0;
  EXPECT_THROW(generate_dataset(spec, 1), InvalidInput);
}

} // namespace
