#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

using namespace csiaug;
using testing_support::random_uniform;

namespace {

std::vector<double> up(std::vector<double> col, std::uint32_t s) {
  bubble_shift_up_column(col, s);
  return col;
}

std::vector<double> down(std::vector<double> col, std::uint32_t s) {
  bubble_shift_down_column(col, s);
  return col;
}

std::vector<double> column(const RealMatrix& m, Eigen::Index c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

TEST(BubbleShift, HandTraces) {
  EXPECT_EQ(up({0.2, 0.9, 0.5, 0.1}, 1), (std::vector<double>{0.9, 0.5, 0.2, 0.1}));
  EXPECT_EQ(down({0.9, 0.5, 0.2, 0.1}, 1), (std::vector<double>{0.5, 0.9, 0.2, 0.1}));
  EXPECT_EQ(oracle::bubble_up({0.2, 0.9, 0.5, 0.1}, 1), (std::vector<double>{0.9, 0.5, 0.2, 0.1}));
  EXPECT_EQ(oracle::bubble_down({0.9, 0.5, 0.2, 0.1}, 1), (std::vector<double>{0.5, 0.9, 0.2, 0.1}));
}

TEST(BubbleShift, BoundsForceZeroShifts) {
  EXPECT_EQ(up({0.9, 0.4, 0.3, 0.2}, 2), (std::vector<double>{0.9, 0.4, 0.3, 0.2}));
  EXPECT_EQ(down({0.1, 0.2, 0.3, 0.9}, 1), (std::vector<double>{0.1, 0.2, 0.3, 0.9}));
  EXPECT_EQ(up({0.3, 0.1, 0.7}, 0), (std::vector<double>{0.3, 0.1, 0.7}));
  EXPECT_EQ(down({0.3, 0.1, 0.7}, 0), (std::vector<double>{0.3, 0.1, 0.7}));
  EXPECT_EQ(up({0.5}, 3), (std::vector<double>{0.5}));
}

TEST(BubbleShift, MatchesLiteralTranscription) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const RealMatrix a = random_uniform(32, 4, gen);
    const std::uint32_t s = static_cast<std::uint32_t>(trial % 6);
    const RealMatrix u = bubble_shift_up(AmplitudeMatrix(a), s).values();
    const RealMatrix d = bubble_shift_down(AmplitudeMatrix(a), s).values();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      ASSERT_EQ(column(u, c), oracle::bubble_up(column(a, c), s));
      ASSERT_EQ(column(d, c), oracle::bubble_down(column(a, c), s));
    }
  }
}

TEST(BubbleShift, PermutationAndDisplacementProperties) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    const RealMatrix a = random_uniform(32, 8, gen);
    for (std::uint32_t s : {0u, 1u, 2u, 3u, 7u}) {
      const RealMatrix u = bubble_shift_up(AmplitudeMatrix(a), s).values();
      const RealMatrix d = bubble_shift_down(AmplitudeMatrix(a), s).values();
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        auto in = column(a, c);
        auto ou = column(u, c);
        auto od = column(d, c);
        const auto m = static_cast<std::uint32_t>(std::max_element(in.begin(), in.end()) - in.begin());
        const auto mu = static_cast<std::uint32_t>(std::max_element(ou.begin(), ou.end()) - ou.begin());
        const auto md = static_cast<std::uint32_t>(std::max_element(od.begin(), od.end()) - od.begin());
        EXPECT_EQ(mu, m - std::min(s, m));
        EXPECT_EQ(md, m + std::min(s, 31 - m));
        std::sort(in.begin(), in.end());
        std::sort(ou.begin(), ou.end());
        std::sort(od.begin(), od.end());
        ASSERT_EQ(in, ou);
        ASSERT_EQ(in, od);
      }
    }
  }
}

TEST(BubbleShift, SaturatesAtNaMinusOne) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    const AmplitudeMatrix a(random_uniform(16, 4, gen));
    EXPECT_EQ(bubble_shift_up(a, 16).values(), bubble_shift_up(a, 15).values());
    EXPECT_EQ(bubble_shift_up(a, 1000).values(), bubble_shift_up(a, 15).values());
    EXPECT_EQ(bubble_shift_down(a, 1000).values(), bubble_shift_down(a, 15).values());
  }
}

TEST(BubbleShift, TiesUseFirstMaximum) {
  EXPECT_EQ(up({0.1, 0.8, 0.8, 0.2}, 5), oracle::bubble_up({0.1, 0.8, 0.8, 0.2}, 5));
  EXPECT_EQ(down({0.1, 0.8, 0.8, 0.2}, 5), oracle::bubble_down({0.1, 0.8, 0.8, 0.2}, 5));
}

std::uint64_t seed_with_first_column(std::uint64_t want, std::uint64_t cols) {
  for (std::uint64_t seed = 0;; ++seed) {
    Xoshiro256 probe(seed);
    if (probe.below(cols) == want) {
      return seed;
    }
  }
}

TEST(RandomGeneration, ClippedBlockExample) {
  std::mt19937_64 gen(2);
  RealMatrix a = random_uniform(32, 32, gen) * 0.5;
  a(0, 20) = 3.0;
  const std::uint64_t seed = seed_with_first_column(5, 32);
  const RealMatrix out = random_generation(AmplitudeMatrix(a), 4, seed).values();
  int unchanged = 0;
  for (Eigen::Index r = 0; r < 32; ++r) {
    for (Eigen::Index c = 0; c < 32; ++c) {
      const bool inside = r <= 2 && c >= 4 && c <= 7;
      if (!inside) {
        ASSERT_EQ(out(r, c), a(r, c)) << r << "," << c;
        ++unchanged;
      } else {
        ASSERT_GE(out(r, c), a.minCoeff());
        ASSERT_LE(out(r, c), 3.0);
        ASSERT_NE(out(r, c), a(r, c));
      }
    }
  }
  EXPECT_EQ(unchanged, 1012);
}

TEST(RandomGeneration, BlockSpanClipping) {
  const BlockSpan interior = block_span(10, 4, 32);
  EXPECT_EQ(interior.first, 9);
  EXPECT_EQ(interior.last, 12);
  const BlockSpan odd = block_span(10, 5, 32);
  EXPECT_EQ(odd.first, 8);
  EXPECT_EQ(odd.last, 12);
  const BlockSpan edge = block_span(31, 6, 32);
  EXPECT_EQ(edge.first, 29);
  EXPECT_EQ(edge.last, 31);
  const BlockSpan single = block_span(0, 1, 1);
  EXPECT_EQ(single.first, 0);
  EXPECT_EQ(single.last, 0);
}

TEST(RandomGeneration, ConstantMatrixAndDeterminism) {
  const AmplitudeMatrix c(RealMatrix::Constant(8, 8, 0.25));
  EXPECT_EQ(random_generation(c, 4, 123).values(), c.values());
  std::mt19937_64 gen(9);
  const AmplitudeMatrix a(random_uniform(32, 32, gen));
  EXPECT_EQ(random_generation(a, 4, 77).values(), random_generation(a, 4, 77).values());
  EXPECT_NE(random_generation(a, 4, 77).values(), random_generation(a, 4, 78).values());
  EXPECT_THROW(random_generation(a, 0, 1), InvalidInput);
}

TEST(RandomGeneration, LocalityProperty) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const RealMatrix a = random_uniform(32, 32, gen);
    const std::uint32_t k = 1 + static_cast<std::uint32_t>(trial % 8);
    const std::uint64_t seed = gen();
    Xoshiro256 rng(seed);
    const RgBlock block = random_generation_block(AmplitudeMatrix(a), k, rng);
    Eigen::Index max_r = 0, max_c = 0;
    a.maxCoeff(&max_r, &max_c);
    EXPECT_EQ(block.rows.first, std::max<Eigen::Index>(0, max_r - (k - 1) / 2));
    const RealMatrix out = random_generation(AmplitudeMatrix(a), k, seed).values();
    for (Eigen::Index r = 0; r < 32; ++r) {
      for (Eigen::Index c = 0; c < 32; ++c) {
        const bool inside = r >= block.rows.first && r <= block.rows.last && c >= block.cols.first &&
                            c <= block.cols.last;
        if (inside) {
          ASSERT_GE(out(r, c), a.minCoeff());
          ASSERT_LE(out(r, c), a.maxCoeff());
        } else {
          ASSERT_EQ(out(r, c), a(r, c));
        }
      }
    }
  }
}

TEST(MdBaseline, CyclicShiftAndPhaseDraws) {
  RealMatrix a(4, 1);
  a << 1.0, 2.0, 3.0, 4.0;
  const PhaseMatrix phase(RealMatrix::Zero(4, 1));
  const Polar u = md_baseline(AmplitudeMatrix(a), phase, 1, ShiftDirection::Up, 5);
  EXPECT_EQ(u.amplitude.values(), (RealMatrix(4, 1) << 2.0, 3.0, 4.0, 1.0).finished());
  const Polar d = md_baseline(AmplitudeMatrix(a), phase, 1, ShiftDirection::Down, 5);
  EXPECT_EQ(d.amplitude.values(), (RealMatrix(4, 1) << 4.0, 1.0, 2.0, 3.0).finished());

  std::mt19937_64 gen(1);
  const AmplitudeMatrix big(random_uniform(32, 32, gen));
  const PhaseMatrix zero(RealMatrix::Zero(32, 32));
  const Polar s0 = md_baseline(big, zero, 0, ShiftDirection::Up, 9);
  EXPECT_EQ(s0.amplitude.values(), big.values());
  EXPECT_GE(s0.phase.values().minCoeff(), -std::numbers::pi);
  EXPECT_LT(s0.phase.values().maxCoeff(), std::numbers::pi);
  EXPECT_GT((s0.phase.values().array() != 0.0).count(), 1000);
  EXPECT_EQ(md_baseline(big, zero, 0, ShiftDirection::Up, 9).phase.values(), s0.phase.values());
  EXPECT_NE(md_baseline(big, zero, 0, ShiftDirection::Up, 10).phase.values(), s0.phase.values());
}

Dataset small_ad_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<ComplexMatrix> samples;
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back(testing_support::random_complex(16, 8, gen));
  }
  return testing_support::ad_dataset(std::move(samples), Provenance(std::nullopt, seed));
}

TEST(AugmentDataset, AppendKeepsOriginalsFirst) {
  const Dataset ds = small_ad_dataset(20, 3);
  AugmentParams p;
  p.method = AugmentMethod::BsUp;
  p.shift = 2;
  const Dataset out = augment_dataset(ds, p, AugmentMode::Append);
  ASSERT_EQ(out.size(), 40u);
  for (std::size_t i = 0; i < 20; ++i) {
    ASSERT_EQ(out.sample(i), ds.sample(i));
  }
  ASSERT_EQ(out.provenance().augmentations().size(), 1u);
  EXPECT_EQ(out.provenance().augmentations()[0].params, p);
  EXPECT_EQ(out.provenance().seed(), ds.provenance().seed());
}

TEST(AugmentDataset, EmptyAndIdentityAndDomain) {
  AugmentParams p;
  p.method = AugmentMethod::BsUp;
  p.shift = 0;
  const Dataset empty(Domain::AngularDelay, 0, 0);
  EXPECT_TRUE(augment_dataset(empty, p, AugmentMode::Append).empty());

  const Dataset ds = small_ad_dataset(5, 8);
  const Dataset same = augment_dataset(ds, p, AugmentMode::Replace);
  ASSERT_EQ(same.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    const double scale = 1.0 + ds.sample(i).cwiseAbs().maxCoeff();
    EXPECT_LT((same.sample(i) - ds.sample(i)).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
  const Dataset sf(Domain::SpatialFrequency, 16, 8, ds.samples());
  EXPECT_THROW(augment_dataset(sf, p, AugmentMode::Append), InvalidInput);
}

TEST(AugmentDataset, PhaseIsPreservedForShapeMethods) {
  std::mt19937_64 gen(10);
  const Polar in = decompose(testing_support::random_complex(32, 32, gen));
  for (AugmentMethod m : {AugmentMethod::BsUp, AugmentMethod::BsDown, AugmentMethod::Rg}) {
    AugmentParams p;
    p.method = m;
    p.shift = 2;
    p.block = 4;
    const Polar out = augment_polar(in, p, 99);
    EXPECT_EQ(out.phase.values(), in.phase.values());
  }
}

TEST(AugmentDataset, PerSampleSeedsAreIndexDerived) {
  const Dataset ds = small_ad_dataset(6, 4);
  AugmentParams p;
  p.method = AugmentMethod::Rg;
  p.block = 3;
  p.seed = 42;
  const Dataset out = augment_dataset(ds, p, AugmentMode::Replace);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ComplexMatrix expected =
        augment_sample(AngularDelayMatrix(ds.sample(i)), p, derive_seed(42, i)).values();
    ASSERT_EQ(out.sample(i), expected);
  }
}

TEST(AugmentDataset, OutputIndependentOfWorkerCount) {
  const Dataset ds = small_ad_dataset(37, 5);
  AugmentParams p;
  p.method = AugmentMethod::MdBaseline;
  p.shift = 3;
  p.seed = 7;
  setenv("CSIAUG_WORKERS", "1", 1);
  const Dataset one = augment_dataset(ds, p, AugmentMode::Append);
  setenv("CSIAUG_WORKERS", "4", 1);
  const Dataset four = augment_dataset(ds, p, AugmentMode::Append);
  unsetenv("CSIAUG_WORKERS");
  EXPECT_TRUE(one == four);
}

TEST(AugmentDataset, ComposedStepsChainOnTheShiftedCopy) {
  const Dataset ds = small_ad_dataset(4, 6);
  AugmentParams bs;
  bs.method = AugmentMethod::BsUp;
  bs.shift = 2;
  AugmentParams rg;
  rg.method = AugmentMethod::Rg;
  rg.block = 4;
  rg.seed = 11;
  const Dataset out = augment_dataset(ds, {bs, rg}, AugmentMode::Append);
  ASSERT_EQ(out.size(), 8u);
  EXPECT_EQ(out.provenance().method_label(), "bs-up&rg");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Polar p0 = decompose(ds.sample(i));
    const Polar p1 = augment_polar(p0, bs, derive_seed(bs.seed, i));
    const Polar p2 = augment_polar(p1, rg, derive_seed(rg.seed, i));
    ASSERT_EQ(out.sample(ds.size() + i), recompose(p2.amplitude, p2.phase).values());
  }
}

} // namespace
