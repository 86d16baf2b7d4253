#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <sogq/sog_decomposition.hpp>

using namespace sogq;

TEST(SogDecomposition, NodesAndWeightsAreGeometric) {
  auto t = bsa_nodes_weights(1.5, 0.7, 10, 0.98);
  ASSERT_EQ(t.nodes.size(), 11u);
  EXPECT_NEAR(t.nodes[0], std::sqrt(2.0) * 0.7, 1e-15);
  EXPECT_NEAR(t.weights[1], std::sqrt(2.0 / std::numbers::pi) * std::log(1.5) / 0.7 / 1.5, 1e-15);
  EXPECT_NEAR(t.weights[0], 0.98 * std::sqrt(2.0 / std::numbers::pi) * std::log(1.5) / 0.7, 1e-15);
  for (int l = 1; l < 10; ++l) {
    EXPECT_NEAR(t.nodes[l + 1] / t.nodes[l], 1.5, 1e-13);
    EXPECT_NEAR(t.weights[l] / t.weights[l + 1], 1.5, 1e-13);
  }
}

TEST(SogDecomposition, RejectsBadArguments) {
  EXPECT_THROW(bsa_nodes_weights(1.0, 1.0, 4), SogError);
  EXPECT_THROW(bsa_nodes_weights(2.0, 0.0, 4), SogError);
  EXPECT_THROW(bsa_nodes_weights(2.0, 1.0, -1), SogError);
}

TEST(SogDecomposition, AliasingFloorFrozenValues) {
  EXPECT_NEAR(sog_aliasing_floor(2.0), 1.40229474364313327e-3, 1e-17);
  EXPECT_NEAR(sog_aliasing_floor(1.14878150173321925) / 6.84434324327290394e-15, 1.0, 1e-12);
}

class PresetCase : public ::testing::TestWithParam<int> {};

TEST_P(PresetCase, ContinuitySolveReproducesTable) {
  const auto& p = kSogPresets[GetParam()];
  const auto s = solve_c1_continuity(p.b);
  EXPECT_NEAR(s.r0, p.r0, 1e-9 * p.r0);
  EXPECT_NEAR(s.omega, p.omega, 1e-9);
  auto [c0, c1] = continuity_residuals(p.b, p.r0, p.omega);
  EXPECT_LT(std::abs(c0), 1e-12);
  EXPECT_LT(std::abs(c1), 1e-12);
}

TEST_P(PresetCase, FarKernelMatchesCoulombAtCutoff) {
  const auto& p = kSogPresets[GetParam()];
  const int M = p.M_energy + 40;
  auto d = SogDecomposition::from_preset(p, 0.3, M);
  const double rc = d.r_c();
  EXPECT_NEAR(d.far_kernel(rc) * rc, 1.0, 1e-10);
  EXPECT_NEAR(d.far_kernel_derivative(rc) * rc * rc, -1.0, 1e-10);
  EXPECT_EQ(d.near_kernel(rc * 1.0001), 0.0);
}

INSTANTIATE_TEST_SUITE_P(Table, PresetCase, ::testing::Range(0, 6));

TEST(SogDecomposition, NearPlusFarIsCoulombInsideCutoff) {
  auto d = SogDecomposition::from_preset(kSogPresets[3], 1.5, 60);
  for (int i = 1; i <= 100; ++i) {
    const double r = 1.5 * i / 101.0;
    EXPECT_NEAR((d.near_kernel(r) + d.far_kernel(r)) * r, 1.0, 1e-15 * (1.0 + d.far_kernel(r) * r));
  }
  EXPECT_THROW(d.near_kernel(0.0), SogError);
}

TEST(SogDecomposition, ChooseMIsMonotoneAndRejectsFloor) {
  const auto& p = kSogPresets[2];
  int prev = 0;
  for (double eps : {1e-2, 1e-3, 1e-3 + 1e-9}) {
    const int M = choose_M(p.b, p.r0, p.omega, eps, ErrorQuantity::Energy);
    EXPECT_GE(M, eps == 1e-2 ? 0 : prev);
    prev = M;
  }
  EXPECT_THROW(choose_M(p.b, p.r0, p.omega, 1e-8, ErrorQuantity::Energy), SogError);
  EXPECT_GE(choose_M(p.b, p.r0, p.omega, 1e-3, ErrorQuantity::Force),
            0);
}

TEST(SogDecomposition, RangeSplitIndex) {
  auto d = SogDecomposition::with_cutoff(2.0, 1.9892536839080267, 0.9944464927622323, 1.0, 20);
  const double s0 = d.node(0);
  EXPECT_EQ(d.range_split(1.0, 0.99 * s0), -1);
  EXPECT_EQ(d.range_split(1.0, 1.01 * s0), 0);
  EXPECT_EQ(d.range_split(1.0, 4.01 * s0), 2);
  EXPECT_EQ(d.range_split(1.0, 1e9), 20);
  d.set_range_split(2.0, 2.01 * s0 / 2.0);
  EXPECT_EQ(d.split_index(), 1);
  EXPECT_THROW(d.range_split(1.0, 0.0), SogError);
}

TEST(SogDecomposition, SelfCoefficientIsWeightSum) {
  auto d = SogDecomposition::from_preset(kSogPresets[1], 0.3, 31);
  double s = 0.0;
  for (double w : d.weights()) s += w;
  EXPECT_DOUBLE_EQ(d.self_coefficient(), s);
}
