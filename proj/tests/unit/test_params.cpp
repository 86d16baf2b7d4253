#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <sogq/params.hpp>

using namespace sogq;

namespace {

bool within_doubling(double got, double ref) { return got <= 2.0 * ref && got >= 0.5 * ref; }

struct ReferenceRow {
  Box box;
  double eps;
  bool mid;
  double eta;  // 0 when unused
  int I, support;
  double lambda_z;
  int I_long;
  int Q;  // 0 when unused
  int P;
};

const ReferenceRow kRows[] = {
    {{20, 20, 20}, 1e-3, true, 0.68, 8, 9, 1.47, 1, 0, 1},
    {{20, 20, 20}, 1e-6, true, 0.68, 16, 13, 1.64, 3, 0, 9},
    {{20, 20, 20}, 1e-12, true, 0.68, 36, 17, 2.23, 5, 0, 14},
    {{30, 30, 0.3}, 1e-3, false, 0, 0, 9, 0, 16, 2, 2},
    {{30, 30, 0.3}, 1e-6, false, 0, 0, 13, 0, 24, 4, 4},
    {{30, 30, 0.3}, 1e-12, false, 0, 0, 17, 0, 64, 6, 8},
};

}  // namespace

class ReferenceCase : public ::testing::TestWithParam<int> {};

TEST_P(ReferenceCase, GridAndWindowWithinOneStep) {
  const auto& r = kRows[GetParam()];
  const auto p = select_parameters(1000, r.box, r.eps);
  EXPECT_EQ(p.mid.enabled, r.mid);
  if (r.mid) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_TRUE(within_doubling(p.mid.I[a], r.I)) << p.mid.I[a];
      EXPECT_LE(std::abs(p.mid.support[a] - r.support), 4) << p.mid.support[a];
    }
    EXPECT_EQ(p.lng.mode, LongMode::Direct);
    EXPECT_TRUE(within_doubling(p.lng.direct_count(r.box.Lx), r.I_long)) << p.lng.direct_count(r.box.Lx);
  } else {
    EXPECT_EQ(p.lng.mode, LongMode::Fft);
    EXPECT_LE(std::abs(p.lng.support - r.support), 4) << p.lng.support;
    for (int a = 0; a < 2; ++a) EXPECT_TRUE(within_doubling(p.lng.I[a], r.I_long)) << p.lng.I[a];
    EXPECT_LE(std::abs(p.lng.Q - r.Q), 1) << p.lng.Q;
  }
}

TEST_P(ReferenceCase, SplitPaddingAndDegreeWithinOneStep) {
  const auto& r = kRows[GetParam()];
  const auto p = select_parameters(1000, r.box, r.eps);
  if (r.mid) {
    EXPECT_TRUE(within_doubling(p.eta, r.eta)) << p.eta;
    EXPECT_TRUE(within_doubling(p.mid.lambda_z, r.lambda_z)) << p.mid.lambda_z;
  }
  EXPECT_TRUE(within_doubling(p.lng.P, r.P)) << p.lng.P;
}

INSTANTIATE_TEST_SUITE_P(Rows, ReferenceCase, ::testing::Range(0, 6));

TEST(Params, CoarseToleranceUsesCoarsestPreset) {
  const auto p = select_parameters(100, Box{1, 1, 1}, 0.2);
  EXPECT_DOUBLE_EQ(p.b, 2.0);
  EXPECT_LE(p.decomposition().error_estimate().energy_error, 0.2 / 3.0);
  EXPECT_GE(p.M, choose_M(2.0, 0.2 / 3.0, ErrorQuantity::Energy));
}

TEST(Params, ToleranceBelowFloorIsRejected) {
  EXPECT_THROW(select_parameters(100, Box{1, 1, 1}, 1e-16), PlanError);
  EXPECT_THROW(select_parameters(100, Box{1, 1, 1}, 1.5), PlanError);
  PlanOptions o;
  o.b = 2.0;
  EXPECT_THROW(select_parameters(100, Box{1, 1, 1}, 1e-6, o), SogError);
}

TEST(Params, Deterministic) {
  const auto a = select_parameters(5000, Box{10, 12, 3}, 1e-7);
  const auto b = select_parameters(5000, Box{10, 12, 3}, 1e-7);
  EXPECT_TRUE(a == b);
}

TEST(Params, TighterToleranceNeverLowersP) {
  for (Box box : {Box{20, 20, 20}, Box{30, 30, 0.3}, Box{10, 10, 2}}) {
    int prev = 0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
      const auto p = select_parameters(1000, box, eps);
      EXPECT_GE(p.lng.P, prev) << eps;
      prev = p.lng.P;
    }
  }
}

TEST(Params, PlanMeetsItsOwnErrorModel) {
  for (double eps : {1e-3, 1e-6, 1e-10}) {
    const auto p = select_parameters(1000, Box{20, 20, 20}, eps);
    const auto e = predict_error(p);
    for (double v : {e.decomposition, e.mid_grid, e.mid_window, e.mid_padding, e.long_fourier, e.long_chebyshev})
      EXPECT_LE(v, eps / 3.0 * (1 + 1e-9));
  }
}

TEST(Params, LargerCratShiftsAwayFromLongRangeWork) {
  const Box box{20, 20, 20};
  const auto d = SogDecomposition::from_preset(kSogPresets[3], 10.0, 100);
  PlanOptions lo, hi;
  lo.C_rat = 1.0;
  hi.C_rat = 1000.0;
  const auto a = optimize_free_direction(box, 1000, d, 2.0, 0.5, 1e-6, lo);
  const auto b = optimize_free_direction(box, 1000, d, 2.0, 0.5, 1e-6, hi);
  EXPECT_GE(b.eta, a.eta);
  EXPECT_LE(b.P, a.P);
  PlanOptions bad;
  bad.C_rat = 0.5;
  EXPECT_THROW(optimize_free_direction(box, 1000, d, 2.0, 0.5, 1e-6, bad), PlanError);
}

TEST(Params, OptimizerMatchesBruteForce) {
  const Box box{20, 20, 20};
  const auto d = SogDecomposition::from_preset(kSogPresets[3], 10.0, 100);
  PlanOptions o;
  const double eps = 1e-7, delta = 2.5, h2s = 0.4;
  const auto got = optimize_free_direction(box, 1000, d, delta, h2s, eps, o);
  double best = 1e300;
  for (int m = 0; m < d.M(); ++m) {
    const double eta = d.node(m) / box.Lz;
    for (double lam = 1.0; lam <= 3.0 + 1e-9; lam += 0.01)
      for (int P = 1; P <= 32; ++P) {
        if (padding_error(lam, box.Lz, delta, eta, h2s) > eps || chebyshev_error(eta, box.Lz, P) > eps) continue;
        const double rho = 1000 / box.volume();
        const double cost = lam * (1 + delta / box.Lz) / (1000.0 * rho) * 1000 * std::log(1000.0) +
                            o.C_rat * P * box.area() / (eta * eta * box.Lz * box.Lz) * 1000;
        best = std::min(best, cost);
      }
  }
  EXPECT_LE(got.cost, best * 1.02);
  EXPECT_LE(padding_error(got.lambda_z, box.Lz, delta, got.eta, h2s), eps);
  EXPECT_LE(chebyshev_error(got.eta, box.Lz, got.P), eps);
}

TEST(Params, PaddingIsActiveForSmallSplit) {
  const Box box{20, 20, 20};
  const auto d = SogDecomposition::from_preset(kSogPresets[3], 10.0, 100);
  PlanOptions o;
  o.C_rat = 1.0;
  const auto c = optimize_free_direction(box, 1000, d, 2.0, 0.5, 1e-9, o);
  EXPECT_GT(padding_error(c.lambda_z - o.lambda_step, box.Lz, 2.0, c.eta, 0.5), 1e-9);
}

TEST(Params, CostModelScaling) {
  auto p = select_parameters(1000, Box{20, 20, 20}, 1e-6);
  const auto c1 = predict_cost(p, 1000), c2 = predict_cost(p, 2000);
  EXPECT_NEAR(c2.near / c1.near, 4.0, 1e-12);  // density doubles with N at fixed box
  EXPECT_NEAR(c2.gridding / c1.gridding, 2.0, 1e-12);
  auto q = p;
  q.r_c *= 2.0;
  EXPECT_NEAR(predict_cost(q, 1000).near / c1.near, 8.0, 1e-12);
  EXPECT_NEAR(predict_cost(q, 1000).mid_fft / c1.mid_fft, 1.0 / 8.0, 1e-12);
  auto w = p;
  w.lng.mode = LongMode::Direct;
  w.box.Lx *= 2.0;
  w.N = p.N;
  EXPECT_NEAR(predict_cost(w, 1000).long_direct / predict_cost(p, 1000).long_direct, 2.0, 1e-12);
}

TEST(Params, CutoffFromNeighbourCount) {
  EXPECT_NEAR(slab_ball_volume(1.0, 10.0), 4.0 / 3.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(slab_ball_volume(1.0, 0.2), 2.0 * std::numbers::pi * (0.1 - 0.001 / 3.0), 1e-14);
  EXPECT_NEAR(choose_cutoff(Box{20, 20, 20}, 1000, 5.0), 10.0, 1e-9);
}

TEST(Params, WindowSupportIsOdd) {
  for (double eps : {1e-2, 1e-4, 1e-7, 1e-10, 1e-14}) {
    const int P = window_support_for(eps);
    EXPECT_EQ(P % 2, 1);
    EXPECT_GE(P, 3);
  }
}

TEST(Params, ConfigRoundTrip) {
  const auto p = select_parameters(1000, Box{30, 30, 0.3}, 1e-9);
  std::stringstream ss;
  write_plan(ss, p);
  const auto q = read_plan(ss);
  EXPECT_TRUE(p == q);
  EXPECT_EQ(q.lng.Q, p.lng.Q);
  EXPECT_EQ(q.eta, p.eta);
  EXPECT_EQ(q.r_c, p.r_c);
}
