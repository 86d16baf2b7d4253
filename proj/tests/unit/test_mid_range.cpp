#include <gtest/gtest.h>

#include <cmath>

#include <sogq/mid_range.hpp>
#include <sogq/oracle.hpp>
#include <sogq/params.hpp>

using namespace sogq;

namespace {

struct MidCase {
  ParticleSystem sys;
  SolverPlan plan;
  std::vector<double> total;
};

// Stage error measured against the size of the full potential.
double scaled_error(const std::vector<double>& a, const std::vector<double>& ref, const std::vector<double>& total) {
  double e = 0.0, m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - ref[i]));
    m = std::max(m, std::abs(total[i]));
  }
  return e / m;
}

MidCase cube_case(double eps, WindowKind k = WindowKind::KaiserBessel) {
  MidCase c;
  c.sys = random_system(60, Box{5, 5, 5}, 21);
  PlanOptions o;
  o.mid_window = k;
  c.plan = select_parameters(60, c.sys.box(), eps, o);
  c.total = ewald2d_potentials<double>(c.sys);
  return c;
}

std::vector<double> mid(const MidCase& c) {
  const auto& p = c.plan;
  return mid_range_potential(c.sys, p.decomposition(), p.grid(), p.mid.window, p.mid.support, p.mid.shape);
}

}  // namespace

TEST(MidRange, GridSpecArithmetic) {
  auto g = make_grid_spec(Box{2, 2, 1}, {16, 16, 8}, 2.0, 0.3);
  EXPECT_DOUBLE_EQ(g.h[2], 0.125);
  EXPECT_EQ(g.delta_Iz, 3);
  EXPECT_EQ(g.Iz_star, 22);
  EXPECT_DOUBLE_EQ(g.Lz_star, 22 * 0.125);
  EXPECT_THROW(make_grid_spec(Box{1, 1, 1}, {7, 8, 8}, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(make_grid_spec(Box{1, 1, 1}, {8, 8, 8}, 0.9, 0.0), std::invalid_argument);
  EXPECT_EQ(grid_count_for(10.0, std::numbers::pi), 10);
  EXPECT_EQ(grid_count_for(10.1, std::numbers::pi), 12);
}

TEST(MidRange, MatchesLatticeSumAtPlanTolerance) {
  for (double eps : {1e-4, 1e-8, 1e-11}) {
    auto c = cube_case(eps);
    ASSERT_TRUE(c.plan.mid.enabled);
    const auto d = c.plan.decomposition();
    const auto ref = gaussian_lattice_sums(c.sys, d, 0, d.split_index());
    EXPECT_LE(scaled_error(mid(c), ref, c.total), eps) << eps;
  }
}

TEST(MidRange, WindowsReproduceTheirOwnFourierSum) {
  for (auto k : {WindowKind::Gaussian, WindowKind::KaiserBessel, WindowKind::ExpSemicircle}) {
    auto c = cube_case(1e-6, k);
    for (int a = 0; a < 3; ++a) {
      c.plan.mid.support[a] = 19;
      c.plan.mid.shape[a] = default_window_shape(k, 19);
      c.plan.mid.I[a] = std::max(c.plan.mid.I[a], 24);
    }
    const auto d = c.plan.decomposition();
    const auto ref = mid_range_fourier_reference(c.sys, d, c.plan.grid());
    EXPECT_LE(relative_max_error(mid(c), ref), 1e-9) << to_string(k);
  }
}

TEST(MidRange, FftGridIsNotUpsampled) {
  auto c = cube_case(1e-6);
  const auto& p = c.plan;
  MidRangeSolver s(p.box, p.decomposition(), p.grid(), p.mid.window, p.mid.support, p.mid.shape);
  const auto shape = s.grid().shape();
  EXPECT_EQ(shape[0], p.mid.I[0]);
  EXPECT_EQ(shape[1], p.mid.I[1]);
  EXPECT_EQ(shape[2], p.grid().Iz_star);
}

TEST(MidRange, RejectsWindowWiderThanNarrowestGaussian) {
  auto c = cube_case(1e-6);
  auto& p = c.plan;
  for (int a = 0; a < 3; ++a) p.mid.I = {4, 4, 4};
  for (int a = 0; a < 3; ++a) {
    p.mid.support[a] = 3;
    p.mid.shape[a] = default_window_shape(p.mid.window, 3) * 1e-3;
  }
  EXPECT_THROW(MidRangeSolver(p.box, p.decomposition(), p.grid(), p.mid.window, p.mid.support, p.mid.shape),
               std::invalid_argument);
}

TEST(MidRange, LatticeTranslationInvariance) {
  auto c = cube_case(1e-8);
  std::vector<Vec3> pos = c.sys.positions();
  for (auto& r : pos) {
    r[0] += c.sys.box().Lx;
    r[1] -= 2.0 * c.sys.box().Ly;
  }
  ParticleSystem shifted(pos, c.sys.charges(), c.sys.box());
  MidCase c2{shifted, c.plan, c.total};
  auto a = mid(c), b = mid(c2);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * (1 + std::abs(a[i])));
}

TEST(MidRange, EmptyWhenNoMidGaussians) {
  auto c = cube_case(1e-6);
  c.plan.eta = 1e-3;
  auto v = mid(c);
  for (double x : v) EXPECT_EQ(x, 0.0);
}
