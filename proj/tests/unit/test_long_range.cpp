#include <gtest/gtest.h>

#include <cmath>

#include <sogq/long_range.hpp>
#include <sogq/oracle.hpp>
#include <sogq/params.hpp>

using namespace sogq;

namespace {

struct LongCase {
  ParticleSystem sys;
  SolverPlan plan;
  SogDecomposition d;
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

LongCase slab_case(double eps) {
  LongCase c;
  c.sys = random_system(80, Box{6, 6, 0.3}, 31);
  c.plan = select_parameters(80, c.sys.box(), eps);
  c.d = c.plan.decomposition();
  c.total = ewald2d_potentials<double>(c.sys);
  return c;
}

LongRangeFftSolver fft_solver(const LongCase& c, int Q) {
  const auto& l = c.plan.lng;
  return LongRangeFftSolver(c.plan.box, c.d, l.I, l.P, Q, l.window, l.support, l.shape);
}

}  // namespace

TEST(LongRange, ModeNamesRoundTrip) {
  EXPECT_EQ(long_mode_from_string("direct"), LongMode::Direct);
  EXPECT_EQ(long_mode_from_string(to_string(LongMode::Fft)), LongMode::Fft);
  EXPECT_THROW(long_mode_from_string("nufft"), std::invalid_argument);
}

TEST(LongRange, DirectMatchesLatticeSum) {
  for (double eps : {1e-4, 1e-8, 1e-11}) {
    auto c = slab_case(eps);
    ASSERT_TRUE(c.plan.lng.enabled);
    const auto ref = gaussian_lattice_sums(c.sys, c.d, c.d.split_index() + 1, c.d.M());
    const auto v = long_range_direct(c.sys, c.d, c.plan.lng.P, c.plan.lng.K_max);
    EXPECT_LE(scaled_error(v, ref, c.total), eps) << eps;
  }
}

TEST(LongRange, FftMatchesLatticeSum) {
  for (double eps : {1e-4, 1e-8, 1e-11}) {
    auto c = slab_case(eps);
    const auto ref = gaussian_lattice_sums(c.sys, c.d, c.d.split_index() + 1, c.d.M());
    auto s = fft_solver(c, c.plan.lng.Q);
    EXPECT_LE(scaled_error(s.potential(c.sys), ref, c.total), eps) << eps;
    EXPECT_LE(scaled_error(s.potential_per_gaussian(c.sys), ref, c.total), eps) << eps;
  }
}

TEST(LongRange, TaylorPathConvergesToPerGaussianPath) {
  auto c = slab_case(1e-10);
  const double eta = c.d.node(c.d.split_index() + 1) / c.plan.box.Lz;
  double prev = 1.0;
  for (int Q = 1; Q <= 6; ++Q) {
    auto s = fft_solver(c, Q);
    const double e = relative_max_error(s.potential(c.sys), s.potential_per_gaussian(c.sys));
    EXPECT_LT(e, prev);
    EXPECT_LE(e, taylor_remainder(eta, Q)) << Q;
    prev = e;
  }
}

TEST(LongRange, ChebyshevDegreeConvergence) {
  auto c = slab_case(1e-11);
  const auto ref = gaussian_lattice_sums(c.sys, c.d, c.d.split_index() + 1, c.d.M());
  double prev = 1.0;
  for (int P = 1; P <= 5; ++P) {
    const double e = relative_max_error(long_range_direct(c.sys, c.d, P, c.plan.lng.K_max), ref);
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(LongRange, RejectsEmptyLongRangeSet) {
  auto c = slab_case(1e-6);
  c.d.set_range_split(c.plan.box.Lz, 1e12);
  EXPECT_THROW(long_range_direct(c.sys, c.d, 4, 10.0), std::invalid_argument);
  EXPECT_THROW(fft_solver(c, 2), std::invalid_argument);
}

TEST(LongRange, TaylorBoundValues) {
  EXPECT_NEAR(taylor_remainder_bound(0.5, 3), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(taylor_remainder_bound(1.0, 2), 1.0 / 32.0, 1e-15);
  EXPECT_NEAR(long_cutoff_from_count(10, std::numbers::pi), 10.0, 1e-14);
}
