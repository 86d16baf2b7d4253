#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include <sogq/geometry.hpp>

using namespace sogq;

TEST(Geometry, WrapPeriodicRange) {
  EXPECT_DOUBLE_EQ(wrap_periodic(0.25, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(wrap_periodic(0.75, 1.0), -0.25);
  EXPECT_DOUBLE_EQ(wrap_periodic(-0.75, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(wrap_periodic(0.5, 1.0), -0.5);
  EXPECT_DOUBLE_EQ(wrap_periodic(7.25, 2.0), -0.75);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_periodic(u(rng), 3.0);
    EXPECT_GE(w, -1.5);
    EXPECT_LT(w, 1.5);
  }
}

TEST(Geometry, MinImageLeavesZUnwrapped) {
  Box box{2.0, 4.0, 1.0};
  auto d = min_image_displacement({0.9, 1.9, 0.4}, {-0.9, -1.9, -0.4}, box);
  EXPECT_NEAR(d[0], -0.2, 1e-15);
  EXPECT_NEAR(d[1], -0.2, 1e-15);
  EXPECT_NEAR(d[2], 0.8, 1e-15);
}

TEST(Geometry, RejectsInvalidInput) {
  Box box{1, 1, 1};
  EXPECT_THROW(ParticleSystem({{0, 0, 0}}, {1.0}, box), GeometryError);
  EXPECT_THROW(ParticleSystem({{0, 0, 0.6}, {0, 0, 0}}, {1.0, -1.0}, box), GeometryError);
  EXPECT_THROW(ParticleSystem({{0, 0, 0}}, {1.0, -1.0}, box), GeometryError);
  EXPECT_THROW(ParticleSystem({}, {}, box), GeometryError);
  EXPECT_THROW(ParticleSystem({{0, 0, 0}, {0, 0, 0}}, {1.0, -1.0}, Box{1, -1, 1}), GeometryError);
  EXPECT_THROW(ParticleSystem({{std::nan(""), 0, 0}, {0, 0, 0}}, {1.0, -1.0}, box), GeometryError);
}

TEST(Geometry, WrapsXYOnConstruction) {
  ParticleSystem s({{1.75, -2.25, 0.1}, {0, 0, 0}}, {1.0, -1.0}, Box{1, 1, 1});
  EXPECT_NEAR(s.position(0)[0], -0.25, 1e-15);
  EXPECT_NEAR(s.position(0)[1], -0.25, 1e-15);
  EXPECT_DOUBLE_EQ(s.position(0)[2], 0.1);
}

TEST(Geometry, ReadWriteRoundTrip) {
  auto s = random_system(38, Box{2.0, 3.0, 0.5}, 11);
  std::stringstream ss;
  write_particles(ss, s);
  auto t = read_particles(ss);
  ASSERT_EQ(t.size(), s.size());
  EXPECT_EQ(t.box().Lx, 2.0);
  EXPECT_EQ(t.box().Lz, 0.5);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(t.charge(i), s.charge(i));
    for (int a = 0; a < 3; ++a) EXPECT_EQ(t.position(i)[a], s.position(i)[a]);
  }
}

TEST(Geometry, RandomSystemIsNeutralAndDeterministic) {
  auto a = random_system(100, Box{1, 1, 1}, 5), b = random_system(100, Box{1, 1, 1}, 5);
  double net = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    net += a.charge(i);
    EXPECT_EQ(a.position(i), b.position(i));
    EXPECT_LE(std::abs(a.position(i)[2]), 0.5);
  }
  EXPECT_EQ(net, 0.0);
}

class CellListCase : public ::testing::TestWithParam<std::tuple<double, double, double, double>> {};

TEST_P(CellListCase, FindsEveryPairWithinCutoff) {
  auto [Lx, Ly, Lz, rc] = GetParam();
  auto s = random_system(300, Box{Lx, Ly, Lz}, 17);
  CellList cl(s, rc);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::set<std::size_t> found;
    for (auto j : cl.neighbors(s, i)) found.insert(j);
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      auto d = min_image_displacement(s.position(i), s.position(j), s.box());
      const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      if (r < rc) {
        EXPECT_TRUE(found.count(j)) << i << " " << j << " r=" << r;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Boxes, CellListCase,
                         ::testing::Values(std::make_tuple(1.0, 1.0, 1.0, 0.3), std::make_tuple(4.0, 4.0, 0.2, 0.5),
                                           std::make_tuple(2.0, 1.0, 3.0, 0.49), std::make_tuple(1.0, 1.0, 1.0, 0.1)));
