#include <gtest/gtest.h>

#include <cmath>

#include <sogq/near_field.hpp>

using namespace sogq;

namespace {
SogDecomposition decomposition(double rc) {
  return SogDecomposition::from_preset(kSogPresets[3], rc, 76);
}
}  // namespace

TEST(NearField, KernelTableMatchesDirect) {
  auto d = decomposition(0.8);
  FarKernelTable t(d);
  for (int i = 0; i <= 1000; ++i) {
    const double r = 0.8 * i / 1000.0;
    EXPECT_NEAR(t(r * r), d.far_kernel(r), 1e-14 * d.far_kernel(0.0));
  }
}

TEST(NearField, IsolatedPairMatchesKernel) {
  Box box{10, 10, 10};
  ParticleSystem s({{0, 0, 0}, {0.3, 0.2, -0.1}}, {1.0, -1.0}, box);
  auto d = decomposition(1.0);
  const double r = std::sqrt(0.09 + 0.04 + 0.01);
  for (auto mode : {NearMode::Direct, NearMode::Table}) {
    auto phi = near_potential(s, d, mode);
    EXPECT_NEAR(phi[0], -d.near_kernel(r), 1e-13);
    EXPECT_NEAR(phi[1], d.near_kernel(r), 1e-13);
  }
}

TEST(NearField, PairsBeyondCutoffAndAcrossPeriodicFaces) {
  Box box{2, 2, 2};
  ParticleSystem s({{0.95, 0, 0}, {-0.95, 0, 0}, {0, 0, 0.9}, {0, 0, -0.9}}, {1.0, -1.0, 1.0, -1.0}, box);
  auto d = decomposition(0.5);
  auto phi = near_potential(s, d, NearMode::Direct);
  EXPECT_NEAR(phi[0], -d.near_kernel(0.1), 1e-13);
  EXPECT_NEAR(phi[2], 0.0, 1e-15);
}

TEST(NearField, TableAndDirectAgreeOnRandomSystem) {
  auto s = random_system(400, Box{3, 3, 2}, 9);
  auto d = decomposition(0.6);
  auto a = near_potential(s, d, NearMode::Direct), b = near_potential(s, d, NearMode::Table);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-11);
}

TEST(NearField, SelfTermAndEnergy) {
  auto s = random_system(10, Box{1, 1, 1}, 2);
  auto d = decomposition(0.3);
  auto self = self_potential(s, d);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_DOUBLE_EQ(self[i], s.charge(i) * d.self_coefficient());
  PotentialParts p;
  p.near.assign(10, 1.0);
  p.self.assign(10, 0.25);
  p.mid.assign(10, 0.5);
  auto t = p.total();
  EXPECT_DOUBLE_EQ(t[3], 1.25);
  std::vector<double> phi(10);
  for (std::size_t i = 0; i < 10; ++i) phi[i] = s.charge(i) * 2.0;
  EXPECT_DOUBLE_EQ(total_energy(phi, s), 10.0);
}
