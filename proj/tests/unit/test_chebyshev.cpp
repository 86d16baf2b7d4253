#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <sogq/chebyshev.hpp>

using namespace sogq;

TEST(Chebyshev, NodesAreCosines) {
  auto x = chebyshev_nodes(5);
  ASSERT_EQ(x.size(), 5u);
  for (double v : x) EXPECT_LE(std::abs(v), 1.0);
  auto y = chebyshev_nodes(5, 2.0, 4.0);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(y[i], 3.0 + x[i], 1e-15);
}

TEST(Chebyshev, InterpolatesPolynomialsExactly) {
  auto f = [](double x) { return 3 * x * x * x - x + 0.5; };
  auto s = ChebyshevSeries<double>::fit(f, 4, -2.0, 1.0);
  for (double x = -2.0; x <= 1.0; x += 0.1) EXPECT_NEAR(s(x), f(x), 1e-12);
}

TEST(Chebyshev, ClenshawMatchesHalfWeightCosineSum) {
  std::vector<double> c{0.3, -1.2, 0.7, 0.05, -0.4};
  ChebyshevSeries<double> s(c);
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    double ref = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) ref += (n == 0 ? 0.5 : 1.0) * c[n] * std::cos(n * std::acos(x));
    EXPECT_NEAR(s(x), ref, 1e-14);
  }
}

TEST(Chebyshev, BasisMatchesTrigonometricForm) {
  double b[8];
  chebyshev_basis(0.3, 8, b);
  EXPECT_DOUBLE_EQ(b[0], 0.5);
  for (int n = 1; n < 8; ++n) EXPECT_NEAR(b[n], std::cos(n * std::acos(0.3)), 1e-14);
}

TEST(Chebyshev, GaussianInterpolationRespectsBound) {
  const double Lz = 2.0;
  for (double eta : {0.3, 0.6, 1.0}) {
    const double s = eta * Lz;
    auto g = [&](double z) { return std::exp(-z * z / (s * s)); };
    for (int P : {2, 4, 6, 8, 10}) {
      auto ser = ChebyshevSeries<double>::fit(g, P, -0.5 * Lz, 0.5 * Lz);
      double err = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double z = -0.5 * Lz + Lz * i / 400.0;
        err = std::max(err, std::abs(ser(z) - g(z)));
      }
      EXPECT_LE(err, 2.0 * gaussian_cheb_bound(eta, P) + 1e-15) << eta << " " << P;
    }
  }
}

TEST(Chebyshev, BoundFrozenValueAndDegreeSelection) {
  EXPECT_NEAR(gaussian_cheb_bound(0.3, 10) / 2.71303877888927128e-3, 1.0, 1e-12);
  const int P = chebyshev_degree_for(0.5, 1e-10);
  EXPECT_LE(gaussian_cheb_bound(0.5, P), 1e-10);
  EXPECT_GT(gaussian_cheb_bound(0.5, P - 1), 1e-10);
  EXPECT_THROW(gaussian_cheb_bound(0.0, 3), std::invalid_argument);
}

TEST(Chebyshev, TransformInvertsSamples) {
  const int P = 7;
  ChebyshevTransform tr(P);
  auto x = chebyshev_nodes(P);
  std::vector<double> f(P), c(P);
  for (int i = 0; i < P; ++i) f[i] = std::sin(2.0 * x[i]);
  tr.apply(f.data(), c.data());
  ChebyshevSeries<double> s(c);
  for (int i = 0; i < P; ++i) EXPECT_NEAR(s(x[i]), f[i], 1e-14);
}
