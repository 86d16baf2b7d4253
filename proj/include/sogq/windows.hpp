#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "chebyshev.hpp"

namespace sogq {

enum class WindowKind { Gaussian, KaiserBessel, ExpSemicircle };

inline std::string to_string(WindowKind k) {
  switch (k) {
    case WindowKind::Gaussian: return "gaussian";
    case WindowKind::KaiserBessel: return "kb";
    case WindowKind::ExpSemicircle: return "es";
  }
  return "?";
}

inline WindowKind window_kind_from_string(const std::string& s) {
  if (s == "gaussian" || s == "gauss") return WindowKind::Gaussian;
  if (s == "kb" || s == "kaiser-bessel") return WindowKind::KaiserBessel;
  if (s == "es" || s == "exp-semicircle") return WindowKind::ExpSemicircle;
  throw std::invalid_argument("unknown window kind '" + s + "'");
}

/// Shape parameter defaults: S = 0.455 pi P for the Gaussian, beta = factor * P otherwise.
inline double default_window_shape(WindowKind k, int support, double beta_factor = 2.5) {
  return k == WindowKind::Gaussian ? 0.455 * std::numbers::pi * support : beta_factor * support;
}

/// Compactly supported window on one axis with support `support` grid points of spacing h.
struct Window1D {
  WindowKind kind = WindowKind::Gaussian;
  double shape = 1.0;
  int support = 3;
  double h = 1.0;

  Window1D() = default;
  Window1D(WindowKind k, double shape_, int support_, double h_) : kind(k), shape(shape_), support(support_), h(h_) {
    if (support < 3 || support % 2 == 0) throw std::invalid_argument("window support must be odd and >= 3");
    if (!(h > 0.0) || !(shape > 0.0)) throw std::invalid_argument("window spacing and shape must be positive");
  }

  double half_width() const { return 0.5 * (support - 1) * h; }

  /// Gaussian-equivalent shape used in the support condition H^2/S < s^2.
  double effective_shape() const { return kind == WindowKind::Gaussian ? shape : 0.5 * shape; }

  double value(double t) const {
    const double x = t / half_width();
    return std::abs(x) > 1.0 ? 0.0 : profile(x);
  }

  /// Window formula in x = t/H without the support cut (|x| clamped to 1 inside square roots).
  double profile(double x) const {
    const double r = std::sqrt(std::max(0.0, 1.0 - x * x));
    switch (kind) {
      case WindowKind::Gaussian: return std::exp(-shape * x * x);
      case WindowKind::KaiserBessel: return std::cyl_bessel_i(0.0, shape * r) / std::cyl_bessel_i(0.0, shape);
      case WindowKind::ExpSemicircle: return std::exp(shape * (r - 1.0));
    }
    return 0.0;
  }

  /// Fourier transform. Gaussian: untruncated closed form; KB/ES: quadrature of the truncated window.
  double hat(double k) const {
    const double H = half_width();
    if (kind == WindowKind::Gaussian)
      return std::sqrt(std::numbers::pi / shape) * H * std::exp(-k * k * H * H / (4.0 * shape));
    return truncated_hat(k);
  }

  /// Integral of value(t) cos(kt) over [-H, H] with t = H sin(theta), composite Gauss-Legendre.
  double truncated_hat(double k, int refine = 1) const {
    const double H = half_width();
    using GL = boost::math::quadrature::gauss<double, 30>;
    const int panels = refine * std::max(4, static_cast<int>(std::ceil((std::abs(k) * H + shape) / 8.0)));
    const double width = 0.5 * std::numbers::pi / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = p * width;
      sum += GL::integrate(
          [&](double th) {
            const double s = std::sin(th), c = std::cos(th);
            return value(H * s) * std::cos(k * H * s) * c;
          },
          a, a + width);
    }
    return 2.0 * H * sum;
  }
};

/// Default accuracy of adaptively sized window tables.
inline constexpr double kWindowTableTol = 2e-14;

/// Piecewise Chebyshev table of the stencil weights W((f - j) h), f in [-1/2, 1/2], split at f = 0.
class WindowTable {
 public:
  WindowTable() = default;

  WindowTable(const Window1D& w, int nu) : win_(w), nu_(nu) {
    if (nu < 2) throw std::invalid_argument("window polynomial degree must be >= 2");
    const int P = w.support, K = nu + 1;
    coef_.assign(2 * static_cast<std::size_t>(P) * K, 0.0);
    ChebyshevTransform tr(K);
    const auto x = chebyshev_nodes(K);
    std::vector<double> samples(K);
    for (int half = 0; half < 2; ++half) {
      for (int jj = 0; jj < P; ++jj) {
        const int j = jj - (P - 1) / 2;
        const double H = w.half_width();
        const double ta = (piece_f(half, -1.0) - j) * w.h, tb = (piece_f(half, 1.0) - j) * w.h;
        const bool outside = tb <= -H * (1.0 - 1e-12) || ta >= H * (1.0 - 1e-12);
        for (int i = 0; i < K; ++i)
          samples[i] = outside ? 0.0 : w.profile((piece_f(half, x[i]) - j) * w.h / H);
        tr.apply(samples.data(), &coef_[(half * P + jj) * K]);
      }
    }
    max_error_ = 0.0;
    constexpr int kDense = 64;
    std::vector<double> out(P);
    for (int half = 0; half < 2; ++half) {
      for (int i = 1; i < kDense; ++i) {
        const double f = piece_f(half, -1.0 + 2.0 * i / kDense);
        weights(f, out.data());
        for (int jj = 0; jj < P; ++jj) {
          const int j = jj - (P - 1) / 2;
          max_error_ = std::max(max_error_, std::abs(out[jj] - w.value((f - j) * w.h)));
        }
      }
    }
  }

  /// Smallest degree in [4, nu_max] whose measured table error is <= tol.
  static WindowTable adaptive(const Window1D& w, double tol, int nu_max = 24) {
    WindowTable t;
    for (int nu = 4; nu <= nu_max; ++nu) {
      t = WindowTable(w, nu);
      if (t.max_error() <= tol) break;
    }
    return t;
  }

  const Window1D& window() const { return win_; }
  int degree() const { return nu_; }
  int support() const { return win_.support; }
  double max_error() const { return max_error_; }

  /// Stencil weights for fractional offset f = u - round(u) in [-1/2, 1/2]; out[jj] ~ W((f - j) h).
  void weights(double f, double* out) const {
    const int P = win_.support, K = nu_ + 1;
    const int half = f < 0.0 ? 0 : 1;
    const double v = half == 0 ? 4.0 * f + 1.0 : 4.0 * f - 1.0;
    double basis[64];
    chebyshev_basis(std::clamp(v, -1.0, 1.0), K, basis);
    const double* c = &coef_[static_cast<std::size_t>(half) * P * K];
    for (int jj = 0; jj < P; ++jj, c += K) {
      double acc = 0.0;
      for (int n = 0; n < K; ++n) acc += c[n] * basis[n];
      out[jj] = acc;
    }
  }

  /// Exact stencil weights (no polynomial approximation).
  void exact_weights(double f, double* out) const {
    const int P = win_.support;
    for (int jj = 0; jj < P; ++jj) out[jj] = win_.value((f - (jj - (P - 1) / 2)) * win_.h);
  }

 private:
  static double piece_f(int half, double v) { return half == 0 ? 0.25 * (v - 1.0) : 0.25 * (v + 1.0); }

  Window1D win_;
  int nu_ = 0;
  std::vector<double> coef_;
  double max_error_ = 0.0;
};

/// Nearest grid index g0 = round(u) and offset f = u - g0 for coordinate u in grid units.
inline std::pair<long, double> nearest_grid(double u) {
  const double g = std::nearbyint(u);
  return {static_cast<long>(g), u - g};
}

}  // namespace sogq
