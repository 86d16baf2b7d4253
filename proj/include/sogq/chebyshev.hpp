#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sogq {

/// First-kind nodes x_i = cos((i - 1/2) pi / P), i = 1..P (decreasing).
inline std::vector<double> chebyshev_nodes(int P) {
  if (P < 1) throw std::invalid_argument("Chebyshev degree must be >= 1");
  std::vector<double> x(P);
  for (int i = 1; i <= P; ++i) x[i - 1] = std::cos((i - 0.5) * std::numbers::pi / P);
  return x;
}

/// Nodes mapped to [a, b].
inline std::vector<double> chebyshev_nodes(int P, double a, double b) {
  auto x = chebyshev_nodes(P);
  for (auto& v : x) v = 0.5 * (a + b) + 0.5 * (b - a) * v;
  return x;
}

/// Coefficient transform: a_n = (2/P) sum_i f(x_i) T_n(x_i), so f = sum' a_n T_n.
class ChebyshevTransform {
 public:
  explicit ChebyshevTransform(int P) : P_(P), c_(static_cast<std::size_t>(P) * P) {
    if (P < 1) throw std::invalid_argument("Chebyshev degree must be >= 1");
    for (int n = 0; n < P; ++n)
      for (int i = 0; i < P; ++i) c_[n * P + i] = 2.0 / P * std::cos(n * (i + 0.5) * std::numbers::pi / P);
  }

  int degree() const { return P_; }

  /// out[n * stride] = sum_i M(n, i) in[i * stride]; in and out must not alias.
  template <class T>
  void apply(const T* in, T* out, std::ptrdiff_t stride = 1) const {
    for (int n = 0; n < P_; ++n) {
      T acc{};
      const double* row = &c_[n * P_];
      for (int i = 0; i < P_; ++i) acc += row[i] * in[i * stride];
      out[n * stride] = acc;
    }
  }

 private:
  int P_;
  std::vector<double> c_;
};

/// Clenshaw evaluation of sum' a_n T_n(x) (half weight on a_0).
template <class T>
T clenshaw(const T* a, int P, double x) {
  T b1{}, b2{};
  for (int n = P - 1; n >= 1; --n) {
    T t = 2.0 * x * b1 - b2 + a[n];
    b2 = b1;
    b1 = t;
  }
  return x * b1 - b2 + 0.5 * a[0];
}

/// T_0..T_{P-1} at x with the half weight folded into T_0.
inline void chebyshev_basis(double x, int P, double* out) {
  out[0] = 0.5;
  if (P > 1) out[1] = x;
  double tm = 1.0, t = x;
  for (int n = 2; n < P; ++n) {
    const double tn = 2.0 * x * t - tm;
    out[n] = tn;
    tm = t;
    t = tn;
  }
}

template <class T = double>
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(std::vector<T> coeffs, double a = -1.0, double b = 1.0) : a_(std::move(coeffs)), lo_(a), hi_(b) {
    if (a_.empty()) throw std::invalid_argument("empty Chebyshev series");
    if (!(b > a)) throw std::invalid_argument("Chebyshev interval must satisfy a < b");
  }

  /// Interpolates samples taken at chebyshev_nodes(P, a, b).
  static ChebyshevSeries interpolate(const std::vector<T>& samples, double a = -1.0, double b = 1.0) {
    const int P = static_cast<int>(samples.size());
    ChebyshevTransform tr(P);
    std::vector<T> c(P);
    tr.apply(samples.data(), c.data());
    return ChebyshevSeries(std::move(c), a, b);
  }

  template <class F>
  static ChebyshevSeries fit(F&& f, int P, double a = -1.0, double b = 1.0) {
    const auto x = chebyshev_nodes(P, a, b);
    std::vector<T> s(P);
    for (int i = 0; i < P; ++i) s[i] = f(x[i]);
    return interpolate(s, a, b);
  }

  int degree() const { return static_cast<int>(a_.size()); }
  const std::vector<T>& coefficients() const { return a_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }

  double to_unit(double x) const { return (2.0 * x - (lo_ + hi_)) / (hi_ - lo_); }

  T operator()(double x) const {
    const double tol = 1e-12 * (hi_ - lo_);
    if (x < lo_ - tol || x > hi_ + tol) throw std::domain_error("Chebyshev evaluation outside the interval");
    double u = to_unit(x);
    u = std::min(1.0, std::max(-1.0, u));
    return clenshaw(a_.data(), degree(), u);
  }

  std::vector<T> evaluate(const std::vector<double>& xs) const {
    std::vector<T> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
    return out;
  }

  ChebyshevSeries& operator+=(const ChebyshevSeries& o) {
    if (o.a_.size() != a_.size()) throw std::invalid_argument("Chebyshev degree mismatch");
    for (std::size_t n = 0; n < a_.size(); ++n) a_[n] += o.a_[n];
    return *this;
  }
  ChebyshevSeries& operator*=(T s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

 private:
  std::vector<T> a_;
  double lo_ = -1.0, hi_ = 1.0;
};

/// Bound 1 / (sqrt(P!) (2 sqrt(2) eta)^P) on the Chebyshev interpolation error of exp(-z^2/s^2), s >= eta Lz.
inline double gaussian_cheb_bound(double eta, int P) {
  if (!(eta > 0.0) || P < 1) throw std::invalid_argument("gaussian_cheb_bound needs eta > 0, P >= 1");
  return std::exp(-0.5 * std::lgamma(P + 1.0) - P * std::log(2.0 * std::numbers::sqrt2 * eta));
}

/// Smallest P with gaussian_cheb_bound(eta, P) <= eps (capped at Pmax).
inline int chebyshev_degree_for(double eta, double eps, int Pmax = 64) {
  for (int P = 1; P <= Pmax; ++P)
    if (gaussian_cheb_bound(eta, P) <= eps) return P;
  return Pmax;
}

}  // namespace sogq
