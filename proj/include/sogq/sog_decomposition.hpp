#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sogq {

class SogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One tabulated u-series parameter set (sigma = 1 scale).
struct SogPreset {
  double b;
  double r0;
  double omega;
  double energy_error;
  int M_energy;
  double force_error;
  int M_force;
};

inline constexpr std::array<SogPreset, 6> kSogPresets{{
    {2.0, 1.9892536839080267, 0.9944464927622323, 3.12e-2, 16, 9.93e-3, 11},
    {1.62976708826776469, 2.7520026668023417, 1.0078069793438068, 2.33e-3, 31, 6.21e-4, 16},
    {1.48783512395703226, 3.7554672283554990, 0.9919117057598183, 2.29e-4, 46, 7.98e-5, 26},
    {1.32070036405934420, 4.3914554711638349, 1.0018891411481198, 1.18e-6, 76, 5.76e-7, 41},
    {1.21812525709410644, 5.6355288151271085, 1.0009014615603334, 7.14e-10, 166, 5.14e-10, 71},
    {1.14878150173321925, 7.2956245490719404, 1.0000368348358225, 1.30e-15, 271, 1.98e-14, 116},
}};

/// Preset whose b equals the argument to within a relative 1e-12, if any.
inline std::optional<SogPreset> find_preset(double b) {
  for (const auto& p : kSogPresets)
    if (std::abs(p.b - b) <= 1e-12 * p.b) return p;
  return std::nullopt;
}

struct BsaTerms {
  std::vector<double> weights;
  std::vector<double> nodes;
};

/// Geometric nodes s_l = sqrt(2) b^l sigma and weights w_l = sqrt(2/pi) b^-l log(b) / sigma, l = 0..M.
inline BsaTerms bsa_nodes_weights(double b, double sigma, int M, double omega = 1.0) {
  if (!(b > 1.0)) throw SogError("node ratio b must exceed 1");
  if (!(sigma > 0.0)) throw SogError("sigma must be positive");
  if (M < 0) throw SogError("truncation index M must be non-negative");
  BsaTerms t;
  t.weights.resize(M + 1);
  t.nodes.resize(M + 1);
  const double lb = std::log(b);
  const double w0 = std::sqrt(2.0 / std::numbers::pi) * lb / sigma;
  const double s0 = std::numbers::sqrt2 * sigma;
  for (int l = 0; l <= M; ++l) {
    t.weights[l] = w0 * std::pow(b, -l);
    t.nodes[l] = s0 * std::pow(b, l);
  }
  t.weights[0] *= omega;
  return t;
}

/// Aliasing floor (log b)^{-3/2} exp(-pi^2 / (2 log b)).
inline double sog_aliasing_floor(double b) {
  const double lb = std::log(b);
  return std::pow(lb, -1.5) * std::exp(-std::numbers::pi * std::numbers::pi / (2.0 * lb));
}

namespace detail {

using ld = long double;

/// F_b^1 with l = 0..infinity and w_0 scaled by omega, plus its first two r-derivatives.
struct UnitSeries {
  ld F, dF, d2F;   // full series
  ld E0;           // w_0 exp(-r^2/2) without omega
};

inline UnitSeries unit_series(ld b, ld r, ld omega) {
  const ld lb = std::log(b);
  const ld w0 = std::sqrt(ld(2) / std::numbers::pi_v<ld>) * lb;
  UnitSeries u{0, 0, 0, 0};
  ld w = w0, s2 = 2;
  for (int l = 0; l < 100000; ++l) {
    const ld e = w * std::exp(-r * r / s2) * (l == 0 ? omega : ld(1));
    if (l == 0) u.E0 = w * std::exp(-r * r / s2);
    u.F += e;
    u.dF += -2 * r / s2 * e;
    u.d2F += (4 * r * r / (s2 * s2) - 2 / s2) * e;
    if (w < 1e-24L && l > 0) break;
    w /= b;
    s2 *= b * b;
  }
  return u;
}

/// C1 residual with omega eliminated through the C0 equation.
inline ld c1_eliminated(ld b, ld r) {
  const auto u = unit_series(b, r, 1);
  const ld rest = u.F - u.E0;
  const ld drest = u.dF + r * u.E0;
  return 1 - r * r + r * r * r * rest + r * r * drest;
}

}  // namespace detail

struct ContinuitySolution {
  double r0 = 0.0;
  double omega = 0.0;
  double c0_residual = 0.0;  // r0 F(r0) - 1
  double c1_residual = 0.0;  // r0^2 F'(r0) + 1
  int iterations = 0;
  bool from_scan = false;
};

/// Residuals of the sigma = 1 continuity system at (r0, omega).
inline std::pair<double, double> continuity_residuals(double b, double r0, double omega) {
  const auto u = detail::unit_series(b, r0, omega);
  return {static_cast<double>(r0 * u.F - 1), static_cast<double>(detail::ld(r0) * r0 * u.dF + 1)};
}

/// Near-cutoff error terms at sigma = 1: w_{-1} e^{-r0^2 b^2/2} and |omega-1| w_0 e^{-r0^2/2}.
inline std::pair<double, double> near_cutoff_terms(double b, double r0, double omega) {
  const double lb = std::log(b);
  const double w0 = std::sqrt(2.0 / std::numbers::pi) * lb;
  return {w0 * b * std::exp(-0.5 * r0 * r0 * b * b), std::abs(omega - 1.0) * w0 * std::exp(-0.5 * r0 * r0)};
}

/// Solves r0 F(r0) = 1, r0^2 F'(r0) = -1 (sigma = 1, untruncated series) for (r0, omega).
/// Tabulated b: damped Newton seeded from the table. Other b: smallest admissible root from a scan,
/// with Newton from a log-b interpolated seed as fallback.
inline ContinuitySolution solve_c1_continuity(double b, double target = -1.0, double tol = 1e-13) {
  using detail::ld;
  if (!(b > 1.0)) throw SogError("node ratio b must exceed 1");
  if (target <= 0.0) target = std::max(sog_aliasing_floor(b), 1e-16);

  auto residual = [&](ld r, ld om) {
    const auto u = detail::unit_series(b, r, om);
    return std::array<ld, 2>{r * u.F - 1, r * r * u.dF + 1};
  };
  auto admissible = [&](double r, double om) {
    const auto [t1, t2] = near_cutoff_terms(b, r, om);
    return t1 + t2 <= target;
  };

  // Seed from the table, linear in log b.
  ld r = 0, om = 1;
  {
    const double lb = std::log(b);
    std::array<SogPreset, 6> rows = kSogPresets;
    std::sort(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.b < y.b; });
    if (lb <= std::log(rows.front().b)) {
      r = rows.front().r0;
      om = rows.front().omega;
    } else if (lb >= std::log(rows.back().b)) {
      r = rows.back().r0;
      om = rows.back().omega;
    } else {
      for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const double a = std::log(rows[k].b), c = std::log(rows[k + 1].b);
        if (lb >= a && lb <= c) {
          const double t = (lb - a) / (c - a);
          r = rows[k].r0 + t * (rows[k + 1].r0 - rows[k].r0);
          om = rows[k].omega + t * (rows[k + 1].omega - rows[k].omega);
          break;
        }
      }
    }
  }

  ContinuitySolution sol;
  auto newton = [&]() {
    for (int it = 0; it < 200; ++it) {
      auto f = residual(r, om);
      const ld nrm = std::max(std::abs(f[0]), std::abs(f[1]));
      if (nrm < tol) {
        sol.iterations = it;
        return admissible(static_cast<double>(r), static_cast<double>(om));
      }
      const auto u = detail::unit_series(b, r, om);
      const ld j00 = u.F + r * u.dF, j01 = r * u.E0;
      const ld j10 = 2 * r * u.dF + r * r * u.d2F, j11 = r * r * (-r * u.E0);
      const ld det = j00 * j11 - j01 * j10;
      if (!(std::abs(det) > 1e-300L)) return false;
      const ld dr = (f[0] * j11 - f[1] * j01) / det;
      const ld dom = (j00 * f[1] - j10 * f[0]) / det;
      ld lam = 1;
      bool improved = false;
      for (int h = 0; h < 40; ++h, lam /= 2) {
        const ld rn = r - lam * dr, on = om - lam * dom;
        if (!(rn > 0.5L)) continue;
        auto fn = residual(rn, on);
        if (std::max(std::abs(fn[0]), std::abs(fn[1])) < nrm) {
          r = rn;
          om = on;
          improved = true;
          break;
        }
      }
      if (!improved) return false;
    }
    return false;
  };

  // Scan of the omega-eliminated equation on [1, 12]; sign changes and tangential zeros both count.
  auto scan = [&]() {
    const ld lo = 1, hi = 12, step = 1e-3L;
    auto g = [&](ld x) { return detail::c1_eliminated(b, x); };
    auto omega_at = [&](ld x) {
      const auto u = detail::unit_series(b, x, 1);
      return (1 / x - (u.F - u.E0)) / u.E0;
    };
    ld gp = g(lo), gpp = gp;
    for (ld x = lo + step; x <= hi; x += step) {
      const ld gc = g(x);
      ld root = -1;
      if ((gp < 0) != (gc < 0)) {
        ld a = x - step, c = x, ga = gp;
        for (int k = 0; k < 200 && c - a > 1e-18L * c; ++k) {
          const ld m = 0.5L * (a + c);
          const ld gm = g(m);
          if ((gm < 0) == (ga < 0)) {
            a = m;
            ga = gm;
          } else {
            c = m;
          }
        }
        root = 0.5L * (a + c);
      } else if (std::abs(gp) < std::abs(gpp) && std::abs(gp) <= std::abs(gc)) {
        ld a = x - 2 * step, c = x;
        const ld phi = (std::sqrt(ld(5)) - 1) / 2;
        for (int k = 0; k < 200 && c - a > 1e-17L * c; ++k) {
          const ld m1 = c - phi * (c - a), m2 = a + phi * (c - a);
          if (std::abs(g(m1)) < std::abs(g(m2))) c = m2;
          else a = m1;
        }
        const ld m = 0.5L * (a + c);
        if (std::abs(g(m)) < tol) root = m;
      }
      if (root > 0) {
        const ld o = omega_at(root);
        if (admissible(static_cast<double>(root), static_cast<double>(o))) {
          r = root;
          om = o;
          return true;
        }
      }
      gpp = gp;
      gp = gc;
    }
    return false;
  };

  const ld r_seed = r, om_seed = om;
  if (find_preset(b)) {
    if (!newton()) {
      r = r_seed;
      om = om_seed;
      if (!scan()) throw SogError("no admissible continuity root for b = " + std::to_string(b));
      sol.from_scan = true;
    }
  } else if (scan()) {
    sol.from_scan = true;
  } else {
    r = r_seed;
    om = om_seed;
    if (!newton()) throw SogError("no admissible continuity root below r0 = 12 for b = " + std::to_string(b));
  }
  sol.r0 = static_cast<double>(r);
  sol.omega = static_cast<double>(om);
  const auto [c0, c1] = continuity_residuals(b, sol.r0, sol.omega);
  sol.c0_residual = c0;
  sol.c1_residual = c1;
  if (std::max(std::abs(c0), std::abs(c1)) > 1e3 * tol)
    throw SogError("continuity solve did not converge for b = " + std::to_string(b));
  return sol;
}

enum class ErrorQuantity { Energy, Force };

struct DecompositionErrorReport {
  double energy_error = 0.0;
  double force_error = 0.0;
  double aliasing = 0.0;
  double truncation_energy = 0.0;  // b^-M
  double truncation_force = 0.0;   // b^-3M
  double near_energy = 0.0;        // w_{-1} e^{-rc^2/s_{-1}^2} + |omega-1| w_0 e^{-rc^2/s_0^2}
  double near_force = 0.0;         // same with 1/s^2 factors
};

/// Unit-prefactor decomposition error estimate in dimensionless (sigma = 1) form.
inline DecompositionErrorReport estimate_decomposition_error(double b, double r0, double omega, int M) {
  DecompositionErrorReport r;
  r.aliasing = sog_aliasing_floor(b);
  r.truncation_energy = std::pow(b, -static_cast<double>(M));
  r.truncation_force = std::pow(b, -3.0 * M);
  const auto [t1, t2] = near_cutoff_terms(b, r0, omega);
  r.near_energy = t1 + t2;
  const double sm1_sq = 2.0 / (b * b), s0_sq = 2.0;
  r.near_force = t1 / sm1_sq + t2 / s0_sq;
  r.energy_error = r.aliasing + r.truncation_energy + r.near_energy;
  r.force_error = r.aliasing + r.truncation_force + r.near_force;
  return r;
}

/// Smallest M whose estimated error is <= eps; throws with the attainable floor when infeasible.
inline int choose_M(double b, double r0, double omega, double eps, ErrorQuantity q) {
  const auto base = estimate_decomposition_error(b, r0, omega, 0);
  const double floor = base.aliasing + (q == ErrorQuantity::Energy ? base.near_energy : base.near_force);
  if (!(floor < eps))
    throw SogError("tolerance " + std::to_string(eps) + " is below the decomposition floor " +
                   std::to_string(floor) + " for b = " + std::to_string(b));
  const double per = (q == ErrorQuantity::Energy ? 1.0 : 3.0) * std::log(b);
  int M = std::max(0, static_cast<int>(std::floor(std::log(1.0 / (eps - floor)) / per)) - 2);
  for (;; ++M) {
    const auto e = estimate_decomposition_error(b, r0, omega, M);
    if ((q == ErrorQuantity::Energy ? e.energy_error : e.force_error) <= eps) return M;
  }
}

inline int choose_M(double b, double eps, ErrorQuantity q) {
  if (auto p = find_preset(b)) return choose_M(b, p->r0, p->omega, eps, q);
  const auto s = solve_c1_continuity(b);
  return choose_M(b, s.r0, s.omega, eps, q);
}

/// u-series splitting of 1/r: compact near part plus M+1 Gaussians.
class SogDecomposition {
 public:
  SogDecomposition() = default;

  SogDecomposition(double b, double sigma, double omega, double r0, int M)
      : b_(b), sigma_(sigma), omega_(omega), r0_(r0), rc_(r0 * sigma), M_(M) {
    if (!(r0 > 0.0)) throw SogError("r0 must be positive");
    auto t = bsa_nodes_weights(b, sigma, M, omega);
    w_ = std::move(t.weights);
    s_ = std::move(t.nodes);
    self_ = 0.0;
    for (double w : w_) self_ += w;
  }

  /// Decomposition with a fixed cutoff; sigma follows from r_c = r0 sigma.
  static SogDecomposition with_cutoff(double b, double r0, double omega, double r_c, int M) {
    return SogDecomposition(b, r_c / r0, omega, r0, M);
  }

  static SogDecomposition from_preset(const SogPreset& p, double r_c, int M) {
    return with_cutoff(p.b, p.r0, p.omega, r_c, M);
  }

  double b() const { return b_; }
  double sigma() const { return sigma_; }
  double omega() const { return omega_; }
  double r0() const { return r0_; }
  double r_c() const { return rc_; }
  int M() const { return M_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& nodes() const { return s_; }
  double weight(int l) const { return w_[l]; }
  double node(int l) const { return s_[l]; }

  /// Sum of all weights; the self-interaction coefficient.
  double self_coefficient() const { return self_; }

  double far_kernel(double r) const {
    double f = 0.0;
    for (int l = M_; l >= 0; --l) f += w_[l] * std::exp(-r * r / (s_[l] * s_[l]));
    return f;
  }

  double far_kernel_derivative(double r) const {
    double f = 0.0;
    for (int l = M_; l >= 0; --l) f += -2.0 * r / (s_[l] * s_[l]) * w_[l] * std::exp(-r * r / (s_[l] * s_[l]));
    return f;
  }

  double near_kernel(double r) const {
    if (!(r > 0.0)) throw SogError("near kernel is singular at r = 0");
    return r < rc_ ? 1.0 / r - far_kernel(r) : 0.0;
  }

  /// m = max{l : s_l <= eta Lz}, -1 if none.
  int range_split(double Lz, double eta) const {
    if (!(eta > 0.0)) throw SogError("range splitting factor must be positive");
    const double cut = eta * Lz;
    int m = -1;
    while (m + 1 <= M_ && s_[m + 1] <= cut) ++m;
    return m;
  }

  void set_range_split(double Lz, double eta) {
    eta_ = eta;
    split_ = range_split(Lz, eta);
  }
  int split_index() const { return split_; }
  double eta() const { return eta_; }

  /// s_{M+1} >= factor * max(Lx, Ly) and s_0 < r_c.
  bool satisfies_assumption(double Lmax, double factor = 10.0) const {
    return s_[0] < rc_ && s_.back() * b_ >= factor * Lmax;
  }

  DecompositionErrorReport error_estimate() const { return estimate_decomposition_error(b_, r0_, omega_, M_); }

 private:
  double b_ = 2.0, sigma_ = 1.0, omega_ = 1.0, r0_ = 1.0, rc_ = 1.0;
  int M_ = 0;
  std::vector<double> w_, s_;
  double self_ = 0.0;
  double eta_ = 0.0;
  int split_ = -1;
};

}  // namespace sogq
