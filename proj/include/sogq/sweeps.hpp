#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "long_range.hpp"
#include "mid_range.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "sog_decomposition.hpp"

namespace sogq {

enum class SweepKind { M, PWindow, I, LambdaZ, Eta, ILong, PCheb, Q };

inline SweepKind sweep_kind_from_string(const std::string& s) {
  static const std::map<std::string, SweepKind> names{
      {"M", SweepKind::M},           {"P_window", SweepKind::PWindow}, {"I", SweepKind::I},
      {"lambda_z", SweepKind::LambdaZ}, {"eta", SweepKind::Eta},        {"I_long", SweepKind::ILong},
      {"P_cheb", SweepKind::PCheb},  {"Q", SweepKind::Q}};
  auto it = names.find(s);
  if (it == names.end()) throw std::invalid_argument("unknown sweep kind '" + s + "'");
  return it->second;
}

struct SweepPoint {
  double param = 0.0;
  double error = 0.0;     // measured, relative
  double estimate = 0.0;  // unit-prefactor model
  std::string failure;    // non-empty when the point could not be evaluated
};

/// Caches oracle quantities shared by the points of a sweep.
class SweepContext {
 public:
  SweepContext(const ParticleSystem& sys, const SolverPlan& base) : sys_(sys), base_(base) {}

  const ParticleSystem& system() const { return sys_; }
  const SolverPlan& base() const { return base_; }

  /// Lattice sums of Gaussians l0..l1 of the plan's decomposition.
  const std::vector<double>& lattice(int l0, int l1) {
    auto key = std::make_pair(l0, l1);
    auto it = lattice_.find(key);
    if (it == lattice_.end()) it = lattice_.emplace(key, gaussian_lattice_sums(sys_, base_.decomposition(), l0, l1)).first;
    return it->second;
  }

  /// Ewald2D reference energy in extended precision.
  double reference_energy_value() {
    if (!energy_) energy_ = reference_energy(ewald2d_potentials<long double>(sys_), sys_);
    return *energy_;
  }

  const SogLatticeTerms& sog_terms(int M) {
    if (!terms_ || terms_->max_M() < M) {
      SolverPlan p = base_;
      p.M = M;
      terms_ = sog_lattice_terms(sys_, p.decomposition());
    }
    return *terms_;
  }

 private:
  const ParticleSystem& sys_;
  SolverPlan base_;
  std::map<std::pair<int, int>, std::vector<double>> lattice_;
  std::optional<double> energy_;
  std::optional<SogLatticeTerms> terms_;
};

namespace detail {

inline double scaled_error(const std::vector<double>& a, const std::vector<double>& ref) {
  return relative_max_error(a, ref);
}

inline std::vector<double> mid_for(const ParticleSystem& sys, const SolverPlan& p) {
  const auto d = p.decomposition();
  return mid_range_potential(sys, d, p.grid(), p.mid.window, p.mid.support, p.mid.shape, p.window_nu);
}

/// Shrinks each window support (odd, >= 3) until it fits the grid and the narrowest Gaussian.
inline void fit_support(SolverPlan& p) {
  const double s0 = p.decomposition().node(0);
  for (int a = 0; a < 3; ++a) {
    auto& P = p.mid.support[a];
    for (; P > 3; P -= 2) {
      p.mid.shape[a] = default_window_shape(p.mid.window, P);
      Window1D w(p.mid.window, p.mid.shape[a], P, p.box[a] / p.mid.I[a]);
      if (P <= p.mid.I[a] && w.half_width() * w.half_width() / w.effective_shape() < s0 * s0) break;
    }
    p.mid.shape[a] = default_window_shape(p.mid.window, P);
  }
}

inline void fit_delta_z(SolverPlan& p) {
  const double hz = p.box.Lz / p.mid.I[2];
  Window1D wz(p.mid.window, p.mid.shape[2], p.mid.support[2], hz);
  p.mid.delta_z = std::max(p.mid.delta_z, default_delta_z(p.mid.window, wz.half_width()));
}

}  // namespace detail

/// Evaluates one sweep point: the base plan with one parameter replaced by `v`.
inline SweepPoint sweep_point(SweepKind kind, double v, SweepContext& ctx) {
  SweepPoint pt;
  pt.param = v;
  const ParticleSystem& sys = ctx.system();
  SolverPlan p = ctx.base();
  const Box& box = p.box;
  try {
    switch (kind) {
      case SweepKind::M: {
        const int M = static_cast<int>(std::lround(v));
        const double ref = ctx.reference_energy_value();
        const double u = static_cast<double>(ctx.sog_terms(M).energy(M));
        pt.error = std::abs(u - ref) / std::abs(ref);
        pt.estimate = estimate_decomposition_error(p.b, p.r0, p.omega, M).energy_error;
        break;
      }
      case SweepKind::PWindow:
      case SweepKind::I:
      case SweepKind::LambdaZ:
      case SweepKind::Eta: {
        if (kind == SweepKind::PWindow) {
          const int P = static_cast<int>(std::lround(v));
          for (int a = 0; a < 3; ++a) {
            p.mid.support[a] = P;
            p.mid.shape[a] = default_window_shape(p.mid.window, P);
          }
          detail::fit_delta_z(p);
        } else if (kind == SweepKind::I) {
          const int I = static_cast<int>(std::lround(v));
          p.mid.I = {I, even_ceil(I * box.Ly / box.Lx), std::max(2, even_ceil(I * box.Lz / box.Lx))};
          detail::fit_support(p);
          detail::fit_delta_z(p);
        } else if (kind == SweepKind::LambdaZ) {
          p.mid.lambda_z = v;
        } else {
          p.eta = v;
        }
        const auto d = p.decomposition();
        const int m = d.split_index();
        if (m < 0) throw std::invalid_argument("no mid-range Gaussians at this eta");
        const auto& ref = ctx.lattice(0, m);
        pt.error = detail::scaled_error(detail::mid_for(sys, p), ref);
        const auto g = p.grid();
        Window1D wz(p.mid.window, p.mid.shape[2], p.mid.support[2], g.h[2]);
        if (kind == SweepKind::PWindow) {
          pt.estimate = std::erfc(std::sqrt(wz.shape));
        } else if (kind == SweepKind::I) {
          const double K = std::numbers::pi / *std::max_element(g.h.begin(), g.h.end());
          pt.estimate = std::exp(-0.25 * d.node(0) * d.node(0) * K * K);
        } else {
          pt.estimate = padding_error(p.mid.lambda_z, box.Lz, p.mid.delta_z, d.node(m) / box.Lz,
                                      wz.half_width() * wz.half_width() / wz.effective_shape());
        }
        break;
      }
      case SweepKind::ILong:
      case SweepKind::PCheb: {
        const auto d = p.decomposition();
        const int m = d.split_index();
        if (m >= d.M()) throw std::invalid_argument("no long-range Gaussians");
        const double s = d.node(m + 1);
        double K = p.lng.K_max;
        int P = p.lng.P;
        if (kind == SweepKind::ILong) {
          const int n = (static_cast<int>(std::lround(v)) - 1) / 2;
          K = 2.0 * std::numbers::pi * n / std::min(box.Lx, box.Ly) * (1.0 + 1e-9);
        } else {
          P = static_cast<int>(std::lround(v));
        }
        const auto& ref = ctx.lattice(m + 1, d.M());
        pt.error = detail::scaled_error(long_range_direct(sys, d, P, K), ref);
        if (kind == SweepKind::ILong) {
          const double Kn = K + 2.0 * std::numbers::pi / std::min(box.Lx, box.Ly);
          pt.estimate = std::exp(-0.25 * s * s * Kn * Kn);
        } else {
          pt.estimate = chebyshev_error(s / box.Lz, box.Lz, P);
        }
        break;
      }
      case SweepKind::Q: {
        const auto d = p.decomposition();
        const int Q = static_cast<int>(std::lround(v));
        LongRangeFftSolver solver(box, d, p.lng.I, p.lng.P, Q, p.lng.window, p.lng.support, p.lng.shape, p.window_nu);
        pt.error = detail::scaled_error(solver.potential(sys), solver.potential_per_gaussian(sys));
        pt.estimate = taylor_remainder_bound(p.eta, Q);
        break;
      }
    }
  } catch (const std::exception& e) {
    pt.failure = e.what();
    pt.error = std::nan("");
  }
  return pt;
}

inline std::vector<SweepPoint> run_sweep(SweepKind kind, const std::vector<double>& values, SweepContext& ctx) {
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(sweep_point(kind, v, ctx));
  return out;
}

/// Least-squares slope and intercept of y against x.
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("linear fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace sogq
