#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "geometry.hpp"
#include "long_range.hpp"
#include "mid_range.hpp"
#include "near_field.hpp"
#include "sog_decomposition.hpp"
#include "windows.hpp"

namespace sogq {

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MidPlan {
  bool enabled = false;
  std::array<int, 3> I{2, 2, 2};
  double lambda_z = 1.0;
  double delta_z = 0.0;
  WindowKind window = WindowKind::KaiserBessel;
  std::array<int, 3> support{3, 3, 3};
  std::array<double, 3> shape{7.5, 7.5, 7.5};
  double K_max = 0.0;
};

struct LongPlan {
  bool enabled = false;
  LongMode mode = LongMode::Direct;
  int P = 1;
  int Q = 1;
  double K_max = 0.0;
  std::array<int, 2> I{2, 2};
  WindowKind window = WindowKind::KaiserBessel;
  int support = 3;
  double shape = 7.5;

  /// Modes along one axis kept by the disk truncation, 2 floor(K L / (2 pi)) + 1.
  int direct_count(double L) const {
    return 2 * static_cast<int>(std::floor(K_max * L / (2.0 * std::numbers::pi) + 1e-9)) + 1;
  }
};

/// Complete solver configuration for one geometry and tolerance.
struct SolverPlan {
  Box box;
  std::size_t N = 0;
  double eps = 1e-6;
  double b = 2.0, r0 = 1.0, omega = 1.0, r_c = 1.0;
  int M = 16;
  double eta = 1.0;
  NearMode near_mode = NearMode::Table;
  int window_nu = 0;
  double C_rat = 50.0;
  MidPlan mid;
  LongPlan lng;

  double rho() const { return N / box.volume(); }
  double rho_star() const {
    if (!mid.enabled) return rho();
    return N / (box.area() * grid().Lz_star);
  }

  SogDecomposition decomposition() const {
    auto d = SogDecomposition::with_cutoff(b, r0, omega, r_c, M);
    d.set_range_split(box.Lz, eta);
    return d;
  }

  GridSpec grid() const { return make_grid_spec(box, mid.I, mid.lambda_z, mid.delta_z); }

  int split_index() const { return decomposition().split_index(); }
};

struct PlanOptions {
  double C_rat = 50.0;
  double rc_tuning = 5.0;
  double margin = 0.05;
  double safety = 1.1;
  std::optional<double> r_c;
  std::optional<double> b;
  std::optional<int> M;
  WindowKind mid_window = WindowKind::KaiserBessel;
  WindowKind long_window = WindowKind::KaiserBessel;
  std::optional<LongMode> long_mode;
  int Q_max = 16;
  int P_max = 32;
  double lambda_min = 1.0, lambda_max = 3.0, lambda_step = 0.05;
  double assumption_factor = 10.0;
};

struct CostBreakdown {
  double near = 0.0;
  double gridding = 0.0;
  double mid_fft = 0.0;
  double long_direct = 0.0;
  double long_gridding = 0.0;
  double long_fft = 0.0;
  double total() const { return near + gridding + mid_fft + long_direct + long_gridding + long_fft; }
};

struct ErrorBreakdown {
  double decomposition = 0.0;
  double mid_grid = 0.0, mid_window = 0.0, mid_padding = 0.0;
  double long_fourier = 0.0, long_chebyshev = 0.0, long_taylor = 0.0;
};

/// erfc[lambda (Lz + delta) / (2 sqrt(eta^2 Lz^2 - H^2/S))]
inline double padding_error(double lambda_z, double Lz, double delta_z, double eta, double H2_over_S) {
  const double d = eta * eta * Lz * Lz - H2_over_S;
  if (!(d > 0.0)) return 1.0;
  return std::erfc(lambda_z * (Lz + delta_z) / (2.0 * std::sqrt(d)));
}

/// (2 sqrt2 eta)^-P / (eta Lz sqrt(P!))
inline double chebyshev_error(double eta, double Lz, int P) {
  return std::exp(-P * std::log(2.0 * std::numbers::sqrt2 * eta) - std::log(eta * Lz) - 0.5 * std::lgamma(P + 1.0));
}

/// Remainder of the Q-term Taylor series of exp(-u^2 / eta^2), |u| <= 1.
inline double taylor_remainder(double eta, int Q) {
  return std::exp(-std::lgamma(Q + 1.0) - 2.0 * Q * std::log(eta));
}

/// Shape parameter S ~ erfcinv(eps)^2 and the smallest odd support with pi (P - 1) / 2 >= S.
inline int window_support_for(double eps) {
  const double x = boost::math::erfc_inv(std::clamp(eps, 1e-300, 1.0));
  const double S = x * x;
  int P = static_cast<int>(std::ceil(2.0 * S / std::numbers::pi + 1.0 - 1e-12));
  if (P % 2 == 0) ++P;
  return std::max(3, P);
}


/// Expected neighbour volume of a ball of radius r inside a slab of thickness Lz, centred.
inline double slab_ball_volume(double r, double Lz) {
  const double h = std::min(r, 0.5 * Lz);
  return 2.0 * std::numbers::pi * (r * r * h - h * h * h / 3.0);
}

/// r_c with the bulk neighbour count of t rho^{-1/3}, solved for the slab volume, clamped.
inline double choose_cutoff(const Box& box, std::size_t N, double tuning) {
  const double rho = N / box.volume();
  const double target = 4.0 / 3.0 * std::numbers::pi * tuning * tuning * tuning / rho;
  const double rmax = 0.5 * std::min(box.Lx, box.Ly);
  if (slab_ball_volume(rmax, box.Lz) <= target) return rmax;
  double lo = 0.0, hi = rmax;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slab_ball_volume(mid, box.Lz) < target ? lo : hi) = mid;
  }
  return hi;
}

/// Decomposition error floor (aliasing plus near-cutoff terms) of a preset.
inline double preset_floor(const SogPreset& p) {
  const auto e = estimate_decomposition_error(p.b, p.r0, p.omega, 0);
  return e.aliasing + e.near_energy;
}

/// Coarsest preset whose floor is at most `budget`.
inline SogPreset choose_preset(double budget) {
  for (const auto& p : kSogPresets)
    if (preset_floor(p) <= budget) return p;
  const auto& best = kSogPresets.back();
  std::ostringstream os;
  os << "tolerance " << budget << " below the finest decomposition floor " << preset_floor(best)
     << " (b = " << best.b << ")";
  throw PlanError(os.str());
}

/// Cost terms with unit constants: near, gridding, mid FFT, direct long range, long-range gridding and FFT.
inline CostBreakdown predict_cost(const SolverPlan& plan, std::size_t N) {
  CostBreakdown c;
  const double n = static_cast<double>(N);
  const double rho = N / plan.box.volume();
  const double logn = std::log(std::max(2.0, n));
  const double rc3 = plan.r_c * plan.r_c * plan.r_c;
  c.near = 4.0 * std::numbers::pi * rc3 * rho * n;
  if (plan.mid.enabled) {
    const auto& P = plan.mid.support;
    c.gridding = static_cast<double>(P[0]) * P[1] * P[2] * n;
    c.mid_fft = plan.mid.lambda_z * (1.0 + plan.mid.delta_z / plan.box.Lz) / (rc3 * rho) * n * logn;
  }
  if (plan.lng.enabled) {
    const double Lz = plan.box.Lz, A = plan.box.area();
    if (plan.lng.mode == LongMode::Direct) {
      c.long_direct = plan.C_rat * plan.lng.P * A / (plan.eta * plan.eta * Lz * Lz) * n;
    } else {
      const auto d = plan.decomposition();
      const double s = d.node(d.split_index() + 1);
      c.long_gridding = static_cast<double>(plan.lng.P) * plan.lng.support * plan.lng.support * n;
      c.long_fft = plan.lng.P * A / (s * s) * n * logn;
    }
  }
  return c;
}

/// Unit-prefactor error estimates of every stage of a plan.
inline ErrorBreakdown predict_error(const SolverPlan& plan) {
  ErrorBreakdown e;
  const auto d = plan.decomposition();
  const auto rep = d.error_estimate();
  e.decomposition = rep.energy_error;
  const int m = d.split_index();
  if (plan.mid.enabled && m >= 0) {
    const double s0 = d.node(0);
    const auto g = plan.grid();
    double kn = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) kn = std::min(kn, std::numbers::pi / g.h[a]);
    e.mid_grid = std::exp(-0.25 * s0 * s0 * kn * kn);
    Window1D wz(plan.mid.window, plan.mid.shape[2], plan.mid.support[2], g.h[2]);
    e.mid_window = std::erfc(std::sqrt(wz.shape));
    e.mid_padding = padding_error(plan.mid.lambda_z, plan.box.Lz, plan.mid.delta_z, plan.eta,
                                  wz.half_width() * wz.half_width() / wz.effective_shape());
  }
  if (plan.lng.enabled && m < d.M()) {
    const double s = d.node(m + 1);
    const double K = plan.lng.K_max;
    e.long_fourier = std::exp(-0.25 * s * s * K * K);
    e.long_chebyshev = chebyshev_error(plan.eta, plan.box.Lz, plan.lng.P);
    if (plan.lng.mode == LongMode::Fft) e.long_taylor = taylor_remainder(s / plan.box.Lz, plan.lng.Q);
  }
  return e;
}

struct FreeDirectionChoice {
  int m = -1;
  double eta = 0.0;
  double lambda_z = 1.0;
  int P = 1;
  double cost = 0.0;
};

/// Exhaustive search over the split index m (eta = s_m / Lz), lambda_z on a lattice and P in 1..P_max for
/// min lambda (1 + delta/Lz) / (r_c^3 rho) N log N + C_rat P Lx Ly / (eta^2 Lz^2) N subject to
/// padding_error <= eps and chebyshev_error <= eps.
inline FreeDirectionChoice optimize_free_direction(const Box& box, std::size_t N, const SogDecomposition& d,
                                                   double delta_z, double H2_over_S, double eps,
                                                   const PlanOptions& opt) {
  if (!(opt.C_rat >= 1.0 && opt.C_rat <= 1000.0)) throw PlanError("C_rat must lie in [1, 1000]");
  const double n = static_cast<double>(N), rho = N / box.volume(), Lz = box.Lz;
  const double rc3 = d.r_c() * d.r_c() * d.r_c();
  const double logn = std::log(std::max(2.0, n));
  const int steps = static_cast<int>(std::lround((opt.lambda_max - opt.lambda_min) / opt.lambda_step));
  std::optional<FreeDirectionChoice> best;
  for (int m = -1; m < d.M(); ++m) {
    FreeDirectionChoice c;
    c.m = m;
    c.eta = (m >= 0 ? d.node(m) : d.node(0) / d.b()) / Lz;
    double fft = 0.0;
    if (m >= 0) {
      bool ok = false;
      for (int i = 0; i <= steps; ++i) {
        const double lam = opt.lambda_min + i * opt.lambda_step;
        if (padding_error(lam, Lz, delta_z, c.eta, H2_over_S) <= eps) {
          c.lambda_z = lam;
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      fft = c.lambda_z * (1.0 + delta_z / Lz) / (rc3 * rho) * n * logn;
    }
    c.P = 0;
    for (int P = 1; P <= opt.P_max; ++P)
      if (chebyshev_error(c.eta, Lz, P) <= eps) {
        c.P = P;
        break;
      }
    if (c.P == 0) continue;
    c.cost = fft + opt.C_rat * c.P * box.area() / (c.eta * c.eta * Lz * Lz) * n;
    if (!best || c.cost < best->cost) best = c;
  }
  if (!best) throw PlanError("no feasible (lambda_z, eta, P) for the free direction");
  return *best;
}

/// Full pipeline: preset, cutoff, decomposition, mid grid and window, free-direction optimization, long range.
inline SolverPlan select_parameters(std::size_t N, const Box& box, double eps, const PlanOptions& opt = {}) {
  if (N < 1) throw PlanError("need at least one particle");
  if (!(eps >= 1e-15 && eps < 1.0)) throw PlanError("tolerance must lie in [1e-15, 1)");
  const double budget = eps / 3.0;
  SolverPlan plan;
  plan.box = box;
  plan.N = N;
  plan.eps = eps;
  plan.C_rat = opt.C_rat;

  SogPreset preset = choose_preset(budget);
  if (opt.b) {
    auto p = find_preset(*opt.b);
    if (!p) throw PlanError("no tabulated decomposition with b = " + std::to_string(*opt.b));
    preset = *p;
  }
  plan.b = preset.b;
  plan.r0 = preset.r0;
  plan.omega = preset.omega;

  const double rmax = 0.5 * std::min(box.Lx, box.Ly);
  plan.r_c = opt.r_c ? *opt.r_c : choose_cutoff(box, N, opt.rc_tuning);
  const double s0 = std::numbers::sqrt2 * plan.r_c / plan.r0;
  plan.r_c = std::clamp(plan.r_c, std::min(s0 * (1.0 + opt.margin), rmax), rmax);

  if (opt.M) {
    plan.M = *opt.M;
  } else {
    plan.M = choose_M(plan.b, plan.r0, plan.omega, budget, ErrorQuantity::Energy);
    const double sigma = plan.r_c / plan.r0, Lmax = std::max(box.Lx, box.Ly);
    while (std::numbers::sqrt2 * sigma * std::pow(plan.b, plan.M + 1) < opt.assumption_factor * Lmax) ++plan.M;
  }
  auto d = SogDecomposition::with_cutoff(plan.b, plan.r0, plan.omega, plan.r_c, plan.M);

  // Mid-range grid and window.
  const double root = std::sqrt(std::log(1.0 / budget));
  plan.mid.window = opt.mid_window;
  plan.mid.K_max = 2.0 * opt.safety * root / d.node(0);
  const int Pw = window_support_for(budget);
  for (int a = 0; a < 3; ++a) {
    plan.mid.I[a] = grid_count_for(plan.mid.K_max, box[a]);
    plan.mid.support[a] = Pw;
    plan.mid.shape[a] = default_window_shape(opt.mid_window, Pw);
    for (;;) {
      Window1D w(opt.mid_window, plan.mid.shape[a], Pw, box[a] / plan.mid.I[a]);
      if (w.half_width() * w.half_width() / w.effective_shape() < d.node(0) * d.node(0) && Pw <= plan.mid.I[a]) break;
      plan.mid.I[a] += 2;
    }
  }
  Window1D wz(opt.mid_window, plan.mid.shape[2], Pw, box.Lz / plan.mid.I[2]);
  const double Hz = wz.half_width();
  plan.mid.delta_z = default_delta_z(opt.mid_window, Hz);
  const double H2S = Hz * Hz / wz.effective_shape();

  const auto fd = optimize_free_direction(box, N, d, plan.mid.delta_z, H2S, budget, opt);
  // Nudge eta above s_m / Lz so the split survives rounding.
  plan.eta = fd.eta * (1.0 + 1e-12);
  d.set_range_split(box.Lz, plan.eta);
  const int m = d.split_index();
  plan.mid.enabled = m >= 0;
  plan.mid.lambda_z = plan.mid.enabled ? fd.lambda_z : 1.0;

  // Long range.
  plan.lng.enabled = m < d.M();
  plan.lng.P = fd.P;
  if (plan.lng.enabled) {
    const double s = d.node(m + 1);
    plan.lng.K_max = 2.0 * opt.safety * root / s;
    plan.lng.window = opt.long_window;
    const int Pl = window_support_for(budget);
    plan.lng.support = Pl;
    plan.lng.shape = default_window_shape(opt.long_window, Pl);
    for (int a = 0; a < 2; ++a) {
      plan.lng.I[a] = grid_count_for(plan.lng.K_max, box[a]);
      for (;;) {
        Window1D w(opt.long_window, plan.lng.shape, Pl, box[a] / plan.lng.I[a]);
        if (w.half_width() * w.half_width() / w.effective_shape() < s * s && Pl <= plan.lng.I[a]) break;
        plan.lng.I[a] += 2;
      }
    }
    plan.lng.Q = 0;
    for (int Q = 1; Q <= opt.Q_max; ++Q)
      if (taylor_remainder(s / box.Lz, Q) <= budget) {
        plan.lng.Q = Q;
        break;
      }
    if (opt.long_mode) {
      plan.lng.mode = *opt.long_mode;
      if (plan.lng.mode == LongMode::Fft && plan.lng.Q == 0)
        throw PlanError("Taylor order exceeds Q_max for the FFT long-range mode");
    } else if (plan.lng.Q == 0) {
      plan.lng.mode = LongMode::Direct;
    } else {
      plan.lng.mode = LongMode::Direct;
      const double direct = predict_cost(plan, N).total();
      plan.lng.mode = LongMode::Fft;
      const double fft = predict_cost(plan, N).total();
      plan.lng.mode = direct <= fft ? LongMode::Direct : LongMode::Fft;
    }
    if (plan.lng.Q == 0) plan.lng.Q = opt.Q_max;
  }
  return plan;
}

// ---- key = value configuration ----

namespace detail {

template <class T>
std::string fmt(const T& v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::map<std::string, std::string> plan_to_map(const SolverPlan& p) {
  using detail::fmt;
  std::map<std::string, std::string> kv;
  kv["Lx"] = fmt(p.box.Lx);
  kv["Ly"] = fmt(p.box.Ly);
  kv["Lz"] = fmt(p.box.Lz);
  kv["N"] = fmt(p.N);
  kv["eps"] = fmt(p.eps);
  kv["b"] = fmt(p.b);
  kv["r0"] = fmt(p.r0);
  kv["omega"] = fmt(p.omega);
  kv["r_c"] = fmt(p.r_c);
  kv["M"] = fmt(p.M);
  kv["eta"] = fmt(p.eta);
  kv["near_mode"] = p.near_mode == NearMode::Table ? "table" : "direct";
  kv["window_nu"] = fmt(p.window_nu);
  kv["C_rat"] = fmt(p.C_rat);
  kv["mid.enabled"] = p.mid.enabled ? "1" : "0";
  const char* ax[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    kv[std::string("mid.I") + ax[a]] = fmt(p.mid.I[a]);
    kv[std::string("mid.support_") + ax[a]] = fmt(p.mid.support[a]);
    kv[std::string("mid.shape_") + ax[a]] = fmt(p.mid.shape[a]);
  }
  kv["mid.lambda_z"] = fmt(p.mid.lambda_z);
  kv["mid.delta_z"] = fmt(p.mid.delta_z);
  kv["mid.window"] = to_string(p.mid.window);
  kv["mid.K_max"] = fmt(p.mid.K_max);
  kv["long.enabled"] = p.lng.enabled ? "1" : "0";
  kv["long.mode"] = to_string(p.lng.mode);
  kv["long.P"] = fmt(p.lng.P);
  kv["long.Q"] = fmt(p.lng.Q);
  kv["long.K_max"] = fmt(p.lng.K_max);
  kv["long.Ix"] = fmt(p.lng.I[0]);
  kv["long.Iy"] = fmt(p.lng.I[1]);
  kv["long.window"] = to_string(p.lng.window);
  kv["long.support"] = fmt(p.lng.support);
  kv["long.shape"] = fmt(p.lng.shape);
  return kv;
}

inline void write_plan(std::ostream& out, const SolverPlan& p) {
  for (const auto& [k, v] : plan_to_map(p)) out << k << " = " << v << '\n';
}

/// Applies key = value lines onto `p`. '#' starts a comment. Unknown keys and bad values are errors.
inline void apply_config(std::istream& in, SolverPlan& p) {
  std::string line;
  int lineno = 0;
  const auto known = plan_to_map(p);
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw PlanError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
    if (!known.count(key)) throw PlanError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    auto num = [&](auto& dst) {
      std::istringstream is(val);
      std::remove_reference_t<decltype(dst)> v{};
      if (!(is >> v) || !(is >> std::ws).eof())
        throw PlanError("line " + std::to_string(lineno) + ": bad value '" + val + "' for " + key);
      dst = v;
    };
    auto flag = [&](bool& dst) {
      if (val != "0" && val != "1" && val != "true" && val != "false")
        throw PlanError("line " + std::to_string(lineno) + ": bad boolean '" + val + "' for " + key);
      dst = val == "1" || val == "true";
    };
    try {
      if (key == "Lx") num(p.box.Lx);
      else if (key == "Ly") num(p.box.Ly);
      else if (key == "Lz") num(p.box.Lz);
      else if (key == "N") num(p.N);
      else if (key == "eps") num(p.eps);
      else if (key == "b") num(p.b);
      else if (key == "r0") num(p.r0);
      else if (key == "omega") num(p.omega);
      else if (key == "r_c") num(p.r_c);
      else if (key == "M") num(p.M);
      else if (key == "eta") num(p.eta);
      else if (key == "near_mode") {
        if (val != "table" && val != "direct") throw PlanError("bad near mode '" + val + "'");
        p.near_mode = val == "table" ? NearMode::Table : NearMode::Direct;
      } else if (key == "window_nu") num(p.window_nu);
      else if (key == "C_rat") num(p.C_rat);
      else if (key == "mid.enabled") flag(p.mid.enabled);
      else if (key == "mid.Ix") num(p.mid.I[0]);
      else if (key == "mid.Iy") num(p.mid.I[1]);
      else if (key == "mid.Iz") num(p.mid.I[2]);
      else if (key == "mid.support_x") num(p.mid.support[0]);
      else if (key == "mid.support_y") num(p.mid.support[1]);
      else if (key == "mid.support_z") num(p.mid.support[2]);
      else if (key == "mid.shape_x") num(p.mid.shape[0]);
      else if (key == "mid.shape_y") num(p.mid.shape[1]);
      else if (key == "mid.shape_z") num(p.mid.shape[2]);
      else if (key == "mid.lambda_z") num(p.mid.lambda_z);
      else if (key == "mid.delta_z") num(p.mid.delta_z);
      else if (key == "mid.window") p.mid.window = window_kind_from_string(val);
      else if (key == "mid.K_max") num(p.mid.K_max);
      else if (key == "long.enabled") flag(p.lng.enabled);
      else if (key == "long.mode") p.lng.mode = long_mode_from_string(val);
      else if (key == "long.P") num(p.lng.P);
      else if (key == "long.Q") num(p.lng.Q);
      else if (key == "long.K_max") num(p.lng.K_max);
      else if (key == "long.Ix") num(p.lng.I[0]);
      else if (key == "long.Iy") num(p.lng.I[1]);
      else if (key == "long.window") p.lng.window = window_kind_from_string(val);
      else if (key == "long.support") num(p.lng.support);
      else if (key == "long.shape") num(p.lng.shape);
    } catch (const std::invalid_argument& e) {
      throw PlanError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline SolverPlan read_plan(std::istream& in) {
  SolverPlan p;
  apply_config(in, p);
  return p;
}

inline bool operator==(const MidPlan& a, const MidPlan& b) {
  return a.enabled == b.enabled && a.I == b.I && a.lambda_z == b.lambda_z && a.delta_z == b.delta_z &&
         a.window == b.window && a.support == b.support && a.shape == b.shape && a.K_max == b.K_max;
}

inline bool operator==(const LongPlan& a, const LongPlan& b) {
  return a.enabled == b.enabled && a.mode == b.mode && a.P == b.P && a.Q == b.Q && a.K_max == b.K_max &&
         a.I == b.I && a.window == b.window && a.support == b.support && a.shape == b.shape;
}

inline bool operator==(const SolverPlan& a, const SolverPlan& b) { return plan_to_map(a) == plan_to_map(b); }

}  // namespace sogq
