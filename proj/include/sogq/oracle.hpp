#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "sog_decomposition.hpp"

namespace sogq {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShellSumOptions {
  int shell_limit = 256;        // largest shell index R
  double tol = 1e-12;           // relative
  int first_level = 8;          // first Richardson level R0
  std::size_t max_particles = 1000;
  bool allow_large = false;
};

struct ShellSumResult {
  std::vector<double> potentials;   // extrapolated
  std::vector<double> raw;          // plain partial sum at the last shell
  int shells = 0;
  double last_shell_max = 0.0;      // max over targets of the last complete shell contribution
  double extrapolation_change = 0.0;
  bool converged = false;
};

namespace detail {

/// Contribution of the complete square shell max(|n_x|,|n_y|) = R to every target.
inline void add_shell(const ParticleSystem& sys, int R, std::vector<long double>& acc, std::vector<long double>& shell) {
  const Box& box = sys.box();
  const std::size_t N = sys.size();
  std::fill(shell.begin(), shell.end(), 0.0L);
  auto visit = [&](int nx, int ny) {
    const long double ox = static_cast<long double>(nx) * box.Lx, oy = static_cast<long double>(ny) * box.Ly;
    for (std::size_t i = 0; i < N; ++i) {
      const auto& ri = sys.position(i);
      long double s = 0.0L;
      for (std::size_t j = 0; j < N; ++j) {
        if (R == 0 && i == j) continue;
        const auto& rj = sys.position(j);
        const long double dx = static_cast<long double>(ri[0]) - rj[0] + ox;
        const long double dy = static_cast<long double>(ri[1]) - rj[1] + oy;
        const long double dz = static_cast<long double>(ri[2]) - rj[2];
        s += sys.charge(j) / std::sqrt(dx * dx + dy * dy + dz * dz);
      }
      shell[i] += s;
    }
  };
  if (R == 0) {
    visit(0, 0);
  } else {
    for (int t = -R; t <= R; ++t) {
      visit(t, R);
      visit(t, -R);
    }
    for (int t = -R + 1; t <= R - 1; ++t) {
      visit(R, t);
      visit(-R, t);
    }
  }
  for (std::size_t i = 0; i < N; ++i) acc[i] += shell[i];
}

}  // namespace detail

/// Square-shell ordered image sum. The partial sums converge like 1/R, so partial sums at
/// R0, 2R0, 4R0, ... are Richardson-extrapolated in powers of 1/R.
inline ShellSumResult direct_shell_sum(const ParticleSystem& sys, const ShellSumOptions& opt = {}) {
  if (sys.size() > opt.max_particles && !opt.allow_large)
    throw OracleError("shell-sum oracle limited to " + std::to_string(opt.max_particles) + " particles");
  if (opt.shell_limit < 1 || opt.first_level < 1) throw OracleError("shell limit must be >= 1");
  const std::size_t N = sys.size();
  std::vector<long double> acc(N, 0.0L), shell(N, 0.0L);
  std::vector<std::vector<long double>> levels;
  ShellSumResult res;
  int quiet = 0;
  int next_level = opt.first_level;
  std::vector<long double> prev_best;
  for (int R = 0; R <= opt.shell_limit; ++R) {
    detail::add_shell(sys, R, acc, shell);
    res.shells = R;
    long double smax = 0.0L, amax = 0.0L;
    for (std::size_t i = 0; i < N; ++i) {
      smax = std::max(smax, std::abs(shell[i]));
      amax = std::max(amax, std::abs(acc[i]));
    }
    res.last_shell_max = static_cast<double>(smax);
    quiet = (R > 0 && smax <= opt.tol * amax) ? quiet + 1 : 0;
    if (quiet >= 3) {
      res.converged = true;
      break;
    }
    if (R == next_level) {
      levels.push_back(acc);
      next_level *= 2;
      // Richardson table on the last column; error terms c1/R + c2/R^2 + ...
      const std::size_t L = levels.size();
      std::vector<std::vector<long double>> T = levels;
      for (std::size_t j = 1; j < L; ++j)
        for (std::size_t k = L - 1; k >= j; --k) {
          const long double f = std::ldexp(1.0L, static_cast<int>(j));
          for (std::size_t i = 0; i < N; ++i) T[k][i] = (f * T[k][i] - T[k - 1][i]) / (f - 1.0L);
          if (k == j) break;
        }
      const auto& best = T[L - 1];
      if (!prev_best.empty()) {
        long double dmax = 0.0L, bmax = 0.0L;
        for (std::size_t i = 0; i < N; ++i) {
          dmax = std::max(dmax, std::abs(best[i] - prev_best[i]));
          bmax = std::max(bmax, std::abs(best[i]));
        }
        res.extrapolation_change = static_cast<double>(dmax / std::max(bmax, 1e-300L));
        if (L >= 4 && res.extrapolation_change <= opt.tol) {
          prev_best = best;
          res.converged = true;
          break;
        }
      }
      prev_best = best;
    }
  }
  res.raw.assign(acc.begin(), acc.end());
  if (prev_best.empty() || quiet >= 3) res.potentials = res.raw;
  else res.potentials.assign(prev_best.begin(), prev_best.end());
  return res;
}

struct EwaldOptions {
  double tol = 1e-16;        // target truncation level of each sum
  double real_cutoff = 0.0;  // 0: half the smaller periodic length
};

/// Ewald2D (Parry) potentials for a slab periodic in x, y:
/// real-space erfc sum + k != 0 erfc-mixing sum + k = 0 term + self term.
template <class Real = double>
std::vector<double> ewald2d_potentials(const ParticleSystem& sys, const EwaldOptions& opt = {}) {
  using std::abs;
  const Box& box = sys.box();
  const std::size_t N = sys.size();
  const Real pi = std::numbers::pi_v<Real>;
  const Real A = static_cast<Real>(box.Lx) * box.Ly;
  const Real x = std::sqrt(std::log(Real(1) / static_cast<Real>(opt.tol)));
  const Real rcut = opt.real_cutoff > 0.0 ? Real(opt.real_cutoff) : Real(0.5) * std::min(box.Lx, box.Ly);
  const Real alpha = x / rcut;
  const Real kmax = 2 * alpha * x;

  std::vector<Real> phi(N, Real(0));
  // Real space.
  const int nxr = static_cast<int>(std::ceil(rcut / box.Lx)) + 1, nyr = static_cast<int>(std::ceil(rcut / box.Ly)) + 1;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      const Real dx0 = Real(sys.position(i)[0]) - sys.position(j)[0];
      const Real dy0 = Real(sys.position(i)[1]) - sys.position(j)[1];
      const Real dz = Real(sys.position(i)[2]) - sys.position(j)[2];
      Real s = 0;
      for (int nx = -nxr; nx <= nxr; ++nx)
        for (int ny = -nyr; ny <= nyr; ++ny) {
          if (i == j && nx == 0 && ny == 0) continue;
          const Real dx = dx0 + nx * Real(box.Lx), dy = dy0 + ny * Real(box.Ly);
          const Real r = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (r < rcut) s += std::erfc(alpha * r) / r;
        }
      phi[i] += s * Real(sys.charge(j));
      if (j != i) phi[j] += s * Real(sys.charge(i));
    }
  // Reciprocal space, half plane, grouped by |k|.
  const Real tpx = 2 * pi / Real(box.Lx), tpy = 2 * pi / Real(box.Ly);
  const int nxm = static_cast<int>(std::floor(kmax / tpx)), nym = static_cast<int>(std::floor(kmax / tpy));
  std::map<Real, std::vector<std::pair<int, int>>> groups;
  for (int nx = 0; nx <= nxm; ++nx)
    for (int ny = -nym; ny <= nym; ++ny) {
      if (nx == 0 && ny <= 0) continue;
      const Real k2 = (nx * tpx) * (nx * tpx) + (ny * tpy) * (ny * tpy);
      if (k2 <= kmax * kmax) groups[k2].push_back({nx, ny});
    }
  using C = std::complex<Real>;
  std::vector<C> ex(N * (nxm + 1)), ey(N * (2 * nym + 1));
  for (std::size_t j = 0; j < N; ++j) {
    for (int n = 0; n <= nxm; ++n) ex[j * (nxm + 1) + n] = std::polar(Real(1), n * tpx * Real(sys.position(j)[0]));
    for (int n = -nym; n <= nym; ++n)
      ey[j * (2 * nym + 1) + n + nym] = std::polar(Real(1), n * tpy * Real(sys.position(j)[1]));
  }
  std::vector<C> e(N);
  for (const auto& [k2, modes] : groups) {
    const Real k = std::sqrt(k2), a = k / (2 * alpha);
    std::vector<Real> cs(N * N, Real(0));
    for (const auto& [nx, ny] : modes) {
      for (std::size_t j = 0; j < N; ++j) e[j] = ex[j * (nxm + 1) + nx] * ey[j * (2 * nym + 1) + ny + nym];
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j) cs[i * N + j] += std::real(e[i] * std::conj(e[j]));
    }
    const Real pref = 2 * pi / (A * k);  // factor 2 for the mirrored half plane
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j) {
        const Real z = Real(sys.position(i)[2]) - sys.position(j)[2];
        const Real f = std::exp(k * z) * std::erfc(a + alpha * z) + std::exp(-k * z) * std::erfc(a - alpha * z);
        const Real t = pref * cs[i * N + j] * f;
        phi[i] += t * Real(sys.charge(j));
        if (j != i) phi[j] += t * Real(sys.charge(i));
      }
  }
  // k = 0 and self terms.
  const Real sqpi = std::sqrt(pi);
  for (std::size_t i = 0; i < N; ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < N; ++j) {
      const Real z = Real(sys.position(i)[2]) - sys.position(j)[2];
      s += Real(sys.charge(j)) * (z * std::erf(alpha * z) + std::exp(-alpha * alpha * z * z) / (alpha * sqpi));
    }
    phi[i] += -2 * pi / A * s - 2 * alpha / sqpi * Real(sys.charge(i));
  }
  return std::vector<double>(phi.begin(), phi.end());
}

/// Exact (lattice-summed) u-series split per particle:
/// phi_i(M) = near_coulomb[i] + sum_{l<=M} per_gaussian[l][i], self term included in each Gaussian.
struct SogLatticeTerms {
  std::vector<long double> near_coulomb;
  std::vector<std::vector<long double>> per_gaussian;
  std::vector<double> charges;

  int max_M() const { return static_cast<int>(per_gaussian.size()) - 1; }

  std::vector<double> potentials(int M) const {
    std::vector<double> out(near_coulomb.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      long double v = near_coulomb[i];
      for (int l = 0; l <= M && l <= max_M(); ++l) v += per_gaussian[l][i];
      out[i] = static_cast<double>(v);
    }
    return out;
  }

  long double energy(int M) const {
    long double u = 0.0L;
    for (std::size_t i = 0; i < near_coulomb.size(); ++i) {
      long double v = near_coulomb[i];
      for (int l = 0; l <= M && l <= max_M(); ++l) v += per_gaussian[l][i];
      u += charges[i] * v;
    }
    return 0.5L * u;
  }
};

namespace detail {

/// sum_n exp(-(d + nL)^2 / s^2) written as (sqrt(pi) s / L)(1 + a); returns a.
inline long double theta_excess(long double d, long double s, long double L) {
  const long double pi = std::numbers::pi_v<long double>;
  if (s < 0.5L * L) {
    long double t = 0.0L;
    const int n = static_cast<int>(std::ceil(7.5L * s / L)) + 2;
    for (int k = -n; k <= n; ++k) {
      const long double u = (d + k * L) / s;
      t += std::exp(-u * u);
    }
    return t * L / (std::sqrt(pi) * s) - 1.0L;
  }
  long double a = 0.0L;
  for (int k = 1;; ++k) {
    const long double e = std::exp(-pi * pi * s * s * k * k / (L * L));
    if (e < 1e-40L) break;
    a += 2.0L * e * std::cos(2.0L * pi * k * d / L);
  }
  return a;
}

}  // namespace detail

/// Exact lattice sums of every Gaussian l = 0..M of `d`, plus the minimum-image near Coulomb part.
inline SogLatticeTerms sog_lattice_terms(const ParticleSystem& sys, const SogDecomposition& d) {
  using ld = long double;
  const Box& box = sys.box();
  const std::size_t N = sys.size();
  const ld pi = std::numbers::pi_v<ld>;
  const ld A = static_cast<ld>(box.Lx) * box.Ly;
  const ld rc = d.r_c();
  SogLatticeTerms out;
  out.charges = sys.charges();
  out.near_coulomb.assign(N, 0.0L);
  out.per_gaussian.assign(d.M() + 1, std::vector<ld>(N, 0.0L));
  const ld lb = std::log(static_cast<ld>(d.b()));
  const ld sigma = d.sigma();
  std::vector<ld> w(d.M() + 1), s(d.M() + 1);
  for (int l = 0; l <= d.M(); ++l) {
    w[l] = std::sqrt(2.0L / pi) * lb * std::pow(static_cast<ld>(d.b()), -static_cast<ld>(l)) / sigma;
    s[l] = std::sqrt(2.0L) * std::pow(static_cast<ld>(d.b()), static_cast<ld>(l)) * sigma;
  }
  w[0] *= d.omega();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      const ld qi = sys.charge(i), qj = sys.charge(j);
      const ld dx = static_cast<ld>(sys.position(i)[0]) - sys.position(j)[0];
      const ld dy = static_cast<ld>(sys.position(i)[1]) - sys.position(j)[1];
      const ld dz = static_cast<ld>(sys.position(i)[2]) - sys.position(j)[2];
      const auto mi = min_image_displacement(sys.position(i), sys.position(j), box);
      const ld r2 = static_cast<ld>(mi[0]) * mi[0] + static_cast<ld>(mi[1]) * mi[1] + static_cast<ld>(mi[2]) * mi[2];
      const bool near = i != j && r2 < rc * rc;
      if (near) {
        out.near_coulomb[i] += qj / std::sqrt(r2);
        out.near_coulomb[j] += qi / std::sqrt(r2);
      }
      for (int l = 0; l <= d.M(); ++l) {
        const ld sl = s[l];
        const ld a = detail::theta_excess(dx, sl, box.Lx), b = detail::theta_excess(dy, sl, box.Ly);
        ld lattice;
        if (sl >= 0.5L * box.Lx && sl >= 0.5L * box.Ly) {
          // Neutral systems drop the k = 0 constant pi s^2 / A.
          lattice = pi * sl * sl / A * (std::expm1(-dz * dz / (sl * sl)) * (1 + a) * (1 + b) + a + b + a * b);
        } else {
          lattice = pi * sl * sl / A * std::exp(-dz * dz / (sl * sl)) * (1 + a) * (1 + b);
        }
        ld e = lattice;
        if (near) e -= std::exp(-r2 / (sl * sl));
        if (i == j) {
          out.per_gaussian[l][i] += qi * w[l] * (e - 1.0L);
        } else {
          out.per_gaussian[l][i] += qj * w[l] * e;
          out.per_gaussian[l][j] += qi * w[l] * e;
        }
      }
    }
  return out;
}

/// Full lattice sums sum_j q_j sum_n w_l exp(-|r_ij + n|^2 / s_l^2) over l in [l0, l1], self image included.
/// The k = 0 constant is dropped where the Poisson form is used (exact for neutral systems).
inline std::vector<double> gaussian_lattice_sums(const ParticleSystem& sys, const SogDecomposition& d, int l0, int l1) {
  using ld = long double;
  const Box& box = sys.box();
  const std::size_t N = sys.size();
  const ld pi = std::numbers::pi_v<ld>;
  const ld A = static_cast<ld>(box.Lx) * box.Ly;
  l0 = std::max(l0, 0);
  l1 = std::min(l1, d.M());
  std::vector<ld> acc(N, 0.0L);
  if (l1 < l0) return std::vector<double>(N, 0.0);
  const ld lb = std::log(static_cast<ld>(d.b())), sigma = d.sigma();
  std::vector<ld> w, s;
  for (int l = l0; l <= l1; ++l) {
    ld wl = std::sqrt(2.0L / pi) * lb * std::pow(static_cast<ld>(d.b()), -static_cast<ld>(l)) / sigma;
    if (l == 0) wl *= d.omega();
    w.push_back(wl);
    s.push_back(std::sqrt(2.0L) * std::pow(static_cast<ld>(d.b()), static_cast<ld>(l)) * sigma);
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      const ld dx = static_cast<ld>(sys.position(i)[0]) - sys.position(j)[0];
      const ld dy = static_cast<ld>(sys.position(i)[1]) - sys.position(j)[1];
      const ld dz = static_cast<ld>(sys.position(i)[2]) - sys.position(j)[2];
      ld e = 0.0L;
      for (std::size_t t = 0; t < s.size(); ++t) {
        const ld sl = s[t];
        const ld a = detail::theta_excess(dx, sl, box.Lx), b = detail::theta_excess(dy, sl, box.Ly);
        const ld g = std::exp(-dz * dz / (sl * sl));
        if (sl >= 0.5L * box.Lx && sl >= 0.5L * box.Ly)
          e += w[t] * pi * sl * sl / A * (std::expm1(-dz * dz / (sl * sl)) * (1 + a) * (1 + b) + a + b + a * b);
        else
          e += w[t] * pi * sl * sl / A * g * (1 + a) * (1 + b);
      }
      acc[i] += sys.charge(j) * e;
      if (j != i) acc[j] += sys.charge(i) * e;
    }
  return std::vector<double>(acc.begin(), acc.end());
}

/// U = 1/2 sum q_i phi_i from oracle potentials.
inline double reference_energy(const std::vector<double>& phi, const ParticleSystem& sys) {
  if (phi.size() != sys.size()) throw OracleError("potential and system sizes differ");
  long double u = 0.0L;
  for (std::size_t i = 0; i < phi.size(); ++i) u += static_cast<long double>(sys.charge(i)) * phi[i];
  return static_cast<double>(0.5L * u);
}

/// max_i |a_i - b_i| / max_i |b_i|
inline double relative_max_error(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sizes differ");
  double e = 0.0, m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - b[i]));
    m = std::max(m, std::abs(b[i]));
  }
  return m > 0.0 ? e / m : e;
}

}  // namespace sogq
