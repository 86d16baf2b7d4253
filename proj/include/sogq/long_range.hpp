#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "chebyshev.hpp"
#include "fft.hpp"
#include "geometry.hpp"
#include "mid_range.hpp"
#include "sog_decomposition.hpp"
#include "windows.hpp"

namespace sogq {

enum class LongMode { Direct, Fft };

inline std::string to_string(LongMode m) { return m == LongMode::Direct ? "direct" : "fft"; }

inline LongMode long_mode_from_string(const std::string& s) {
  if (s == "direct") return LongMode::Direct;
  if (s == "fft") return LongMode::Fft;
  throw std::invalid_argument("unknown long-range mode '" + s + "'");
}

namespace detail {

/// Chebyshev proxy points on [-Lz/2, Lz/2] and the basis at each target height.
struct ZProxy {
  ZProxy(int P, double Lz) : P(P), Lz(Lz), nodes(chebyshev_nodes(P, -0.5 * Lz, 0.5 * Lz)), tr(P) {}
  void basis(double z, double* out) const { chebyshev_basis(std::clamp(2.0 * z / Lz, -1.0, 1.0), P, out); }
  int P;
  double Lz;
  std::vector<double> nodes;
  ChebyshevTransform tr;
};

inline void require_long_range(const SogDecomposition& d) {
  if (d.split_index() >= d.M()) throw std::invalid_argument("long-range set is empty (m = M)");
}

}  // namespace detail

/// Disk truncation radius implied by a long-range grid count: K = pi I / L.
inline double long_cutoff_from_count(int I_long, double L) { return std::numbers::pi * I_long / L; }

/// Fourier-Chebyshev long-range potential with direct sampling of all modes |k| <= K_max.
inline std::vector<double> long_range_direct(const ParticleSystem& sys, const SogDecomposition& d, int P,
                                             double K_max) {
  detail::require_long_range(d);
  if (P < 1) throw std::invalid_argument("Chebyshev degree must be >= 1");
  const Box& box = sys.box();
  const std::size_t N = sys.size();
  const int m = d.split_index(), M = d.M();
  const detail::ZProxy zp(P, box.Lz);
  const double tpx = 2.0 * std::numbers::pi / box.Lx, tpy = 2.0 * std::numbers::pi / box.Ly;
  const double K2 = K_max * K_max * (1.0 + 1e-12);
  const int nxmax = static_cast<int>(std::floor(K_max / tpx + 1e-9));
  const int nymax = static_cast<int>(std::floor(K_max / tpy + 1e-9));

  // Half-plane modes grouped by |k|^2.
  std::map<double, std::vector<std::pair<int, int>>> shells;
  for (int nx = 0; nx <= nxmax; ++nx)
    for (int ny = -nymax; ny <= nymax; ++ny) {
      if (nx == 0 && ny <= 0) continue;
      const double k2 = (nx * tpx) * (nx * tpx) + (ny * tpy) * (ny * tpy);
      if (k2 <= K2) shells[k2].push_back({nx, ny});
    }

  std::vector<cplx> ex(N * (nxmax + 1)), ey(N * (2 * nymax + 1));
  for (std::size_t j = 0; j < N; ++j) {
    const auto& r = sys.position(j);
    for (int n = 0; n <= nxmax; ++n) ex[j * (nxmax + 1) + n] = std::polar(1.0, -n * tpx * r[0]);
    for (int n = -nymax; n <= nymax; ++n) ey[j * (2 * nymax + 1) + n + nymax] = std::polar(1.0, -n * tpy * r[1]);
  }

  std::vector<double> basis(static_cast<std::size_t>(N) * P);
  for (std::size_t i = 0; i < N; ++i) zp.basis(sys.position(i)[2], &basis[i * P]);

  std::vector<double> phi(N, 0.0);
  std::vector<double> G(static_cast<std::size_t>(P) * N);
  std::vector<double> T0(P), a0(P);

  // k = 0 with neutrality: sum_j q_j sum_l w s^2 expm1(-(z_c - z_j)^2 / s^2).
  for (int c = 0; c < P; ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double dz = zp.nodes[c] - sys.position(j)[2];
      double g = 0.0;
      for (int l = M; l > m; --l) {
        const double s = d.node(l);
        g += d.weight(l) * s * s * std::expm1(-dz * dz / (s * s));
      }
      acc += sys.charge(j) * g;
    }
    T0[c] = acc;
  }
  zp.tr.apply(T0.data(), a0.data());
  for (std::size_t i = 0; i < N; ++i) {
    double v = 0.0;
    for (int n = 0; n < P; ++n) v += a0[n] * basis[i * P + n];
    phi[i] += v;
  }

  std::vector<cplx> T(P), a(P);
  std::vector<double> coef;
  std::vector<double> inv_s2;
  for (const auto& [k2, modes] : shells) {
    coef.clear();
    inv_s2.clear();
    for (int l = m + 1; l <= M; ++l) {
      const double s = d.node(l);
      const double e = 0.25 * s * s * k2;
      if (e > 745.0) break;
      coef.push_back(d.weight(l) * s * s * std::exp(-e));
      inv_s2.push_back(1.0 / (s * s));
    }
    if (coef.empty()) continue;
    for (int c = 0; c < P; ++c)
      for (std::size_t j = 0; j < N; ++j) {
        const double dz = zp.nodes[c] - sys.position(j)[2];
        double g = 0.0;
        for (std::size_t l = 0; l < coef.size(); ++l) g += coef[l] * std::exp(-dz * dz * inv_s2[l]);
        G[c * N + j] = sys.charge(j) * g;
      }
    for (const auto& [nx, ny] : modes) {
      std::fill(T.begin(), T.end(), cplx{});
      for (std::size_t j = 0; j < N; ++j) {
        const cplx e = ex[j * (nxmax + 1) + nx] * ey[j * (2 * nymax + 1) + ny + nymax];
        for (int c = 0; c < P; ++c) T[c] += G[c * N + j] * e;
      }
      zp.tr.apply(T.data(), a.data());
      for (std::size_t i = 0; i < N; ++i) {
        cplx v = 0.0;
        for (int n = 0; n < P; ++n) v += a[n] * basis[i * P + n];
        // e^{+ik.r_i} = conj(e^{-ik.r_i}); half-plane doubles the real part.
        const cplx e = std::conj(ex[i * (nxmax + 1) + nx] * ey[i * (2 * nymax + 1) + ny + nymax]);
        phi[i] += 2.0 * std::real(v * e);
      }
    }
  }
  const double pref = std::numbers::pi / box.area();
  for (auto& v : phi) v *= pref;
  return phi;
}

/// FFT-accelerated long-range solver (uniform x,y grid with windows, Chebyshev proxies in z).
class LongRangeFftSolver {
 public:
  LongRangeFftSolver(const Box& box, const SogDecomposition& d, std::array<int, 2> I, int P, int Q, WindowKind kind,
                     int support, double shape, int nu = 0)
      : box_(box), d_(d), I_(I), P_(P), Q_(Q), zp_(P, box.Lz) {
    detail::require_long_range(d);
    if (P < 1) throw std::invalid_argument("Chebyshev degree must be >= 1");
    if (Q < 1) throw std::invalid_argument("Taylor order must be >= 1");
    for (int a = 0; a < 2; ++a) {
      if (I[a] < 2 || I[a] % 2) throw std::invalid_argument("long-range grid counts must be even and >= 2");
      h_[a] = box[a] / I[a];
      Window1D w(kind, shape, support, h_[a]);
      const double s = d.node(d.split_index() + 1);
      if (!(w.half_width() * w.half_width() / w.effective_shape() < s * s))
        throw std::invalid_argument("long-range window too wide (H^2/S >= s_{m+1}^2)");
      tables_[a] = nu > 0 ? WindowTable(w, nu) : WindowTable::adaptive(w, kWindowTableTol);
    }
    const int nyc = I_[1] / 2 + 1;
    kx_.resize(I_[0]);
    ky_.resize(nyc);
    std::vector<double> ihx(I_[0]), ihy(nyc);
    for (int n = 0; n < I_[0]; ++n) {
      kx_[n] = 2.0 * std::numbers::pi * signed_frequency(n, I_[0]) / box.Lx;
      const double w = tables_[0].window().hat(kx_[n]);
      ihx[n] = 1.0 / (w * w);
    }
    for (int n = 0; n < nyc; ++n) {
      ky_[n] = 2.0 * std::numbers::pi * n / box.Ly;
      const double w = tables_[1].window().hat(ky_[n]);
      ihy[n] = 1.0 / (w * w);
    }
    const std::size_t nk = static_cast<std::size_t>(I_[0]) * nyc;
    inv_hat2_.resize(nk);
    for (int ix = 0; ix < I_[0]; ++ix)
      for (int iy = 0; iy < nyc; ++iy) inv_hat2_[ix * nyc + iy] = ihx[ix] * ihy[iy];
    build_taylor_coefficients();
  }

  int chebyshev_degree() const { return P_; }
  int taylor_order() const { return Q_; }
  std::array<int, 2> grid() const { return I_; }
  const WindowTable& table(int axis) const { return tables_[axis]; }

  /// A_p(k) = ((-1)^p / p!) sum_{l>m} w_l s_l^2 (Lz/s_l)^{2p} e^{-s_l^2 k^2/4} / |W(k)|^2, p = 0..Q-1.
  const std::vector<double>& taylor_coefficients() const { return A_; }

  /// Taylor-accelerated evaluation.
  std::vector<double> potential(const ParticleSystem& sys) const {
    const std::size_t nk = spectrum_size(), ng = grid_size();
    RealFft fwd({I_[0], I_[1]}, Q_ * P_);
    double* S = fwd.real_data();
    std::fill(S, S + ng * Q_ * P_, 0.0);
    const double Lz = box_.Lz;
    std::vector<double> dpow(static_cast<std::size_t>(Q_) * P_);
    Stencil st(*this);
    for (std::size_t j = 0; j < sys.size(); ++j) {
      const auto& r = sys.position(j);
      st.locate(r);
      for (int c = 0; c < P_; ++c) {
        const double u = (zp_.nodes[c] - r[2]) / Lz, u2 = u * u;
        double v = sys.charge(j);
        for (int p = 0; p < Q_; ++p, v *= u2) dpow[static_cast<std::size_t>(p) * P_ + c] = v;
      }
      scatter(st, dpow.data(), Q_ * P_, S, ng);
    }
    fwd.forward();
    const cplx* Sh = fwd.spectrum_data();
    RealFft bwd({I_[0], I_[1]}, P_);
    cplx* U = bwd.spectrum_data();
    std::vector<cplx> T(P_), a(P_);
    for (std::size_t k = 0; k < nk; ++k) {
      for (int c = 0; c < P_; ++c) {
        cplx acc = 0.0;
        for (int p = (k == 0 ? 1 : 0); p < Q_; ++p) acc += A_[p * nk + k] * Sh[(static_cast<std::size_t>(p) * P_ + c) * nk + k];
        T[c] = acc;
      }
      zp_.tr.apply(T.data(), a.data());
      for (int n = 0; n < P_; ++n) U[static_cast<std::size_t>(n) * nk + k] = a[n];
    }
    bwd.backward();
    return gather(sys, bwd.real_data());
  }

  /// Reference evaluation looping over every long-range Gaussian explicitly (no Taylor expansion).
  std::vector<double> potential_per_gaussian(const ParticleSystem& sys) const {
    const std::size_t nk = spectrum_size(), ng = grid_size();
    const int m = d_.split_index(), M = d_.M();
    const double kmin2 = std::pow(2.0 * std::numbers::pi / std::max(box_.Lx, box_.Ly), 2);
    std::vector<cplx> T(static_cast<std::size_t>(P_) * nk, cplx{});
    std::vector<double> zbuf(P_);
    Stencil st(*this);

    // Charge grid: its k != 0 modes carry the constant part of exp(-d^2/s^2) = 1 + expm1(.).
    RealFft charge({I_[0], I_[1]}, 1);
    std::fill(charge.real_data(), charge.real_data() + ng, 0.0);
    std::vector<double> wsum(sys.size());
    for (std::size_t j = 0; j < sys.size(); ++j) {
      st.locate(sys.position(j));
      double q = sys.charge(j);
      scatter(st, &q, 1, charge.real_data(), ng);
      wsum[j] = st.weight_sum();
    }
    charge.forward();

    RealFft grids({I_[0], I_[1]}, P_);
    for (int l = m + 1; l <= M; ++l) {
      const double s = d_.node(l), ws2 = d_.weight(l) * s * s;
      if (0.25 * s * s * kmin2 > 745.0) {
        // Only k = 0 survives; its grid sum is sum_j q_j expm1(.) times the window mass.
        for (int c = 0; c < P_; ++c) {
          double acc = 0.0;
          for (std::size_t j = 0; j < sys.size(); ++j) {
            const double dz = zp_.nodes[c] - sys.position(j)[2];
            acc += sys.charge(j) * wsum[j] * std::expm1(-dz * dz / (s * s));
          }
          T[static_cast<std::size_t>(c) * nk] += ws2 * inv_hat2_[0] * acc;
        }
        continue;
      }
      double* G = grids.real_data();
      std::fill(G, G + ng * P_, 0.0);
      for (std::size_t j = 0; j < sys.size(); ++j) {
        const auto& r = sys.position(j);
        st.locate(r);
        for (int c = 0; c < P_; ++c) {
          const double dz = zp_.nodes[c] - r[2];
          zbuf[c] = sys.charge(j) * std::expm1(-dz * dz / (s * s));
        }
        scatter(st, zbuf.data(), P_, G, ng);
      }
      grids.forward();
      const cplx* Gh = grids.spectrum_data();
      const cplx* Ch = charge.spectrum_data();
      for (std::size_t k = 0; k < nk; ++k) {
        const double k2 = kx_[k / ky_.size()] * kx_[k / ky_.size()] + ky_[k % ky_.size()] * ky_[k % ky_.size()];
        const double f = ws2 * std::exp(-0.25 * s * s * k2) * inv_hat2_[k];
        if (f == 0.0) continue;
        for (int c = 0; c < P_; ++c) {
          cplx v = Gh[static_cast<std::size_t>(c) * nk + k];
          if (k != 0) v += Ch[k];
          T[static_cast<std::size_t>(c) * nk + k] += f * v;
        }
      }
    }
    RealFft bwd({I_[0], I_[1]}, P_);
    cplx* U = bwd.spectrum_data();
    std::vector<cplx> col(P_), a(P_);
    for (std::size_t k = 0; k < nk; ++k) {
      for (int c = 0; c < P_; ++c) col[c] = T[static_cast<std::size_t>(c) * nk + k];
      zp_.tr.apply(col.data(), a.data());
      for (int n = 0; n < P_; ++n) U[static_cast<std::size_t>(n) * nk + k] = a[n];
    }
    bwd.backward();
    return gather(sys, bwd.real_data());
  }

 private:
  struct Stencil {
    explicit Stencil(const LongRangeFftSolver& s) : self(s) {
      for (int a = 0; a < 2; ++a) {
        P[a] = s.tables_[a].support();
        w[a].resize(P[a]);
        idx[a].resize(P[a]);
      }
    }
    void locate(const Vec3& r) {
      for (int a = 0; a < 2; ++a) {
        const auto [g0, f] = nearest_grid((r[a] + 0.5 * self.box_[a]) / self.h_[a]);
        self.tables_[a].weights(f, w[a].data());
        const int half = (P[a] - 1) / 2, n = self.I_[a];
        for (int j = 0; j < P[a]; ++j) {
          long g = (g0 + j - half) % n;
          if (g < 0) g += n;
          idx[a][j] = static_cast<int>(g);
        }
      }
    }
    double weight_sum() const {
      double sx = 0.0, sy = 0.0;
      for (double v : w[0]) sx += v;
      for (double v : w[1]) sy += v;
      return sx * sy;
    }
    const LongRangeFftSolver& self;
    std::array<int, 2> P{};
    std::array<std::vector<double>, 2> w;
    std::array<std::vector<int>, 2> idx;
  };

  std::size_t grid_size() const { return static_cast<std::size_t>(I_[0]) * I_[1]; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(I_[0]) * (I_[1] / 2 + 1); }

  /// Adds vals[b] * W_x W_y into batch b of the stacked grids.
  void scatter(const Stencil& st, const double* vals, int nb, double* grids, std::size_t ng) const {
    for (int a = 0; a < st.P[0]; ++a)
      for (int b = 0; b < st.P[1]; ++b) {
        const double w = st.w[0][a] * st.w[1][b];
        const std::size_t off = static_cast<std::size_t>(st.idx[0][a]) * I_[1] + st.idx[1][b];
        for (int t = 0; t < nb; ++t) grids[t * ng + off] += w * vals[t];
      }
  }

  /// Phi_i = pi h_x h_y sum_g W(r_i - r_g) sum_n U_n(r_g) T_n(z_i); U holds P unnormalized inverse transforms.
  std::vector<double> gather(const ParticleSystem& sys, const double* U) const {
    const std::size_t ng = grid_size();
    const double pref = std::numbers::pi * h_[0] * h_[1] / static_cast<double>(ng);
    std::vector<double> phi(sys.size()), basis(P_), local(P_);
    Stencil st(*this);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const auto& r = sys.position(i);
      st.locate(r);
      zp_.basis(r[2], basis.data());
      std::fill(local.begin(), local.end(), 0.0);
      for (int a = 0; a < st.P[0]; ++a)
        for (int b = 0; b < st.P[1]; ++b) {
          const double w = st.w[0][a] * st.w[1][b];
          const std::size_t off = static_cast<std::size_t>(st.idx[0][a]) * I_[1] + st.idx[1][b];
          for (int n = 0; n < P_; ++n) local[n] += w * U[n * ng + off];
        }
      double v = 0.0;
      for (int n = 0; n < P_; ++n) v += local[n] * basis[n];
      phi[i] = pref * v;
    }
    return phi;
  }

  void build_taylor_coefficients() {
    const std::size_t nk = spectrum_size();
    const std::size_t nyc = ky_.size();
    A_.assign(static_cast<std::size_t>(Q_) * nk, 0.0);
    const int m = d_.split_index(), M = d_.M();
    const double Lz = box_.Lz;
    for (std::size_t k = 0; k < nk; ++k) {
      const double k2 = kx_[k / nyc] * kx_[k / nyc] + ky_[k % nyc] * ky_[k % nyc];
      for (int l = m + 1; l <= M; ++l) {
        const double s = d_.node(l), e = 0.25 * s * s * k2;
        if (e > 745.0) break;
        const double base = d_.weight(l) * s * s * std::exp(-e), r2 = (Lz / s) * (Lz / s);
        double t = base;
        for (int p = 0; p < Q_; ++p) {
          A_[p * nk + k] += t;
          t *= -r2 / (p + 1);
        }
      }
      for (int p = 0; p < Q_; ++p) A_[p * nk + k] *= inv_hat2_[k];
    }
  }

  Box box_;
  SogDecomposition d_;
  std::array<int, 2> I_;
  int P_, Q_;
  detail::ZProxy zp_;
  std::array<double, 2> h_{};
  std::array<WindowTable, 2> tables_;
  std::vector<double> kx_, ky_;
  std::vector<double> inv_hat2_;
  std::vector<double> A_;
};

/// 1 / (Q! (2 eta)^{2Q})
inline double taylor_remainder_bound(double eta, int Q) {
  return std::exp(-std::lgamma(Q + 1.0) - 2.0 * Q * std::log(2.0 * eta));
}

/// Modeled long-range costs: direct P Lx Ly / (eta^2 Lz^2) N versus FFT grid work.
struct LongModeCosts {
  double direct = 0.0;
  double fft = 0.0;
};

inline LongModeCosts long_mode_costs(const Box& box, std::size_t N, double eta, int P, int Q, int support) {
  LongModeCosts c;
  const double n = static_cast<double>(N);
  c.direct = P * box.area() / (eta * eta * box.Lz * box.Lz) * n;
  const double grid = box.area() / (eta * eta * box.Lz * box.Lz);
  c.fft = n * (Q * P + P) * support * support + Q * P * grid * std::log2(std::max(2.0, grid));
  return c;
}

inline LongMode long_mode_select(const Box& box, std::size_t N, double eta, int P, int Q, int support) {
  const auto c = long_mode_costs(box, N, eta, P, Q, support);
  return c.direct <= c.fft ? LongMode::Direct : LongMode::Fft;
}

}  // namespace sogq
