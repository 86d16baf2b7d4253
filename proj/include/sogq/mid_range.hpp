#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fft.hpp"
#include "geometry.hpp"
#include "sog_decomposition.hpp"
#include "windows.hpp"

namespace sogq {

/// Uniform grid on [-Lx/2, Lx/2) x [-Ly/2, Ly/2) x [-Lz*/2, Lz*/2), zero-padded in z only.
struct GridSpec {
  std::array<int, 3> I{};   // I_x, I_y, I_z
  std::array<double, 3> h{};
  double delta_z = 0.0;
  double lambda_z = 1.0;
  int delta_Iz = 0;
  int Iz_star = 0;
  double Lz_star = 0.0;

  std::array<int, 3> shape() const { return {I[0], I[1], Iz_star}; }
  std::size_t size() const { return static_cast<std::size_t>(I[0]) * I[1] * Iz_star; }
  double cell_volume() const { return h[0] * h[1] * h[2]; }
};

inline int even_ceil(double x) { return 2 * static_cast<int>(std::ceil(x / 2.0 - 1e-12)); }

inline GridSpec make_grid_spec(const Box& box, std::array<int, 3> I, double lambda_z, double delta_z) {
  for (int d = 0; d < 3; ++d)
    if (I[d] < 2 || I[d] % 2) throw std::invalid_argument("grid counts must be even and >= 2");
  if (!(lambda_z >= 1.0)) throw std::invalid_argument("zero-padding factor must be >= 1");
  if (!(delta_z >= 0.0)) throw std::invalid_argument("z extension must be non-negative");
  GridSpec g;
  g.I = I;
  for (int d = 0; d < 3; ++d) g.h[d] = box[d] / I[d];
  g.delta_z = delta_z;
  g.lambda_z = lambda_z;
  g.delta_Iz = static_cast<int>(std::ceil(delta_z / g.h[2] - 1e-12));
  g.Iz_star = std::max(2, even_ceil(lambda_z * (I[2] + g.delta_Iz)));
  g.Lz_star = g.h[2] * g.Iz_star;
  return g;
}

/// Extension delta_z = 2 H_z (Gaussian) or 2.6 H_z (KB, ES).
inline double default_delta_z(WindowKind k, double Hz) { return (k == WindowKind::Gaussian ? 2.0 : 2.6) * Hz; }

/// I_d = 2 ceil(K L_d / (2 pi)).
inline int grid_count_for(double K, double L) { return std::max(2, even_ceil(K * L / std::numbers::pi)); }

/// Mid-range Fourier spectral solver: gridding, 3D FFT, scaling, inverse FFT, gathering.
class MidRangeSolver {
 public:
  MidRangeSolver(const Box& box, const SogDecomposition& d, const GridSpec& g, WindowKind kind,
                 std::array<int, 3> support, std::array<double, 3> shape, int nu = 0)
      : box_(box), grid_(g), m_(d.split_index()), fft_({g.I[0], g.I[1], g.Iz_star}) {
    if (m_ < 0) throw std::invalid_argument("mid-range solver needs split index m >= 0");
    for (int a = 0; a < 3; ++a) {
      Window1D w(kind, shape[a], support[a], g.h[a]);
      if (!(w.half_width() * w.half_width() / w.effective_shape() < d.node(0) * d.node(0)))
        throw std::invalid_argument("window too wide for the narrowest Gaussian (H^2/S >= s_0^2)");
      tables_[a] = nu > 0 ? WindowTable(w, nu) : WindowTable::adaptive(w, kWindowTableTol);
    }
    if (support[2] > g.Iz_star) throw std::invalid_argument("window support exceeds the extended z grid");
    build_multiplier(d);
  }

  const GridSpec& grid() const { return grid_; }
  const WindowTable& table(int axis) const { return tables_[axis]; }
  const std::vector<double>& multiplier() const { return mult_; }
  int split_index() const { return m_; }

  /// S(r_g) = sum_j q_j W(r_g - r_j), periodic in x, y and on the extended z grid.
  void gridding(const ParticleSystem& sys, double* S) const {
    std::fill(S, S + grid_.size(), 0.0);
    Stencil st(*this);
    for (std::size_t j = 0; j < sys.size(); ++j) {
      st.locate(sys.position(j));
      const double q = sys.charge(j);
      for (int a = 0; a < st.P[0]; ++a) {
        const double qa = q * st.w[0][a];
        for (int b = 0; b < st.P[1]; ++b) {
          const double qab = qa * st.w[1][b];
          double* row = S + (static_cast<std::size_t>(st.idx[0][a]) * grid_.I[1] + st.idx[1][b]) * grid_.Iz_star;
          for (int c = 0; c < st.P[2]; ++c) row[st.idx[2][c]] += qab * st.w[2][c];
        }
      }
    }
  }

  /// Phi_i = 4 pi h_x h_y h_z sum_g S_scal(r_g) W(r_i - r_g).
  std::vector<double> gather(const ParticleSystem& sys, const double* S) const {
    std::vector<double> phi(sys.size());
    const double pref = 4.0 * std::numbers::pi * grid_.cell_volume();
    Stencil st(*this);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      st.locate(sys.position(i));
      double acc = 0.0;
      for (int a = 0; a < st.P[0]; ++a) {
        double acc_a = 0.0;
        for (int b = 0; b < st.P[1]; ++b) {
          const double* row = S + (static_cast<std::size_t>(st.idx[0][a]) * grid_.I[1] + st.idx[1][b]) * grid_.Iz_star;
          double acc_b = 0.0;
          for (int c = 0; c < st.P[2]; ++c) acc_b += row[st.idx[2][c]] * st.w[2][c];
          acc_a += acc_b * st.w[1][b];
        }
        acc += acc_a * st.w[0][a];
      }
      phi[i] = pref * acc;
    }
    return phi;
  }

  /// Multiplies the r2c spectrum by the precomputed scaling and normalizes for the inverse transform.
  void scale_spectrum(cplx* spec) const {
    for (std::size_t k = 0; k < mult_.size(); ++k) spec[k] *= mult_[k];
  }

  std::vector<double> potential(const ParticleSystem& sys) {
    gridding(sys, fft_.real_data());
    fft_.forward();
    scale_spectrum(fft_.spectrum_data());
    fft_.backward();
    return gather(sys, fft_.real_data());
  }

  /// Scaling multiplier at wavevector k (without the 1/N_grid factor).
  double multiplier_at(const SogDecomposition& d, double kx, double ky, double kz) const {
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double what = tables_[0].window().hat(kx) * tables_[1].window().hat(ky) * tables_[2].window().hat(kz);
    return tau_over_k2(d, k2) / (what * what);
  }

  /// (sqrt(pi)/4) sum_{l <= m} w_l s_l^3 exp(-s_l^2 k^2 / 4)
  double tau_over_k2(const SogDecomposition& d, double k2) const {
    double t = 0.0;
    for (int l = 0; l <= m_; ++l) {
      const double s = d.node(l);
      t += d.weight(l) * s * s * s * std::exp(-0.25 * s * s * k2);
    }
    return 0.25 * std::sqrt(std::numbers::pi) * t;
  }

 private:
  struct Stencil {
    explicit Stencil(const MidRangeSolver& s) : self(s) {
      for (int a = 0; a < 3; ++a) {
        P[a] = s.tables_[a].support();
        w[a].resize(P[a]);
        idx[a].resize(P[a]);
      }
    }
    void locate(const Vec3& r) {
      const std::array<double, 3> origin{-0.5 * self.box_.Lx, -0.5 * self.box_.Ly, -0.5 * self.grid_.Lz_star};
      const std::array<int, 3> n{self.grid_.I[0], self.grid_.I[1], self.grid_.Iz_star};
      for (int a = 0; a < 3; ++a) {
        const auto [g0, f] = nearest_grid((r[a] - origin[a]) / self.grid_.h[a]);
        self.tables_[a].weights(f, w[a].data());
        const int half = (P[a] - 1) / 2;
        for (int j = 0; j < P[a]; ++j) {
          long g = (g0 + j - half) % n[a];
          if (g < 0) g += n[a];
          idx[a][j] = static_cast<int>(g);
        }
      }
    }
    const MidRangeSolver& self;
    std::array<int, 3> P{};
    std::array<std::vector<double>, 3> w;
    std::array<std::vector<int>, 3> idx;
  };

  void build_multiplier(const SogDecomposition& d) {
    const int nx = grid_.I[0], ny = grid_.I[1], nz = grid_.Iz_star, nzc = nz / 2 + 1;
    const std::array<double, 3> period{box_.Lx, box_.Ly, grid_.Lz_star};
    std::array<std::vector<double>, 3> k, inv_hat2;
    const std::array<int, 3> count{nx, ny, nzc};
    const std::array<int, 3> full{nx, ny, nz};
    for (int a = 0; a < 3; ++a) {
      k[a].resize(count[a]);
      inv_hat2[a].resize(count[a]);
      for (int n = 0; n < count[a]; ++n) {
        k[a][n] = 2.0 * std::numbers::pi * signed_frequency(n, full[a]) / period[a];
        const double wh = tables_[a].window().hat(k[a][n]);
        inv_hat2[a][n] = 1.0 / (wh * wh);
      }
    }
    const double norm = 1.0 / static_cast<double>(grid_.size());
    mult_.resize(static_cast<std::size_t>(nx) * ny * nzc);
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy)
        for (int iz = 0; iz < nzc; ++iz) {
          const double k2 = k[0][ix] * k[0][ix] + k[1][iy] * k[1][iy] + k[2][iz] * k[2][iz];
          mult_[(static_cast<std::size_t>(ix) * ny + iy) * nzc + iz] =
              norm * tau_over_k2(d, k2) * inv_hat2[0][ix] * inv_hat2[1][iy] * inv_hat2[2][iz];
        }
  }

  Box box_;
  GridSpec grid_;
  int m_;
  std::array<WindowTable, 3> tables_;
  std::vector<double> mult_;
  RealFft fft_;
};

/// Phi^mid for the whole system; zeros when the decomposition has no mid-range Gaussians.
inline std::vector<double> mid_range_potential(const ParticleSystem& sys, const SogDecomposition& d,
                                               const GridSpec& g, WindowKind kind, std::array<int, 3> support,
                                               std::array<double, 3> shape, int nu = 0) {
  if (d.split_index() < 0) return std::vector<double>(sys.size(), 0.0);
  MidRangeSolver solver(sys.box(), d, g, kind, support, shape, nu);
  return solver.potential(sys);
}

/// Direct Fourier-sum evaluation of Phi^mid with the same mode set as the grid (no windows).
inline std::vector<double> mid_range_fourier_reference(const ParticleSystem& sys, const SogDecomposition& d,
                                                       const GridSpec& g) {
  const int m = d.split_index();
  std::vector<double> phi(sys.size(), 0.0);
  if (m < 0) return phi;
  const Box& box = sys.box();
  const double Vs = box.Lx * box.Ly * g.Lz_star;
  const std::array<double, 3> period{box.Lx, box.Ly, g.Lz_star};
  const std::array<int, 3> n{g.I[0], g.I[1], g.Iz_star};
  for (int ix = 0; ix < n[0]; ++ix)
    for (int iy = 0; iy < n[1]; ++iy)
      for (int iz = 0; iz < n[2]; ++iz) {
        const double kx = 2.0 * std::numbers::pi * signed_frequency(ix, n[0]) / period[0];
        const double ky = 2.0 * std::numbers::pi * signed_frequency(iy, n[1]) / period[1];
        const double kz = 2.0 * std::numbers::pi * signed_frequency(iz, n[2]) / period[2];
        const double k2 = kx * kx + ky * ky + kz * kz;
        double tau = 0.0;
        for (int l = 0; l <= m; ++l) {
          const double s = d.node(l);
          tau += d.weight(l) * s * s * s * std::exp(-0.25 * s * s * k2);
        }
        tau *= std::pow(std::numbers::pi, 1.5) / Vs;
        cplx rho = 0.0;
        for (std::size_t j = 0; j < sys.size(); ++j) {
          const auto& r = sys.position(j);
          rho += sys.charge(j) * std::polar(1.0, -(kx * r[0] + ky * r[1] + kz * r[2]));
        }
        for (std::size_t i = 0; i < sys.size(); ++i) {
          const auto& r = sys.position(i);
          phi[i] += tau * std::real(rho * std::polar(1.0, kx * r[0] + ky * r[1] + kz * r[2]));
        }
      }
  return phi;
}

}  // namespace sogq
