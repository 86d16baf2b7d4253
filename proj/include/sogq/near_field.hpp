#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chebyshev.hpp"
#include "geometry.hpp"
#include "sog_decomposition.hpp"

namespace sogq {

/// Piecewise Chebyshev table of the far kernel as a function of r^2 on [0, r_c^2].
class FarKernelTable {
 public:
  FarKernelTable() = default;
  FarKernelTable(const SogDecomposition& d, int pieces = 256, int degree = 12)
      : rc2_(d.r_c() * d.r_c()), pieces_(pieces), K_(degree) {
    if (pieces < 1 || degree < 2) throw std::invalid_argument("far-kernel table needs pieces >= 1, degree >= 2");
    inv_width_ = pieces_ / rc2_;
    coef_.resize(static_cast<std::size_t>(pieces_) * K_);
    ChebyshevTransform tr(K_);
    const auto x = chebyshev_nodes(K_);
    std::vector<double> f(K_);
    for (int p = 0; p < pieces_; ++p) {
      const double a = p / inv_width_, w = 1.0 / inv_width_;
      for (int i = 0; i < K_; ++i) f[i] = d.far_kernel(std::sqrt(a + 0.5 * w * (x[i] + 1.0)));
      tr.apply(f.data(), &coef_[static_cast<std::size_t>(p) * K_]);
    }
  }

  double operator()(double r2) const {
    double u = r2 * inv_width_;
    int p = static_cast<int>(u);
    if (p >= pieces_) p = pieces_ - 1;
    const double v = 2.0 * (u - p) - 1.0;
    return clenshaw(&coef_[static_cast<std::size_t>(p) * K_], K_, v);
  }

  int pieces() const { return pieces_; }
  int degree() const { return K_; }

 private:
  double rc2_ = 1.0, inv_width_ = 1.0;
  int pieces_ = 0, K_ = 0;
  std::vector<double> coef_;
};

enum class NearMode { Direct, Table };

/// Phi^N_i = sum over neighbours within r_c of q_j (1/r - F(r)), minimum image.
inline std::vector<double> near_potential(const ParticleSystem& sys, const SogDecomposition& d, const CellList& cl,
                                          NearMode mode = NearMode::Table, const FarKernelTable* table = nullptr) {
  FarKernelTable local;
  if (mode == NearMode::Table && !table) {
    local = FarKernelTable(d);
    table = &local;
  }
  const double rc2 = d.r_c() * d.r_c();
  const Box& box = sys.box();
  const long n = static_cast<long>(sys.size());
  std::vector<double> phi(sys.size(), 0.0);
  int coincident = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(| : coincident)
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    const Vec3& ri = sys.position(i);
    cl.for_each_candidate(sys, static_cast<std::size_t>(i), [&](std::size_t j) {
      const Vec3 dr = min_image_displacement(ri, sys.position(j), box);
      const double r2 = dr[0] * dr[0] + dr[1] * dr[1] + dr[2] * dr[2];
      if (r2 >= rc2) return;
      if (r2 == 0.0) {
        coincident = 1;
        return;
      }
      const double far = mode == NearMode::Table ? (*table)(r2) : d.far_kernel(std::sqrt(r2));
      acc += sys.charge(j) * (1.0 / std::sqrt(r2) - far);
    });
    phi[i] = acc;
  }
  if (coincident) throw GeometryError("coincident particles");
  return phi;
}

inline std::vector<double> near_potential(const ParticleSystem& sys, const SogDecomposition& d,
                                          NearMode mode = NearMode::Table) {
  CellList cl(sys, d.r_c());
  return near_potential(sys, d, cl, mode);
}

/// q_i sum_l w_l
inline std::vector<double> self_potential(const ParticleSystem& sys, const SogDecomposition& d) {
  std::vector<double> phi(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) phi[i] = sys.charge(i) * d.self_coefficient();
  return phi;
}

/// Potential components; total = near + mid + long - self.
struct PotentialParts {
  std::vector<double> near, mid, lng, self;

  std::vector<double> total() const {
    const std::size_t n = near.size();
    std::vector<double> t(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = near[i] - self[i];
      if (!mid.empty()) t[i] += mid[i];
      if (!lng.empty()) t[i] += lng[i];
    }
    return t;
  }
};

/// U = 1/2 sum q_i phi_i
inline double total_energy(const std::vector<double>& phi, const ParticleSystem& sys) {
  if (phi.size() != sys.size()) throw std::invalid_argument("potential and system sizes differ");
  double u = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) u += sys.charge(i) * phi[i];
  return 0.5 * u;
}

enum EnergyComponent : unsigned { kNear = 1u, kMid = 2u, kLong = 4u, kSelf = 8u, kAll = 15u };

inline double total_energy(const PotentialParts& p, const ParticleSystem& sys, unsigned mode = kAll) {
  std::vector<double> phi(sys.size(), 0.0);
  auto add = [&](const std::vector<double>& v, double sign) {
    if (v.empty()) return;
    if (v.size() != sys.size()) throw std::invalid_argument("potential and system sizes differ");
    for (std::size_t i = 0; i < v.size(); ++i) phi[i] += sign * v[i];
  };
  if (mode & kNear) add(p.near, 1.0);
  if (mode & kMid) add(p.mid, 1.0);
  if (mode & kLong) add(p.lng, 1.0);
  if (mode & kSelf) add(p.self, -1.0);
  return total_energy(phi, sys);
}

}  // namespace sogq
