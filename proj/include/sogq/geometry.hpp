#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sogq {

using Vec3 = std::array<double, 3>;

struct Box {
  double Lx = 1.0;
  double Ly = 1.0;
  double Lz = 1.0;

  double operator[](int d) const { return d == 0 ? Lx : (d == 1 ? Ly : Lz); }
  double area() const { return Lx * Ly; }
  double volume() const { return Lx * Ly * Lz; }
  double aspect_ratio() const { return std::sqrt(Lx * Ly) / Lz; }
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrap a periodic coordinate into [-L/2, L/2).
inline double wrap_periodic(double x, double L) {
  double w = x - L * std::floor(x / L + 0.5);
  if (w >= 0.5 * L) w -= L;
  if (w < -0.5 * L) w += L;
  return w;
}

/// Minimum-image displacement a - b; x and y are wrapped, z is the raw difference.
inline Vec3 min_image_displacement(const Vec3& a, const Vec3& b, const Box& box) {
  return {wrap_periodic(a[0] - b[0], box.Lx), wrap_periodic(a[1] - b[1], box.Ly), a[2] - b[2]};
}

class ParticleSystem {
 public:
  ParticleSystem() = default;

  ParticleSystem(std::vector<Vec3> positions, std::vector<double> charges, Box box,
                 double neutrality_tol = 1e-12)
      : pos_(std::move(positions)), q_(std::move(charges)), box_(box), neutrality_tol_(neutrality_tol) {
    if (!(box_.Lx > 0.0 && box_.Ly > 0.0 && box_.Lz > 0.0) || !std::isfinite(box_.volume()))
      throw GeometryError("box lengths must be positive and finite");
    if (pos_.empty()) throw GeometryError("particle system is empty");
    if (pos_.size() != q_.size()) throw GeometryError("positions and charges differ in length");
    double net = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      auto& p = pos_[i];
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]) || !std::isfinite(q_[i]))
        throw GeometryError("non-finite input for particle " + std::to_string(i));
      if (std::abs(p[2]) > 0.5 * box_.Lz)
        throw GeometryError("particle " + std::to_string(i) + " has z outside [-Lz/2, Lz/2]");
      p[0] = wrap_periodic(p[0], box_.Lx);
      p[1] = wrap_periodic(p[1], box_.Ly);
      net += q_[i];
      abs_sum += std::abs(q_[i]);
    }
    if (std::abs(net) > neutrality_tol_ * abs_sum)
      throw GeometryError("system is not charge neutral (net charge " + std::to_string(net) + ")");
  }

  std::size_t size() const { return pos_.size(); }
  const std::vector<Vec3>& positions() const { return pos_; }
  const std::vector<double>& charges() const { return q_; }
  const Vec3& position(std::size_t i) const { return pos_[i]; }
  double charge(std::size_t i) const { return q_[i]; }
  const Box& box() const { return box_; }
  double neutrality_tol() const { return neutrality_tol_; }

  double max_abs_charge() const {
    double m = 0.0;
    for (double q : q_) m = std::max(m, std::abs(q));
    return m;
  }

 private:
  std::vector<Vec3> pos_;
  std::vector<double> q_;
  Box box_;
  double neutrality_tol_ = 1e-12;
};

/// Returns a canonical copy: x,y wrapped into the primary cell, z checked against the slab.
inline ParticleSystem canonicalize(const ParticleSystem& s) {
  return ParticleSystem(s.positions(), s.charges(), s.box(), s.neutrality_tol());
}

/// Same particles with charges multiplied by alpha.
inline ParticleSystem scaled_charges(const ParticleSystem& s, double alpha) {
  std::vector<double> q = s.charges();
  for (auto& v : q) v *= alpha;
  return ParticleSystem(s.positions(), std::move(q), s.box(), s.neutrality_tol());
}

/// Cell list periodic in x,y and bounded in z.
class CellList {
 public:
  CellList(const ParticleSystem& sys, double r_c) : box_(sys.box()), rc_(r_c) {
    if (!(r_c > 0.0)) throw GeometryError("cutoff must be positive");
    if (r_c > 0.5 * std::min(box_.Lx, box_.Ly) * (1.0 + 1e-14))
      throw GeometryError("cutoff exceeds half the periodic box length");
    for (int d = 0; d < 3; ++d) {
      n_[d] = std::max(1, static_cast<int>(std::floor(box_[d] / r_c * (1.0 + 1e-12))));
      width_[d] = box_[d] / n_[d];
    }
    const std::size_t ncell = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    std::vector<int> cell_of(sys.size());
    start_.assign(ncell + 1, 0);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      cell_of[i] = cell_index(sys.position(i));
      ++start_[cell_of[i] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    items_.resize(sys.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < sys.size(); ++i) items_[fill[cell_of[i]]++] = static_cast<int>(i);
    build_stencil_offsets();
  }

  double cutoff() const { return rc_; }
  std::array<int, 3> cells_per_axis() const { return n_; }
  std::size_t cell_count() const { return start_.size() - 1; }

  /// Particle indices in one cell, in ascending order.
  std::pair<const int*, const int*> bucket(std::size_t c) const {
    return {items_.data() + start_[c], items_.data() + start_[c + 1]};
  }

  int cell_index(const Vec3& p) const {
    int c[3];
    for (int d = 0; d < 3; ++d) {
      double u = (p[d] + 0.5 * box_[d]) / width_[d];
      c[d] = std::clamp(static_cast<int>(std::floor(u)), 0, n_[d] - 1);
    }
    return (c[0] * n_[1] + c[1]) * n_[2] + c[2];
  }

  /// Visits every candidate j != i in the neighbouring cells, in a fixed order.
  template <class F>
  void for_each_candidate(const ParticleSystem& sys, std::size_t i, F&& f) const {
    const int ci = cell_index(sys.position(i));
    const int cx = ci / (n_[1] * n_[2]);
    const int cy = (ci / n_[2]) % n_[1];
    const int cz = ci % n_[2];
    for (int ox : offsets_[0]) {
      const int x = (cx + ox + n_[0]) % n_[0];
      for (int oy : offsets_[1]) {
        const int y = (cy + oy + n_[1]) % n_[1];
        for (int oz = -1; oz <= 1; ++oz) {
          const int z = cz + oz;
          if (z < 0 || z >= n_[2]) continue;
          const auto [b, e] = bucket(static_cast<std::size_t>((x * n_[1] + y) * n_[2] + z));
          for (const int* p = b; p != e; ++p)
            if (static_cast<std::size_t>(*p) != i) f(static_cast<std::size_t>(*p));
        }
      }
    }
  }

  /// Sorted candidate set for particle i (a superset of the true neighbours).
  std::vector<std::size_t> neighbors(const ParticleSystem& sys, std::size_t i) const {
    std::vector<std::size_t> out;
    for_each_candidate(sys, i, [&](std::size_t j) { out.push_back(j); });
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void build_stencil_offsets() {
    for (int d = 0; d < 2; ++d) {
      offsets_[d].clear();
      if (n_[d] == 1) offsets_[d] = {0};
      else if (n_[d] == 2) offsets_[d] = {0, 1};
      else offsets_[d] = {-1, 0, 1};
    }
  }

  Box box_;
  double rc_;
  std::array<int, 3> n_{};
  std::array<double, 3> width_{};
  std::vector<int> start_;
  std::vector<int> items_;
  std::array<std::vector<int>, 2> offsets_;
};

/// Reads "N Lx Ly Lz" followed by N lines "x y z q"; '#' lines are skipped.
inline ParticleSystem read_particles(std::istream& in, double neutrality_tol = 1e-12) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw GeometryError("particle file: missing header line");
  std::istringstream hs(line);
  long long n = 0;
  Box box;
  if (!(hs >> n >> box.Lx >> box.Ly >> box.Lz) || n < 1)
    throw GeometryError("particle file line " + std::to_string(lineno) + ": expected 'N Lx Ly Lz'");
  std::vector<Vec3> pos;
  std::vector<double> q;
  pos.reserve(n);
  q.reserve(n);
  for (long long k = 0; k < n; ++k) {
    if (!next_line(line))
      throw GeometryError("particle file: expected " + std::to_string(n) + " particles, found " + std::to_string(k));
    std::istringstream ls(line);
    Vec3 p;
    double c;
    if (!(ls >> p[0] >> p[1] >> p[2] >> c))
      throw GeometryError("particle file line " + std::to_string(lineno) + ": expected 'x y z q'");
    pos.push_back(p);
    q.push_back(c);
  }
  return ParticleSystem(std::move(pos), std::move(q), box, neutrality_tol);
}

inline ParticleSystem read_particles(const std::string& path, double neutrality_tol = 1e-12) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open particle file '" + path + "'");
  return read_particles(in, neutrality_tol);
}

inline void write_particles(std::ostream& out, const ParticleSystem& s) {
  out.precision(17);
  out << s.size() << ' ' << s.box().Lx << ' ' << s.box().Ly << ' ' << s.box().Lz << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = s.position(i);
    out << p[0] << ' ' << p[1] << ' ' << p[2] << ' ' << s.charge(i) << '\n';
  }
}

/// Uniform random positions with alternating +1/-1 charges (N even gives exact neutrality).
inline ParticleSystem random_system(std::size_t n, const Box& box, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw GeometryError("random system needs an even particle count >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-0.5 * box.Lx, 0.5 * box.Lx), uy(-0.5 * box.Ly, 0.5 * box.Ly),
      uz(-0.5 * box.Lz, 0.5 * box.Lz);
  std::vector<Vec3> pos(n);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = {ux(rng), uy(rng), uz(rng)};
    q[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  return ParticleSystem(std::move(pos), std::move(q), box);
}

}  // namespace sogq
