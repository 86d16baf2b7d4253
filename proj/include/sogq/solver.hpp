#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "long_range.hpp"
#include "mid_range.hpp"
#include "near_field.hpp"
#include "params.hpp"
#include "sog_decomposition.hpp"

namespace sogq {

struct StageTimings {
  double near = 0.0, mid = 0.0, lng = 0.0, total = 0.0;
};

struct SolveResult {
  PotentialParts parts;
  std::vector<double> potential;
  double energy = 0.0;
  StageTimings seconds;
};

/// Runs a plan: near field, mid-range grid, long range, self term.
class Solver {
 public:
  explicit Solver(const SolverPlan& plan) : plan_(plan), d_(plan.decomposition()) {
    if (plan.near_mode == NearMode::Table) table_ = FarKernelTable(d_);
    const int m = d_.split_index();
    if (plan.mid.enabled && m >= 0)
      mid_ = std::make_unique<MidRangeSolver>(plan.box, d_, plan.grid(), plan.mid.window, plan.mid.support,
                                              plan.mid.shape, plan.window_nu);
    if (plan.lng.enabled && m < d_.M() && plan.lng.mode == LongMode::Fft)
      long_fft_ = std::make_unique<LongRangeFftSolver>(plan.box, d_, plan.lng.I, plan.lng.P, plan.lng.Q,
                                                       plan.lng.window, plan.lng.support, plan.lng.shape,
                                                       plan.window_nu);
  }

  const SolverPlan& plan() const { return plan_; }
  const SogDecomposition& decomposition() const { return d_; }

  SolveResult evaluate(const ParticleSystem& sys) {
    const Box& b = sys.box();
    if (b.Lx != plan_.box.Lx || b.Ly != plan_.box.Ly || b.Lz != plan_.box.Lz)
      throw std::invalid_argument("system box differs from the plan box");
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point c) { return std::chrono::duration<double>(c - a).count(); };
    SolveResult r;
    const auto t0 = clock::now();
    CellList cl(sys, d_.r_c());
    r.parts.near = near_potential(sys, d_, cl, plan_.near_mode, plan_.near_mode == NearMode::Table ? &table_ : nullptr);
    const auto t1 = clock::now();
    r.parts.mid = mid_ ? mid_->potential(sys) : std::vector<double>(sys.size(), 0.0);
    const auto t2 = clock::now();
    if (long_fft_) r.parts.lng = long_fft_->potential(sys);
    else if (plan_.lng.enabled && d_.split_index() < d_.M())
      r.parts.lng = long_range_direct(sys, d_, plan_.lng.P, plan_.lng.K_max);
    else r.parts.lng.assign(sys.size(), 0.0);
    const auto t3 = clock::now();
    r.parts.self = self_potential(sys, d_);
    r.potential = r.parts.total();
    r.energy = total_energy(r.potential, sys);
    const auto t4 = clock::now();
    r.seconds = {secs(t0, t1), secs(t1, t2), secs(t2, t3), secs(t0, t4)};
    return r;
  }

 private:
  SolverPlan plan_;
  SogDecomposition d_;
  FarKernelTable table_;
  std::unique_ptr<MidRangeSolver> mid_;
  std::unique_ptr<LongRangeFftSolver> long_fft_;
};

inline SolveResult solve(const ParticleSystem& sys, const SolverPlan& plan) {
  Solver s(plan);
  return s.evaluate(sys);
}

}  // namespace sogq
