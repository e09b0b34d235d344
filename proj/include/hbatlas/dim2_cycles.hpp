#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hbatlas/cycle_lp.hpp"
#include "hbatlas/grid.hpp"
#include "hbatlas/lp.hpp"
#include "hbatlas/types.hpp"

namespace hbatlas {

/// Planar K-cycle through the K-th roots of unity, x_t = (cos 2pi t/K, sin 2pi t/K).
struct RootsCycle {
  std::size_t K = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<Eigen::Vector2d> grads;
  std::vector<double> fvals;
  Tuning tuning;
  ClassParams cls;

  bool operator==(const RootsCycle&) const = default;
};

struct RootsCycleResult {
  SearchStatus status = SearchStatus::None;
  std::optional<RootsCycle> cycle;
  std::string note;
};

/// Points and gradients of the roots-of-unity cycle; gradients come from the
/// circulant identity applied to each coordinate. fvals are left at zero.
RootsCycle roots_cycle_geometry(const Tuning& t, const ClassParams& c, std::size_t K);

/// LP over the K function values subject to all K(K-1) ordered interpolation
/// inequalities among the cycle points (f_0 is pinned to 0).
LpProblem roots_cycle_lp(const RootsCycle& geometry);

/// Feasibility of the roots-of-unity cycle; Found carries a verified cycle.
RootsCycleResult roots_cycle_feasible(const Tuning& t, const ClassParams& c, std::size_t K,
                                      const LpTolerances& tol = {});

/// Smallest interpolation residual over ordered pairs of cycle points.
double min_interp_residual(const RootsCycle& cyc);

/// Empty when the cycle replays under HB to `tol` and all residuals are at
/// least -residual_tol; otherwise the first failed check.
std::string check_roots_cycle(const RootsCycle& cyc, double tol = 1e-10,
                              double residual_tol = 1e-9);

/// Smallest K in [3, Kmax] with a feasible roots-of-unity cycle.
CycleCell dim2_cycle_search(const Tuning& t, const ClassParams& c, std::size_t Kmax,
                            const LpTolerances& tol = {});

/// Per-cell dim2_cycle_search over a grid.
RegionGrid<CycleCell> dim2_region(const GridSpec& spec, const ClassParams& c, std::size_t Kmax,
                                  std::size_t threads = 0, const LpTolerances& tol = {});

}  // namespace hbatlas
