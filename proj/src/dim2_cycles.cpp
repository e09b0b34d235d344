#include "hbatlas/dim2_cycles.hpp"

#include "hbatlas/core.hpp"
#include "hbatlas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hbatlas {

RootsCycle roots_cycle_geometry(const Tuning& t, const ClassParams& c, std::size_t K) {
  if (K < 3) throw std::invalid_argument("roots_cycle: K must be >= 3");
  if (!(t.gamma > 0.0)) throw InvalidTuning("roots_cycle: gamma must be positive");
  c.validate();
  RootsCycle cyc;
  cyc.K = K;
  cyc.tuning = t;
  cyc.cls = c;
  std::vector<double> xs(K), ys(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(K);
    xs[i] = std::cos(angle);
    ys[i] = std::sin(angle);
    cyc.points.emplace_back(xs[i], ys[i]);
  }
  const auto gx = circulant_gradient(xs, t);
  const auto gy = circulant_gradient(ys, t);
  for (std::size_t i = 0; i < K; ++i) cyc.grads.emplace_back(gx[i], gy[i]);
  cyc.fvals.assign(K, 0.0);
  return cyc;
}

namespace {

DataPoint data_point(const RootsCycle& cyc, std::size_t i, double f) {
  return {cyc.points[i], cyc.grads[i], f};
}

}  // namespace

LpProblem roots_cycle_lp(const RootsCycle& geometry) {
  const std::size_t K = geometry.K;
  LpProblem p;
  p.num_vars = K;
  // r_ij = f_i - f_j + r0_ij >= 0 with r0_ij the residual at zero values.
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      if (i == j) continue;
      const double r0 = interp_residual(data_point(geometry, i, 0.0), data_point(geometry, j, 0.0),
                                        geometry.cls);
      LpRow row{std::vector<double>(K, 0.0), r0};
      row.coeffs[j] = 1.0;
      row.coeffs[i] = -1.0;
      p.inequalities.push_back(std::move(row));
    }
  }
  LpRow anchor{std::vector<double>(K, 0.0), 0.0};
  anchor.coeffs[0] = 1.0;
  p.equalities.push_back(std::move(anchor));
  return p;
}

double min_interp_residual(const RootsCycle& cyc) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cyc.K; ++i) {
    for (std::size_t j = 0; j < cyc.K; ++j) {
      if (i == j) continue;
      worst = std::min(worst, interp_residual(data_point(cyc, i, cyc.fvals[i]),
                                              data_point(cyc, j, cyc.fvals[j]), cyc.cls));
    }
  }
  return worst;
}

std::string check_roots_cycle(const RootsCycle& cyc, double tol, double residual_tol) {
  const std::size_t K = cyc.K;
  if (K < 3 || cyc.points.size() != K || cyc.grads.size() != K || cyc.fvals.size() != K) {
    return "inconsistent sizes";
  }
  for (std::size_t i = 0; i < K; ++i) {
    const BasicHbState<Eigen::Vector2d> state{cyc.points[(i + K - 1) % K], cyc.points[i]};
    const auto next = hb_step(state, cyc.grads[i], cyc.tuning).x_cur;
    if ((next - cyc.points[(i + 1) % K]).lpNorm<Eigen::Infinity>() > tol) {
      return "HB step " + std::to_string(i) + " does not reach the next point";
    }
  }
  if (const double r = min_interp_residual(cyc); !(r >= -residual_tol)) {
    return "interpolation residual " + std::to_string(r) + " below tolerance";
  }
  return {};
}

RootsCycleResult roots_cycle_feasible(const Tuning& t, const ClassParams& c, std::size_t K,
                                      const LpTolerances& tol) {
  RootsCycle cyc = roots_cycle_geometry(t, c, K);
  const LpResult res = solve_lp(roots_cycle_lp(cyc), tol);
  if (res.status == LpStatus::Infeasible) return {};
  if (res.status == LpStatus::Indeterminate) {
    return {SearchStatus::Indeterminate, std::nullopt, "LP: " + res.note};
  }
  cyc.fvals = res.point;
  if (auto why = check_roots_cycle(cyc); !why.empty()) {
    return {SearchStatus::Indeterminate, std::nullopt, "LP point fails check: " + why};
  }
  return {SearchStatus::Found, std::move(cyc), {}};
}

CycleCell dim2_cycle_search(const Tuning& t, const ClassParams& c, std::size_t Kmax,
                            const LpTolerances& tol) {
  if (Kmax < 3) throw std::invalid_argument("dim2_cycle_search: Kmax must be >= 3");
  bool indeterminate = false;
  for (std::size_t K = 3; K <= Kmax; ++K) {
    const auto r = roots_cycle_feasible(t, c, K, tol);
    if (r.status == SearchStatus::Found) return {SearchStatus::Found, K};
    indeterminate = indeterminate || r.status == SearchStatus::Indeterminate;
  }
  return {indeterminate ? SearchStatus::Indeterminate : SearchStatus::None, 0};
}

RegionGrid<CycleCell> dim2_region(const GridSpec& spec, const ClassParams& c, std::size_t Kmax,
                                  std::size_t threads, const LpTolerances& tol) {
  spec.validate();
  if (Kmax > 25) throw std::invalid_argument("dim2_region: Kmax must be <= 25");
  RegionGrid<CycleCell> grid{spec, c, std::vector<CycleCell>(spec.size()), {}};
  parallel_for(spec.size(), threads, [&](std::size_t k) {
    grid.cells[k] = dim2_cycle_search(spec.tuning_at(k), c, Kmax, tol);
  });
  return grid;
}

}  // namespace hbatlas
