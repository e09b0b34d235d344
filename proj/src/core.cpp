#include "hbatlas/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hbatlas {

void ClassParams::validate() const {
  if (!(mu > 0.0) || !(L > mu) || !std::isfinite(L)) {
    throw InvalidClass("class requires 0 < mu < L, got " + to_string(*this));
  }
}

Tuning polyak_tuning(const ClassParams& c) {
  const double sl = std::sqrt(c.L);
  const double sm = std::sqrt(c.mu);
  const double r = (sl - sm) / (sl + sm);
  return {4.0 / ((sl + sm) * (sl + sm)), r * r};
}

std::string to_string(const ClassParams& c) {
  std::ostringstream os;
  os.precision(17);
  os << "(mu=" << c.mu << ", L=" << c.L << ")";
  return os.str();
}

std::string to_string(const Tuning& t) {
  std::ostringstream os;
  os.precision(17);
  os << "(gamma=" << t.gamma << ", beta=" << t.beta << ")";
  return os.str();
}

double interp_residual(const DataPoint& p_i, const DataPoint& p_j, const ClassParams& c) {
  c.validate();
  const Eigen::VectorXd dx = p_i.x - p_j.x;
  const Eigen::VectorXd dg = p_i.g - p_j.g;
  const double scale = 1.0 / (2.0 * (1.0 - c.mu / c.L));
  // <g_j - g_i, x_j - x_i> == <dg, dx>
  const double quad = dg.squaredNorm() / c.L + c.mu * dx.squaredNorm() -
                      2.0 * c.mu / c.L * dg.dot(dx);
  return p_i.f - p_j.f - p_j.g.dot(dx) - scale * quad;
}

PiecewiseModel1D::PiecewiseModel1D(std::vector<double> knots, std::vector<double> grads,
                                   double extension_slope)
    : knots_(std::move(knots)), grads_(std::move(grads)), extension_slope_(extension_slope) {
  if (knots_.empty() || knots_.size() != grads_.size()) {
    throw std::invalid_argument("PiecewiseModel1D: knots and grads must be non-empty and equal length");
  }
  values_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) {
      throw std::invalid_argument("PiecewiseModel1D: knots must be strictly increasing");
    }
    values_[i] = values_[i - 1] + 0.5 * (grads_[i] + grads_[i - 1]) * (knots_[i] - knots_[i - 1]);
  }
}

double PiecewiseModel1D::gradient(double x) const {
  if (x <= knots_.front()) return grads_.front() + extension_slope_ * (x - knots_.front());
  if (x >= knots_.back()) return grads_.back() + extension_slope_ * (x - knots_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto hi = static_cast<std::size_t>(it - knots_.begin());
  const std::size_t lo = hi - 1;
  if (x == knots_[lo]) return grads_[lo];
  const double slope = (grads_[hi] - grads_[lo]) / (knots_[hi] - knots_[lo]);
  return grads_[lo] + slope * (x - knots_[lo]);
}

double PiecewiseModel1D::value(double x) const {
  auto segment = [](double f0, double g0, double slope, double dx) {
    return f0 + g0 * dx + 0.5 * slope * dx * dx;
  };
  if (x <= knots_.front()) {
    return segment(values_.front(), grads_.front(), extension_slope_,
                   x - knots_.front());
  }
  if (x >= knots_.back()) {
    return segment(values_.back(), grads_.back(), extension_slope_,
                   x - knots_.back());
  }
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
  const std::size_t lo = hi - 1;
  const double slope = (grads_[hi] - grads_[lo]) / (knots_[hi] - knots_[lo]);
  return segment(values_[lo], grads_[lo], slope, x - knots_[lo]);
}

std::vector<double> PiecewiseModel1D::secant_slopes() const {
  std::vector<double> s;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    s.push_back((grads_[i] - grads_[i - 1]) / (knots_[i] - knots_[i - 1]));
  }
  return s;
}

PiecewiseModel1D reconstruct_function_1d(std::span<const double> xs, std::span<const double> gs,
                                         const ClassParams& c, const ReconstructOptions& opts) {
  c.validate();
  if (xs.empty() || xs.size() != gs.size()) {
    throw std::invalid_argument("reconstruct_function_1d: X and G must be non-empty and equal length");
  }
  const double ext = std::isnan(opts.extension_slope) ? 0.5 * (c.mu + c.L) : opts.extension_slope;
  if (ext < c.mu || ext > c.L) {
    throw std::invalid_argument("reconstruct_function_1d: extension slope outside [mu, L]");
  }

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });

  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [gmin, gmax] = std::minmax_element(gs.begin(), gs.end());
  const double x_merge = opts.merge_tol * (*xmax - *xmin);
  const double g_merge = opts.merge_tol * std::max(1.0, *gmax - *gmin);

  std::vector<double> knots;
  std::vector<double> grads;
  for (std::size_t idx : order) {
    if (!knots.empty() && xs[idx] - knots.back() <= x_merge) {
      if (std::abs(gs[idx] - grads.back()) > g_merge) {
        std::ostringstream os;
        os.precision(17);
        os << "reconstruct_function_1d: duplicate point x=" << xs[idx]
           << " carries distinct gradients " << grads.back() << " and " << gs[idx];
        throw InconsistentData(os.str());
      }
      continue;
    }
    knots.push_back(xs[idx]);
    grads.push_back(gs[idx]);
  }

  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double slope = (grads[i] - grads[i - 1]) / (knots[i] - knots[i - 1]);
    if (slope < c.mu * (1.0 - opts.slope_tol) || slope > c.L * (1.0 + opts.slope_tol)) {
      std::ostringstream os;
      os.precision(17);
      os << "reconstruct_function_1d: secant slope " << slope << " between x=" << knots[i - 1]
         << " and x=" << knots[i] << " outside [" << c.mu << ", " << c.L << "]";
      throw NotInClass(os.str());
    }
  }
  return PiecewiseModel1D(std::move(knots), std::move(grads), ext);
}

Trajectory simulate_hb(const PiecewiseModel1D& model, double x0, double x1, const Tuning& t,
                       std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("simulate_hb: steps must be >= 1");
  Trajectory out;
  out.values.reserve(steps + 2);
  out.values.push_back(x0);
  out.values.push_back(x1);
  HbState1D state{x0, x1};
  for (std::size_t k = 0; k < steps; ++k) {
    state = hb_step(state, model.gradient(state.x_cur), t);
    if (!std::isfinite(state.x_cur) || std::abs(state.x_cur) > 1e300) {
      out.diverged = true;
      break;
    }
    out.values.push_back(state.x_cur);
  }
  return out;
}

TrajectoryClass classify_trajectory(std::span<const double> traj,
                                    const ClassifyTrajectoryOptions& opts) {
  const std::size_t n = traj.size();
  if (n < 2 * opts.max_period + 2) return {};

  double scale = std::max(std::abs(traj[0]), std::abs(traj[1]));
  if (scale == 0.0) scale = 1.0;
  const double bound = opts.divergence_factor * scale;
  for (double v : traj) {
    if (!std::isfinite(v) || std::abs(v) > bound) return {TrajectoryKind::Divergent, 0};
  }

  const std::size_t tail_len = std::max(2 * opts.max_period + 2, n / 2);
  const auto tail = traj.subspan(n - tail_len);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  if (0.5 * (*hi - *lo) <= opts.tol_conv) return {TrajectoryKind::Converged, 0};

  for (std::size_t k = 2; k <= opts.max_period; ++k) {
    bool periodic = true;
    for (std::size_t i = k; i < tail.size() && periodic; ++i) {
      periodic = std::abs(tail[i] - tail[i - k]) <= opts.tol_per;
    }
    if (periodic) return {TrajectoryKind::Periodic, k};
  }
  return {};
}

const char* to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Converged: return "converged";
    case TrajectoryKind::Periodic: return "periodic";
    case TrajectoryKind::Divergent: return "divergent";
    case TrajectoryKind::Undetermined: return "undetermined";
  }
  return "undetermined";
}

}  // namespace hbatlas
