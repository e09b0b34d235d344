#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "hbatlas/types.hpp"

namespace hbatlas {

/// One oracle sample (x, grad f(x), f(x)). The minimizer is the sample with
/// g = 0 and f = 0.
struct DataPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd g;
  double f = 0.0;
};

/// Two consecutive heavy-ball iterates.
template <typename Point>
struct BasicHbState {
  Point x_prev;
  Point x_cur;
};

using HbState = BasicHbState<Eigen::VectorXd>;
using HbState1D = BasicHbState<double>;

/// x_{t+1} = x_t - gamma * grad + beta * (x_t - x_{t-1}).
template <typename Point>
BasicHbState<Point> hb_step(const BasicHbState<Point>& state, const Point& grad_at_cur,
                            const Tuning& t) {
  Point next = state.x_cur - t.gamma * grad_at_cur + t.beta * (state.x_cur - state.x_prev);
  return {state.x_cur, next};
}

/// Interpolation residual r_ij of the F_{mu,L} extension inequality.
/// All ordered-pair residuals are nonnegative iff the samples are interpolable.
double interp_residual(const DataPoint& p_i, const DataPoint& p_j, const ClassParams& c);

class NotInClass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Convex piecewise-quadratic scalar function whose gradient is the
/// piecewise-linear interpolant of sorted (knot, grad) pairs, extended
/// linearly with `extension_slope` outside the knot hull.
class PiecewiseModel1D {
 public:
  PiecewiseModel1D(std::vector<double> knots, std::vector<double> grads,
                   double extension_slope);

  double gradient(double x) const;
  double value(double x) const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> grads() const { return grads_; }
  std::span<const double> values() const { return values_; }
  double extension_slope() const { return extension_slope_; }

  /// Slopes of consecutive knots (size knots-1).
  std::vector<double> secant_slopes() const;

 private:
  std::vector<double> knots_;
  std::vector<double> grads_;
  std::vector<double> values_;
  double extension_slope_;
};

struct ReconstructOptions {
  /// Defaults to (mu + L) / 2 when unset (NaN).
  double extension_slope = std::numeric_limits<double>::quiet_NaN();
  /// Relative tolerance on slope bounds.
  double slope_tol = 1e-9;
  /// Points closer than this times the spread are merged.
  double merge_tol = 1e-12;
};

/// Builds a model in F_{mu,L} whose gradient reproduces g_i at each x_i.
/// Throws NotInClass or InconsistentData.
PiecewiseModel1D reconstruct_function_1d(std::span<const double> xs, std::span<const double> gs,
                                         const ClassParams& c,
                                         const ReconstructOptions& opts = {});

struct Trajectory {
  std::vector<double> values;
  bool diverged = false;
};

/// Runs `steps` heavy-ball steps from (x0, x1); result has steps + 2 entries
/// unless the iterates overflow, in which case it is truncated and flagged.
Trajectory simulate_hb(const PiecewiseModel1D& model, double x0, double x1, const Tuning& t,
                       std::size_t steps);

enum class TrajectoryKind { Converged, Periodic, Divergent, Undetermined };

struct TrajectoryClass {
  TrajectoryKind kind = TrajectoryKind::Undetermined;
  std::size_t period = 0;  // set for Periodic
};

struct ClassifyTrajectoryOptions {
  double tol_conv = 1e-9;
  double tol_per = 1e-9;
  std::size_t max_period = 25;
  /// Divergence threshold, multiplied by max(|x_0|, |x_1|) (or 1 if both vanish).
  double divergence_factor = 1e12;
};

TrajectoryClass classify_trajectory(std::span<const double> traj,
                                    const ClassifyTrajectoryOptions& opts = {});

const char* to_string(TrajectoryKind k);

}  // namespace hbatlas
