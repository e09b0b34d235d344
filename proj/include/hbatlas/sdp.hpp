#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hbatlas {

/// Symmetric matrix affine in the unknowns: M(z) = base + sum_k z_k coeffs[k].
struct AffineMatrix {
  Eigen::MatrixXd base;
  std::vector<Eigen::MatrixXd> coeffs;

  Eigen::MatrixXd eval(const Eigen::VectorXd& z) const;
};

/// Find z with M_b(z) PSD for every block, z_k >= 0 for k in `nonneg`, and
/// eq_matrix z = eq_rhs.
struct SdpProblem {
  std::size_t num_vars = 0;
  std::vector<AffineMatrix> blocks;
  std::vector<std::size_t> nonneg;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;

  void validate() const;
};

struct SdpOptions {
  /// Unknowns are confined to a ball of this radius (at least 10 times the
  /// minimum-norm solution of the equalities).
  double radius = 1e3;
  /// Infeasible when the certified upper bound on the margin is below -this.
  double infeasible_margin = 1e-7;
  double tau_start = 1.0;
  double tau_growth = 8.0;
  double tau_max = 1e12;
  std::size_t max_newton = 60;
};

enum class SdpStatus { Feasible, Infeasible, Indeterminate };

struct SdpResult {
  SdpStatus status = SdpStatus::Indeterminate;
  /// Iterate with the largest margin found (also set when not Feasible).
  Eigen::VectorXd z;
  /// min over blocks of the smallest eigenvalue and over nonneg entries.
  double margin = 0.0;
  /// Upper bound on the best achievable margin inside the ball.
  double margin_bound = 0.0;
  std::size_t newton_steps = 0;
  std::string note;
};

/// Barrier method maximizing the common margin s in M_b(z) >= s I,
/// z_k >= s, over the affine set. Stops as soon as s > 0 (Feasible) or the
/// duality bound certifies s* < -infeasible_margin (Infeasible).
SdpResult solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

const char* to_string(SdpStatus s);

}  // namespace hbatlas
