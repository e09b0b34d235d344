#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hbatlas {

/// coeffs . x (<= or ==) bound
struct LpRow {
  std::vector<double> coeffs;
  double bound = 0.0;
};

/// Feasibility problem over free variables: A x <= b, E x = e. An optional
/// linear objective (minimized) selects among feasible points; feasibility is
/// decided by phase 1 alone.
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<LpRow> inequalities;
  std::vector<LpRow> equalities;
  std::vector<double> objective;  // empty: pure feasibility

  /// Throws std::invalid_argument if a row width differs from num_vars.
  void validate() const;
  /// Largest violation of any row at x (0 when x satisfies everything).
  double max_violation(std::span<const double> x) const;
};

struct LpTolerances {
  /// A point is accepted when its max violation is at most this.
  double feasible = 1e-9;
  /// Infeasibility is declared when the phase-1 optimum is at least this.
  double infeasible = 1e-7;
  std::size_t max_iterations = 20000;
};

enum class LpStatus { Feasible, Infeasible, Indeterminate };

struct LpResult {
  LpStatus status = LpStatus::Indeterminate;
  std::vector<double> point;     // Feasible only
  double phase1_objective = 0.0;  // sum of artificials at termination (rows scaled to unit max-norm)
  double violation = 0.0;         // max violation of `point` (or of the phase-1 point)
  std::size_t iterations = 0;
  bool used_bland = false;
  std::string note;
};

/// Phase-1 primal simplex on a dense tableau, followed by phase 2 when the
/// problem carries an objective. Free variables are split into positive and
/// negative parts; Dantzig pricing falls back to Bland's rule after a run of
/// degenerate pivots.
LpResult solve_lp(const LpProblem& p, const LpTolerances& tol = {});

const char* to_string(LpStatus s);

}  // namespace hbatlas
