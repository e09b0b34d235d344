#include "hbatlas/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hbatlas {

void LpProblem::validate() const {
  for (const auto* rows : {&inequalities, &equalities}) {
    for (const auto& r : *rows) {
      if (r.coeffs.size() != num_vars) {
        throw std::invalid_argument("LpProblem: row width " + std::to_string(r.coeffs.size()) +
                                    " != num_vars " + std::to_string(num_vars));
      }
    }
  }
  if (!objective.empty() && objective.size() != num_vars) {
    throw std::invalid_argument("LpProblem: objective width != num_vars");
  }
}

double LpProblem::max_violation(std::span<const double> x) const {
  auto dot = [&](const LpRow& r) {
    double s = 0.0;
    for (std::size_t j = 0; j < num_vars; ++j) s += r.coeffs[j] * x[j];
    return s;
  };
  double v = 0.0;
  for (const auto& r : inequalities) v = std::max(v, dot(r) - r.bound);
  for (const auto& r : equalities) v = std::max(v, std::abs(dot(r) - r.bound));
  return v;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-11;
constexpr std::size_t kDegenerateRunBeforeBland = 50;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }
  // Row `rows_` holds reduced costs; its rhs holds minus the objective.
  double& cost(std::size_t j) { return at(rows_, j); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class SimplexOutcome { Optimal, Unbounded, IterationCap };

struct SimplexRun {
  SimplexOutcome outcome = SimplexOutcome::IterationCap;
  std::size_t iterations = 0;
  bool used_bland = false;
};

// Minimizes the cost row over columns [0, enterable).
SimplexRun run_simplex(Tableau& T, std::size_t enterable, std::size_t max_iterations) {
  const std::size_t m = T.rows();
  SimplexRun run;
  bool bland = false;
  std::size_t degenerate_run = 0;
  // Columns whose negative reduced cost is not backed by any usable pivot;
  // cleared after every successful pivot.
  std::vector<char> blocked(enterable, 0);
  for (; run.iterations < max_iterations; ++run.iterations) {
    std::size_t enter = enterable;
    double best = -kCostTol;
    for (std::size_t j = 0; j < enterable; ++j) {
      const double d = T.cost(j);
      if (!blocked[j] && d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter == enterable) {
      run.outcome = SimplexOutcome::Optimal;
      break;
    }
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_piv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = T.at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = T.rhs(i) / a;
      bool better = leave == m || ratio < best_ratio - 1e-12;
      if (!better && ratio <= best_ratio + 1e-12) {
        better = bland ? T.basis()[i] < T.basis()[leave] : a > best_piv;
      }
      if (better) {
        leave = i;
        best_ratio = std::min(ratio, best_ratio);
        best_piv = a;
      }
    }
    if (leave == m) {
      // A genuine ray has no positive entry at all; tiny positive entries
      // below the pivot tolerance only block this column.
      bool ray = true;
      for (std::size_t i = 0; i < m && ray; ++i) ray = T.at(i, enter) <= 0.0;
      if (ray) {
        run.outcome = SimplexOutcome::Unbounded;
        break;
      }
      blocked[enter] = 1;
      continue;
    }
    std::fill(blocked.begin(), blocked.end(), 0);
    if (best_ratio <= 1e-14) {
      if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
    }
    T.pivot(leave, enter);
  }
  run.used_bland = bland;
  return run;
}

// Starts from a phase-1 optimal tableau with zero artificials and minimizes
// the problem objective. Keeps the phase-1 point if phase 2 loses accuracy.
void optimize_phase2(const LpProblem& p, Tableau& T, std::size_t n, std::size_t art0,
                     const LpTolerances& tol, LpResult& result) {
  const std::size_t m = T.rows();
  const std::size_t ncols = T.cols();
  for (std::size_t i = 0; i < m; ++i) {
    if (T.basis()[i] < art0) continue;
    for (std::size_t j = 0; j < art0; ++j) {
      if (std::abs(T.at(i, j)) > kPivotTol) {
        T.pivot(i, j);
        break;
      }
    }
  }
  for (std::size_t j = 0; j <= ncols; ++j) T.cost(j) = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    T.cost(j) = p.objective[j];
    T.cost(n + j) = -p.objective[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double f = T.cost(T.basis()[i]);
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= ncols; ++j) T.at(m, j) -= f * T.at(i, j);
  }
  const auto run = run_simplex(T, art0, tol.max_iterations);
  result.iterations += run.iterations;
  result.used_bland = result.used_bland || run.used_bland;
  if (run.outcome == SimplexOutcome::Unbounded) result.note = "objective unbounded";
  if (run.outcome == SimplexOutcome::IterationCap) result.note = "phase-2 iteration cap reached";

  std::vector<double> value(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) value[T.basis()[i]] = std::max(0.0, T.rhs(i));
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = value[j] - value[n + j];
  const double violation = p.max_violation(x);
  if (violation <= tol.feasible) {
    result.point = std::move(x);
    result.violation = violation;
  } else {
    result.note = "phase-2 point lost feasibility; returning the phase-1 point";
  }
}

}  // namespace

LpResult solve_lp(const LpProblem& p, const LpTolerances& tol) {
  p.validate();
  const std::size_t n = p.num_vars;
  const std::size_t n_ineq = p.inequalities.size();
  const std::size_t n_eq = p.equalities.size();
  const std::size_t m = n_ineq + n_eq;

  LpResult result;
  if (m == 0) {
    result.status = LpStatus::Feasible;
    result.point.assign(n, 0.0);
    return result;
  }

  // Scaled copies of all rows, flipped so the right-hand side is nonnegative.
  struct Row {
    std::vector<double> a;
    double b;
    double slack_sign;  // +1 (<=), -1 (flipped <=), 0 (equality)
  };
  std::vector<Row> rows;
  rows.reserve(m);
  auto push = [&](const LpRow& r, bool inequality) {
    double scale = 0.0;
    for (double v : r.coeffs) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    Row row{std::vector<double>(n), r.bound / scale, inequality ? 1.0 : 0.0};
    for (std::size_t j = 0; j < n; ++j) row.a[j] = r.coeffs[j] / scale;
    if (row.b < 0.0) {
      for (double& v : row.a) v = -v;
      row.b = -row.b;
      row.slack_sign = -row.slack_sign;
    }
    rows.push_back(std::move(row));
  };
  for (const auto& r : p.inequalities) push(r, true);
  for (const auto& r : p.equalities) push(r, false);

  // Columns: [x+ (n) | x- (n) | slacks (n_ineq) | artificials (n_art)]
  std::size_t n_art = 0;
  for (const auto& r : rows) n_art += (r.slack_sign == 1.0) ? 0 : 1;
  const std::size_t slack0 = 2 * n;
  const std::size_t art0 = slack0 + n_ineq;
  const std::size_t ncols = art0 + n_art;

  Tableau T(m, ncols);
  std::size_t art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& r = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      T.at(i, j) = r.a[j];
      T.at(i, n + j) = -r.a[j];
    }
    if (i < n_ineq) T.at(i, slack0 + i) = r.slack_sign;
    T.rhs(i) = r.b;
    if (r.slack_sign == 1.0) {
      T.basis()[i] = slack0 + i;
    } else {
      T.at(i, art0 + art) = 1.0;
      T.basis()[i] = art0 + art;
      ++art;
    }
  }
  // Phase-1 reduced costs: c_art = 1, priced out against the artificial basis.
  for (std::size_t j = art0; j < ncols; ++j) T.cost(j) = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (T.basis()[i] < art0) continue;
    for (std::size_t j = 0; j <= ncols; ++j) T.at(m, j) -= T.at(i, j);
  }

  const auto phase1 = run_simplex(T, ncols, tol.max_iterations);
  result.iterations = phase1.iterations;
  result.used_bland = phase1.used_bland;
  const bool optimal = phase1.outcome == SimplexOutcome::Optimal;
  if (phase1.outcome == SimplexOutcome::Unbounded) result.note = "phase-1 ray detected";

  std::vector<double> value(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) value[T.basis()[i]] = std::max(0.0, T.rhs(i));
  double w = 0.0;
  for (std::size_t j = art0; j < ncols; ++j) w += value[j];
  result.phase1_objective = w;

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = value[j] - value[n + j];
  result.violation = p.max_violation(x);

  if (!optimal) {
    if (result.note.empty()) result.note = "iteration cap reached";
    if (result.violation <= tol.feasible) {
      result.status = LpStatus::Feasible;
      result.point = std::move(x);
    }
    return result;
  }
  if (result.violation <= tol.feasible) {
    result.status = LpStatus::Feasible;
    result.point = std::move(x);
    if (!p.objective.empty()) optimize_phase2(p, T, n, art0, tol, result);
  } else if (w >= tol.infeasible) {
    result.status = LpStatus::Infeasible;
  } else {
    result.status = LpStatus::Indeterminate;
    result.note = "phase-1 optimum inside the tolerance band";
  }
  return result;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace hbatlas
