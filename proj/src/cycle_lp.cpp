#include "hbatlas/cycle_lp.hpp"

#include "hbatlas/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hbatlas {

std::vector<double> circulant_gradient(std::span<const double> X, const Tuning& t) {
  const std::size_t K = X.size();
  if (K < 3) throw std::invalid_argument("circulant_gradient: K must be >= 3");
  if (t.gamma == 0.0) throw InvalidTuning("circulant_gradient: gamma must be nonzero");
  std::vector<double> G(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double next = X[(i + 1) % K];
    const double prev = X[(i + K - 1) % K];
    G[i] = ((1.0 + t.beta) * X[i] - next - t.beta * prev) / t.gamma;
  }
  return G;
}

namespace {

// Row i of gamma * [(1 + beta) I - J - beta J^{-1}].
std::vector<double> circulant_row(std::size_t i, std::size_t K, double beta) {
  std::vector<double> row(K, 0.0);
  row[i] += 1.0 + beta;
  row[(i + 1) % K] -= 1.0;
  row[(i + K - 1) % K] -= beta;
  return row;
}

}  // namespace

LpProblem build_lp(const Tuning& t, const ClassParams& c, std::size_t K, const Permutation& sigma,
                   double gap_floor) {
  if (K < 3) throw std::invalid_argument("build_lp: K must be >= 3");
  if (sigma.size() != K) throw std::invalid_argument("build_lp: permutation length != K");
  if (!(t.gamma > 0.0)) throw InvalidTuning("build_lp: gamma must be positive");
  c.validate();

  const auto time_of = sigma.time_of_rank();
  LpProblem p;
  p.num_vars = K;
  for (std::size_t r = 0; r + 1 < K; ++r) {
    const auto lo = static_cast<std::size_t>(time_of[r]);
    const auto hi = static_cast<std::size_t>(time_of[r + 1]);
    std::vector<double> gap(K, 0.0);
    gap[hi] += 1.0;
    gap[lo] -= 1.0;
    const auto row_hi = circulant_row(hi, K, t.beta);
    const auto row_lo = circulant_row(lo, K, t.beta);
    std::vector<double> dgrad(K);  // gamma * (g_hi - g_lo)
    for (std::size_t j = 0; j < K; ++j) dgrad[j] = row_hi[j] - row_lo[j];

    LpRow nonneg{std::vector<double>(K), -gap_floor};
    LpRow lower{std::vector<double>(K), 0.0};
    LpRow upper{std::vector<double>(K), 0.0};
    for (std::size_t j = 0; j < K; ++j) {
      nonneg.coeffs[j] = -gap[j];
      lower.coeffs[j] = t.gamma * c.mu * gap[j] - dgrad[j];
      upper.coeffs[j] = dgrad[j] - t.gamma * c.L * gap[j];
    }
    p.inequalities.push_back(std::move(nonneg));
    p.inequalities.push_back(std::move(lower));
    p.inequalities.push_back(std::move(upper));
  }
  LpRow anchor{std::vector<double>(K, 0.0), 0.0};
  anchor.coeffs[static_cast<std::size_t>(time_of[0])] = 1.0;
  LpRow spread{std::vector<double>(K, 0.0), 1.0};
  spread.coeffs[static_cast<std::size_t>(time_of[K - 1])] += 1.0;
  spread.coeffs[static_cast<std::size_t>(time_of[0])] -= 1.0;
  p.equalities.push_back(std::move(anchor));
  p.equalities.push_back(std::move(spread));
  return p;
}

std::size_t minimal_period(std::span<const double> X, double tol) {
  const std::size_t K = X.size();
  for (std::size_t d = 1; d < K; ++d) {
    if (K % d != 0) continue;
    bool invariant = true;
    for (std::size_t i = 0; i < K && invariant; ++i) {
      invariant = std::abs(X[(i + d) % K] - X[i]) <= tol;
    }
    if (invariant) return d;
  }
  return K;
}

std::string check_cycle_certificate(const CycleCertificate& cert, double tol) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t K = cert.K;
  if (K < 3) return "cycle length must be >= 3";
  if (cert.X.size() != K || cert.G.size() != K || cert.sigma.size() != K) {
    return "X, G and sigma must all have length K";
  }
  if (!cert.sigma.is_canonical()) return "sigma must fix 0";
  try {
    cert.cls.validate();
  } catch (const InvalidClass& e) {
    return e.what();
  }
  if (!(cert.tuning.gamma > 0.0)) return "gamma must be positive";

  const auto G = circulant_gradient(cert.X, cert.tuning);
  double gscale = 1.0;
  for (double g : G) gscale = std::max(gscale, std::abs(g));
  for (std::size_t i = 0; i < K; ++i) {
    if (std::abs(G[i] - cert.G[i]) > 1e-12 * gscale) {
      os << "gradient " << i << " is " << cert.G[i] << " but the cycle identity gives " << G[i];
      return os.str();
    }
  }

  const auto time_of = cert.sigma.time_of_rank();
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r + 1 < K; ++r) {
    const auto lo = static_cast<std::size_t>(time_of[r]);
    const auto hi = static_cast<std::size_t>(time_of[r + 1]);
    const double gap = cert.X[hi] - cert.X[lo];
    if (!(gap > 0.0)) {
      os << "X is not sorted by sigma at rank " << r;
      return os.str();
    }
    min_gap = std::min(min_gap, gap);
    const double slope = (cert.G[hi] - cert.G[lo]) / gap;
    if (slope < cert.cls.mu * (1.0 - tol) || slope > cert.cls.L * (1.0 + tol)) {
      os << "sorted slope " << slope << " at rank " << r << " outside [mu, L]";
      return os.str();
    }
  }
  const double spread = cert.X[static_cast<std::size_t>(time_of[K - 1])] -
                        cert.X[static_cast<std::size_t>(time_of[0])];
  if (std::abs(spread - 1.0) > tol) {
    os << "sorted spread " << spread << " is not 1";
    return os.str();
  }
  if (std::abs(min_gap - cert.min_gap) > tol) return "recorded min_gap does not match X";
  if (minimal_period(cert.X, 0.0) != K) return "X has a period shorter than K";
  return {};
}

namespace {

// Steps whose gradient could not be snapped.
std::vector<std::size_t> snap_steps(CycleCertificate& cert) {
  const std::size_t K = cert.K;
  const double gamma = cert.tuning.gamma;
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < K; ++i) {
    const HbState1D state{cert.X[(i + K - 1) % K], cert.X[i]};
    const double target = cert.X[(i + 1) % K];
    auto step = [&](double g) { return hb_step(state, g, cert.tuning).x_cur; };
    if (step(cert.G[i]) == target) continue;
    // The update evaluates (x - gamma*g) + beta*(x - x_prev). Pick the first
    // partial sum a near target - momentum, recover gamma*g = x - a, and scan
    // a few gradients around (x - a) / gamma.
    const double momentum = cert.tuning.beta * (state.x_cur - state.x_prev);
    const double a0 = target - momentum;
    bool hit = false;
    double best = 0.0;
    for (int da = 0; da <= 8 && !hit; ++da) {
      for (int sign : {1, -1}) {
        double a = a0;
        const double dir = sign > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
        for (int s = 0; s < da; ++s) a = std::nextafter(a, dir);
        const double g0 = (state.x_cur - a) / gamma;
        for (int dg = 0; dg <= 16; ++dg) {
          for (double gdir : {1.0, -1.0}) {
            double g = g0;
            for (int s = 0; s < dg; ++s) g = std::nextafter(g, gdir * dir);
            if (step(g) == target &&
                (!hit || std::abs(g - cert.G[i]) < std::abs(best - cert.G[i]))) {
              best = g;
              hit = true;
            }
          }
        }
        if (da == 0) break;
      }
    }
    if (hit) {
      cert.G[i] = best;
    } else {
      open.push_back(i);
    }
  }
  return open;
}

}  // namespace

bool snap_gradients_for_replay(CycleCertificate& cert) {
  // A rounding tie in the momentum term can make a step unreachable. Moving
  // the previous iterate shifts the momentum by about beta ulps; for beta
  // near 1 a single ulp keeps the tie, so the walk visits +1, -1, +2, -2, ...
  for (int round = 0; round < 16; ++round) {
    const auto open = snap_steps(cert);
    if (open.empty()) return true;
    const double dir = round % 2 ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity();
    for (std::size_t i : open) {
      double& x = cert.X[(i + cert.K - 1) % cert.K];
      for (int s = 0; s <= round; ++s) x = std::nextafter(x, dir);
    }
  }
  return snap_steps(cert).empty();
}

ReplayReport replay_certificate(const CycleCertificate& cert, std::size_t periods) {
  ReplayReport rep;
  try {
    const auto model = reconstruct_function_1d(cert.X, cert.G, cert.cls);
    const auto traj = simulate_hb(model, cert.X[0], cert.X[1], cert.tuning, periods * cert.K);
    if (traj.diverged) {
      rep.error = "replay diverged";
      rep.max_period_error = std::numeric_limits<double>::infinity();
      return rep;
    }
    for (std::size_t i = cert.K; i < traj.values.size(); ++i) {
      rep.max_period_error =
          std::max(rep.max_period_error, std::abs(traj.values[i] - traj.values[i - cert.K]));
    }
    ClassifyTrajectoryOptions opts;
    opts.max_period = std::max<std::size_t>(opts.max_period, cert.K);
    const auto cls = classify_trajectory(traj.values, opts);
    if (cls.kind == TrajectoryKind::Periodic) rep.period = cls.period;
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.max_period_error = std::numeric_limits<double>::infinity();
  }
  return rep;
}

namespace {

// build_lp plus a variable s bounding every sorted gap from below; minimizing
// -s picks the most evenly spread cycle.
LpProblem max_min_gap_lp(const Tuning& t, const ClassParams& c, std::size_t K,
                         const Permutation& sigma) {
  LpProblem p = build_lp(t, c, K, sigma, 0.0);
  for (std::size_t i = 0; i < p.inequalities.size(); ++i) {
    p.inequalities[i].coeffs.push_back(i % 3 == 0 ? 1.0 : 0.0);
  }
  for (auto& row : p.equalities) row.coeffs.push_back(0.0);
  p.num_vars = K + 1;
  p.objective.assign(K + 1, 0.0);
  p.objective[K] = -1.0;
  return p;
}

}  // namespace

CycleSearchResult lp_feasible_sigma(const Tuning& t, const ClassParams& c, std::size_t K,
                                    const Permutation& sigma, const CycleLpOptions& opts) {
  if (!sigma.is_canonical()) throw std::invalid_argument("lp_feasible_sigma: sigma must fix 0");
  const LpResult res = solve_lp(build_lp(t, c, K, sigma, opts.gap_floor), opts.lp);
  if (res.status == LpStatus::Infeasible) return {SearchStatus::None, std::nullopt, {}};
  if (res.status == LpStatus::Indeterminate) {
    return {SearchStatus::Indeterminate, std::nullopt, "LP: " + res.note};
  }

  std::vector<double> point = res.point;
  if (const LpResult spread = solve_lp(max_min_gap_lp(t, c, K, sigma), opts.lp);
      spread.status == LpStatus::Feasible) {
    point.assign(spread.point.begin(), spread.point.begin() + static_cast<std::ptrdiff_t>(K));
  }

  const auto time_of = sigma.time_of_rank();
  const double lo = point[static_cast<std::size_t>(time_of[0])];
  const double hi = point[static_cast<std::size_t>(time_of[K - 1])];
  std::vector<double> unit(K);
  for (std::size_t i = 0; i < K; ++i) unit[i] = (point[i] - lo) / (hi - lo);

  CycleCertificate cert;
  cert.K = K;
  cert.sigma = sigma;
  cert.tuning = t;
  cert.cls = c;
  const auto G_unit = circulant_gradient(unit, t);
  // The cycle is translation invariant. Try a few placements until every
  // stored gradient closes its replay step exactly. With X in [5, 6.7] the
  // partial sum x - gamma*g = x_next - momentum stays in (4, 8), the binade
  // of the iterates, since |momentum| < 1.
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double offset = opts.offset + 0.1 * attempt;
    cert.X.resize(K);
    for (std::size_t i = 0; i < K; ++i) cert.X[i] = offset + unit[i];
    cert.G = G_unit;
    if (snap_gradients_for_replay(cert)) break;
  }
  cert.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r + 1 < K; ++r) {
    cert.min_gap = std::min(cert.min_gap, cert.X[static_cast<std::size_t>(time_of[r + 1])] -
                                              cert.X[static_cast<std::size_t>(time_of[r])]);
  }
  if (!(cert.min_gap > opts.min_gap)) {
    return {SearchStatus::None, std::nullopt, "rejected: iterates not distinct"};
  }
  if (auto why = check_cycle_certificate(cert, opts.slope_tol); !why.empty()) {
    return {SearchStatus::Indeterminate, std::nullopt, "LP point fails certificate check: " + why};
  }
  return {SearchStatus::Found, std::move(cert), {}};
}

CycleSearchResult cycle_exists_dim1(const Tuning& t, const ClassParams& c, std::size_t Kmax,
                                    PermutationMode mode, const CycleLpOptions& opts) {
  if (Kmax < 3) throw std::invalid_argument("cycle_exists_dim1: Kmax must be >= 3");
  if (mode == PermutationMode::FullEnumeration && Kmax > kMaxEnumerationK) {
    throw std::invalid_argument("cycle_exists_dim1: full enumeration needs Kmax <= " +
                                std::to_string(kMaxEnumerationK));
  }
  bool indeterminate = false;
  std::string note;
  for (std::size_t K = 3; K <= Kmax; ++K) {
    const Permutation conj = conjectured_permutation(K);
    std::vector<Permutation> candidates{conj};
    if (mode == PermutationMode::FullEnumeration) {
      for (auto& p : reduced_permutations(K)) {
        if (p != conj) candidates.push_back(std::move(p));
      }
    }
    for (const auto& sigma : candidates) {
      auto r = lp_feasible_sigma(t, c, K, sigma, opts);
      if (r.status == SearchStatus::Found) return r;
      if (r.status == SearchStatus::Indeterminate && !indeterminate) {
        indeterminate = true;
        note = "K=" + std::to_string(K) + " sigma=" + sigma.str() + ": " + r.note;
      }
    }
  }
  if (indeterminate) return {SearchStatus::Indeterminate, std::nullopt, note};
  return {};
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::None: return "none";
    case SearchStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

const char* to_string(PermutationMode m) {
  return m == PermutationMode::ConjecturedOnly ? "conjectured" : "full";
}

}  // namespace hbatlas
