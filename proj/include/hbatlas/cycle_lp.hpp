#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbatlas/lp.hpp"
#include "hbatlas/permutation.hpp"
#include "hbatlas/types.hpp"

namespace hbatlas {

/// A length-K cycle of heavy-ball on a scalar function of F_{mu,L}.
/// X and G are in time order; sorting X by `sigma` gives the sorted knots.
struct CycleCertificate {
  std::size_t K = 0;
  Permutation sigma;
  std::vector<double> X;
  std::vector<double> G;
  Tuning tuning;
  ClassParams cls;
  double min_gap = 0.0;

  bool operator==(const CycleCertificate&) const = default;
};

/// G_i = ((1 + beta) X_i - X_{i+1} - beta X_{i-1}) / gamma, indices mod K.
/// These are the only gradients for which heavy-ball cycles through X.
std::vector<double> circulant_gradient(std::span<const double> X, const Tuning& t);

struct CycleLpOptions {
  LpTolerances lp;
  /// Lower bound imposed on every sorted gap inside the feasibility LP
  /// (the spread is 1).
  double gap_floor = 0.0;
  /// Certificates are translated so the smallest iterate sits here.
  double offset = 5.0;
  /// Certificates whose smallest sorted gap is not above this are rejected.
  double min_gap = 1e-7;
  /// Relative tolerance on the slope bounds when checking a certificate.
  double slope_tol = 1e-9;
};

/// Feasibility LP for a cycle with sort permutation sigma. Variables are the
/// time-ordered iterates. For each consecutive sorted pair there are three
/// rows: gap >= floor, gamma*dG >= gamma*mu*gap, gamma*dG <= gamma*L*gap.
/// Two equalities pin the smallest iterate to 0 and the spread to 1.
LpProblem build_lp(const Tuning& t, const ClassParams& c, std::size_t K, const Permutation& sigma,
                   double gap_floor = 0.0);

enum class SearchStatus { Found, None, Indeterminate };

struct CycleSearchResult {
  SearchStatus status = SearchStatus::None;
  std::optional<CycleCertificate> certificate;
  std::string note;
};

CycleSearchResult lp_feasible_sigma(const Tuning& t, const ClassParams& c, std::size_t K,
                                    const Permutation& sigma, const CycleLpOptions& opts = {});

enum class PermutationMode { ConjecturedOnly, FullEnumeration };

/// Smallest K in [3, Kmax] admitting a one-dimensional cycle.
/// FullEnumeration requires Kmax <= 9.
CycleSearchResult cycle_exists_dim1(const Tuning& t, const ClassParams& c, std::size_t Kmax,
                                    PermutationMode mode, const CycleLpOptions& opts = {});

/// Independent check of every CycleCertificate invariant. Returns an empty
/// string when valid, otherwise the first violated invariant.
std::string check_cycle_certificate(const CycleCertificate& cert, double tol = 1e-9);

/// Nudges each stored gradient by a few ulps so that the floating-point
/// heavy-ball update from (x_{i-1}, x_i) lands bit-exactly on x_{i+1}.
/// Iterates may move by single ulps to escape rounding ties.
/// Returns false if some step could not be closed.
bool snap_gradients_for_replay(CycleCertificate& cert);

struct ReplayReport {
  /// Largest |x_{t+K} - x_t| along the replayed trajectory.
  double max_period_error = 0.0;
  std::size_t period = 0;  // classify_trajectory's period, 0 if not periodic
  std::string error;       // reconstruction failure, if any
};

/// Rebuilds a 1-D function from the certificate and runs `periods` * K HB
/// steps from (x_0, x_1).
ReplayReport replay_certificate(const CycleCertificate& cert, std::size_t periods = 100);

/// Smallest d dividing K with X invariant under a shift by d.
std::size_t minimal_period(std::span<const double> X, double tol);

/// Per-cell outcome of a cycle sweep; K is set when status is Found.
struct CycleCell {
  SearchStatus status = SearchStatus::None;
  std::size_t K = 0;

  bool operator==(const CycleCell&) const = default;
};

const char* to_string(SearchStatus s);
const char* to_string(PermutationMode m);

}  // namespace hbatlas
