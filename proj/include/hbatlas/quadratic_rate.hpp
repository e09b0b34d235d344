#pragma once

#include <optional>

#include "hbatlas/grid.hpp"
#include "hbatlas/types.hpp"

namespace hbatlas {

/// Asymptotic per-iteration contraction factor; >= 1 means no convergence.
struct RateValue {
  double rho = 0.0;
  bool operator==(const RateValue&) const = default;
};

/// Largest root modulus of z^2 - (1 + beta - gamma*lambda) z + beta, i.e. the
/// rate of heavy-ball on the eigenmode lambda of a quadratic.
RateValue spectral_radius_eigen(const Tuning& t, double lambda);

/// Worst rate over Q_{mu,L}; attained at one of the two extreme eigenvalues.
RateValue rate_over_class(const Tuning& t, const ClassParams& c);

/// Optimal gradient-descent rate (L - mu) / (L + mu).
double best_gd_rate(const ClassParams& c);
/// Optimal heavy-ball rate (sqrt(L) - sqrt(mu)) / (sqrt(L) + sqrt(mu)).
double best_hb_rate(const ClassParams& c);

struct RateCell {
  double rho = 0.0;
  bool accelerated = false;
  bool operator==(const RateCell&) const = default;
};

/// Evaluates rate_over_class at every cell center. A cell is flagged
/// accelerated when its rate is below `threshold`; the default threshold is
/// the midpoint of the best GD and best HB rates.
RegionGrid<RateCell> rate_map(const GridSpec& spec, const ClassParams& c,
                              std::optional<double> threshold = std::nullopt);

}  // namespace hbatlas
