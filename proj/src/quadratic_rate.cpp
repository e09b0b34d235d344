#include "hbatlas/quadratic_rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbatlas {

RateValue spectral_radius_eigen(const Tuning& t, double lambda) {
  const double a = 1.0 + t.beta - t.gamma * lambda;
  const double disc = a * a - 4.0 * t.beta;
  // Complex pair: both roots have modulus sqrt(beta). beta < 0 always lands
  // in the real branch.
  if (t.beta >= 0.0 && disc <= 0.0) return {std::sqrt(t.beta)};
  return {0.5 * (std::abs(a) + std::sqrt(disc))};
}

RateValue rate_over_class(const Tuning& t, const ClassParams& c) {
  return {std::max(spectral_radius_eigen(t, c.mu).rho, spectral_radius_eigen(t, c.L).rho)};
}

double best_gd_rate(const ClassParams& c) { return (c.L - c.mu) / (c.L + c.mu); }

double best_hb_rate(const ClassParams& c) {
  const double sl = std::sqrt(c.L);
  const double sm = std::sqrt(c.mu);
  return (sl - sm) / (sl + sm);
}

RegionGrid<RateCell> rate_map(const GridSpec& spec, const ClassParams& c,
                              std::optional<double> threshold) {
  spec.validate();
  c.validate();
  const double thr = threshold.value_or(0.5 * (best_gd_rate(c) + best_hb_rate(c)));
  RegionGrid<RateCell> grid{spec, c, {}, {}};
  grid.cells.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double rho = rate_over_class(spec.tuning_at(k), c).rho;
    grid.cells.push_back({rho, rho < thr});
  }
  return grid;
}

}  // namespace hbatlas
