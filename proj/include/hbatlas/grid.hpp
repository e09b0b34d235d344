#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbatlas/types.hpp"

namespace hbatlas {

/// Rectangular (gamma, beta) window split into nx * ny cells.
struct GridSpec {
  double gamma_min = 0.0;
  double gamma_max = 0.4;
  double beta_min = -1.0;
  double beta_max = 1.0;
  std::size_t nx = 60;
  std::size_t ny = 60;

  void validate() const {
    if (!(gamma_min >= 0.0) || !(gamma_max > gamma_min)) {
      throw std::invalid_argument("grid: need 0 <= gamma_min < gamma_max");
    }
    if (!(beta_min >= -1.0) || !(beta_max <= 1.0) || !(beta_max > beta_min)) {
      throw std::invalid_argument("grid: need -1 <= beta_min < beta_max <= 1");
    }
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid: nx and ny must be >= 2");
  }

  std::size_t size() const { return nx * ny; }

  // Cell centers; beta index selects the row.
  double gamma_at(std::size_t i) const {
    return gamma_min + (static_cast<double>(i) + 0.5) * (gamma_max - gamma_min) / static_cast<double>(nx);
  }
  double beta_at(std::size_t j) const {
    return beta_min + (static_cast<double>(j) + 0.5) * (beta_max - beta_min) / static_cast<double>(ny);
  }
  Tuning tuning_at(std::size_t index) const { return {gamma_at(index % nx), beta_at(index / nx)}; }

  /// Default window gamma in (0, 4/L], beta in (-1, 1).
  static GridSpec default_for(const ClassParams& c, std::size_t nx = 60, std::size_t ny = 60) {
    return {0.0, 4.0 / c.L, -1.0, 1.0, nx, ny};
  }

  bool operator==(const GridSpec&) const = default;
};

/// Row-major grid of per-cell results plus the configuration that produced it.
template <typename Cell>
struct RegionGrid {
  GridSpec spec;
  ClassParams cls;
  std::vector<Cell> cells;
  std::map<std::string, std::string> provenance;

  const Cell& at(std::size_t i, std::size_t j) const { return cells[j * spec.nx + i]; }
  Cell& at(std::size_t i, std::size_t j) { return cells[j * spec.nx + i]; }

  bool operator==(const RegionGrid&) const = default;
};

}  // namespace hbatlas
