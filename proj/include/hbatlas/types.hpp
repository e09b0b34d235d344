#pragma once

#include <stdexcept>
#include <string>

namespace hbatlas {

/// Function class F_{mu,L}: L-smooth, mu-strongly convex.
struct ClassParams {
  double mu = 1.0;
  double L = 10.0;

  /// Throws InvalidClass unless 0 < mu < L.
  void validate() const;
  double condition() const { return L / mu; }

  bool operator==(const ClassParams&) const = default;
};

/// Heavy-ball parameters: step size gamma and momentum beta.
struct Tuning {
  double gamma = 0.0;
  double beta = 0.0;

  bool operator==(const Tuning&) const = default;
};

class InvalidClass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidTuning : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Polyak's tuning, optimal on quadratics of the class.
Tuning polyak_tuning(const ClassParams& c);

std::string to_string(const ClassParams& c);
std::string to_string(const Tuning& t);

}  // namespace hbatlas
