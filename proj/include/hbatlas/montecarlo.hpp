#pragma once

#include <cstddef>
#include <cstdint>

#include "hbatlas/lyapunov_pep.hpp"

namespace hbatlas {

struct SampleCheck {
  std::size_t windows = 0;
  /// Smallest observed rho V_t - V_{t+1}.
  double worst_decrease = 0.0;
  /// Smallest observed V_{t+1} - (f(x_{t+1}) - f*).
  double worst_lower = 0.0;
};

/// Evaluates the certificate inequalities on heavy-ball windows
/// (x_{t-1}, x_t, x_{t+1}) drawn from random functions of F_{mu,L} in
/// dimensions 1 to 3 with minimizer 0 and minimum 0: mu/2 |x|^2 plus (L - mu)
/// times a convex 1-smooth part (log-cosh ridges or a random quadratic) with
/// its linearization at 0 removed. Each sample runs a few HB steps from a
/// random start and checks every window.
SampleCheck sample_lyapunov_check(const LyapunovCertificate& cert, std::size_t windows,
                                  std::uint64_t seed);

}  // namespace hbatlas
