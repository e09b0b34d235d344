#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "hbatlas/sdp.hpp"
#include "hbatlas/types.hpp"

namespace hbatlas {

/// V_t = ell[0] (f(x_t) - f*) + ell[1] (f(x_{t-1}) - f*) + q(z_t) with
/// z_t = (x_{t-1} - x*, g_{t-1}, x_t - x*, g_t) and q(z) = z' Q z.
/// lambda certifies rho V_t - V_{t+1} >= 0, nu certifies V_{t+1} >= f(x_{t+1}) - f*.
/// Multipliers are indexed by ordered pairs of {*, t-1, t, t+1} (see interpolation_pairs).
struct LyapunovCertificate {
  std::array<double, 2> ell{};
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  std::array<double, 12> lambda{};
  std::array<double, 12> nu{};
  double rho = 1.0;
  Tuning tuning;
  ClassParams cls;
  double min_eig_A = 0.0;
  double min_eig_B = 0.0;

  bool operator==(const LyapunovCertificate&) const = default;
};

/// The 12 ordered pairs (i, j), i != j, over the points 0 = *, 1 = t-1,
/// 2 = t, 3 = t+1, in lexicographic order.
const std::array<std::pair<int, int>, 12>& interpolation_pairs();

/// Unknown layout: ell (2), upper triangle of Q row by row (10), lambda (12), nu (12).
inline constexpr std::size_t kLmiUnknowns = 36;

/// Gram basis (x_{t-1}, x_t, g_{t-1}, g_t, g_{t+1}) with x* = 0, g* = 0, f* = 0
/// and x_{t+1} eliminated through the HB update. Block 0 is the decrease
/// condition, block 1 the lower bound; equalities zero the coefficients of
/// (f_{t-1}, f_t, f_{t+1}) in both, three rows each.
struct LmiProblem {
  Tuning tuning;
  ClassParams cls;
  double rho = 1.0;
  SdpProblem sdp;
};

LmiProblem build_lmi(const Tuning& t, const ClassParams& c, double rho);

/// Splits an unknown vector into a certificate (matrices and eigenvalues are
/// recomputed by verification, not taken from the solver).
LyapunovCertificate certificate_from_unknowns(const Eigen::VectorXd& z, const LmiProblem& p);
Eigen::VectorXd unknowns_from_certificate(const LyapunovCertificate& cert);

struct CertificateMatrices {
  Eigen::MatrixXd A;  // 5x5
  Eigen::MatrixXd B;  // 5x5
  Eigen::Vector3d f_residual_A;
  Eigen::Vector3d f_residual_B;
};

/// Direct evaluation of both certificate matrices and f-coefficient residuals.
CertificateMatrices certificate_matrices(const LyapunovCertificate& cert);

/// Recomputes everything from the certificate fields. Empty when valid,
/// otherwise the first failed check.
std::string certificate_violation(const LyapunovCertificate& cert, double tol = 1e-8);
bool verify_certificate(const LyapunovCertificate& cert, const Tuning& t, const ClassParams& c,
                        double tol = 1e-8);

enum class LyapunovStatus { Found, None, Indeterminate };

struct LyapunovResult {
  LyapunovStatus status = LyapunovStatus::None;
  std::optional<LyapunovCertificate> certificate;
  std::string note;
};

/// Solves the LMI and re-verifies any candidate; multipliers within the
/// verification tolerance of zero are clamped first.
LyapunovResult sdp_feasible(const LmiProblem& p, double tol = 1e-8, const SdpOptions& opts = {});

/// Convenience: build_lmi followed by sdp_feasible. Returns None without
/// solving when the quadratic lower bound already exceeds rho.
LyapunovResult lyapunov_certificate(const Tuning& t, const ClassParams& c, double rho,
                                    double tol = 1e-8, const SdpOptions& opts = {});

struct BestRate {
  LyapunovStatus status = LyapunovStatus::None;
  double rho = 1.0;
  std::optional<LyapunovCertificate> certificate;
  std::string note;
};

/// Bisection for the smallest certified rho in [rate_over_class^2, 1].
BestRate best_rate(const Tuning& t, const ClassParams& c, double tol_rho = 1e-4,
                   double tol = 1e-8, const SdpOptions& opts = {});

const char* to_string(LyapunovStatus s);

}  // namespace hbatlas
