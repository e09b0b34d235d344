#include "hbatlas/lyapunov_pep.hpp"

#include "hbatlas/quadratic_rate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hbatlas {

namespace {

using Eigen::Matrix;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using Vec5 = Matrix<double, 5, 1>;
using Mat5 = Matrix<double, 5, 5>;
using Mat45 = Matrix<double, 4, 5>;

// A point of the PEP in Gram coordinates: x and g as combinations of the
// basis (x_{t-1}, x_t, g_{t-1}, g_t, g_{t+1}), f over (f_{t-1}, f_t, f_{t+1}).
struct SymPoint {
  Vec5 x = Vec5::Zero();
  Vec5 g = Vec5::Zero();
  Vector3d f = Vector3d::Zero();
};

Vec5 unit5(int i) {
  Vec5 v = Vec5::Zero();
  v[i] = 1.0;
  return v;
}

std::array<SymPoint, 4> sym_points(const Tuning& t) {
  std::array<SymPoint, 4> p;  // star stays zero
  p[1].x = unit5(0);
  p[1].g = unit5(2);
  p[1].f = Vector3d::UnitX();
  p[2].x = unit5(1);
  p[2].g = unit5(3);
  p[2].f = Vector3d::UnitY();
  p[3].x << -t.beta, 1.0 + t.beta, 0.0, -t.gamma, 0.0;
  p[3].g = unit5(4);
  p[3].f = Vector3d::UnitZ();
  return p;
}

Mat5 sym_outer(const Vec5& u, const Vec5& v) {
  return 0.5 * (u * v.transpose() + v * u.transpose());
}

// r_ij = a . f + <R, Gram>.
struct SymResidual {
  Vector3d a;
  Mat5 R;
};

SymResidual sym_residual(const SymPoint& pi, const SymPoint& pj, const ClassParams& c) {
  const double kappa = 1.0 / (2.0 * (1.0 - c.mu / c.L));
  const Vec5 dx = pi.x - pj.x;
  const Vec5 dg = pi.g - pj.g;
  SymResidual r;
  r.a = pi.f - pj.f;
  r.R = -sym_outer(pj.g, dx) -
        kappa * (dg * dg.transpose() / c.L + c.mu * dx * dx.transpose() -
                 (2.0 * c.mu / c.L) * sym_outer(dg, dx));
  return r;
}

std::array<SymResidual, 12> sym_residuals(const Tuning& t, const ClassParams& c) {
  const auto pts = sym_points(t);
  std::array<SymResidual, 12> out;
  const auto& pairs = interpolation_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k] = sym_residual(pts[static_cast<std::size_t>(pairs[k].first)],
                          pts[static_cast<std::size_t>(pairs[k].second)], c);
  }
  return out;
}

// Rows map the Gram basis to (x_{s-1}, g_{s-1}, x_s, g_s) for s = t and t+1.
Mat45 window_now(const Tuning& t) {
  const auto pts = sym_points(t);
  Mat45 P;
  P.row(0) = pts[1].x.transpose();
  P.row(1) = pts[1].g.transpose();
  P.row(2) = pts[2].x.transpose();
  P.row(3) = pts[2].g.transpose();
  return P;
}

Mat45 window_next(const Tuning& t) {
  const auto pts = sym_points(t);
  Mat45 P;
  P.row(0) = pts[2].x.transpose();
  P.row(1) = pts[2].g.transpose();
  P.row(2) = pts[3].x.transpose();
  P.row(3) = pts[3].g.transpose();
  return P;
}

std::array<std::pair<int, int>, 10> q_entries() {
  std::array<std::pair<int, int>, 10> e;
  std::size_t k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) e[k++] = {a, b};
  }
  return e;
}

Eigen::Matrix4d q_basis(int a, int b) {
  Eigen::Matrix4d E = Eigen::Matrix4d::Zero();
  E(a, b) = 1.0;
  E(b, a) = 1.0;
  return E;
}

constexpr std::size_t kEll = 0;
constexpr std::size_t kQ = 2;
constexpr std::size_t kLambda = 12;
constexpr std::size_t kNu = 24;

}  // namespace

const std::array<std::pair<int, int>, 12>& interpolation_pairs() {
  static const std::array<std::pair<int, int>, 12> pairs = [] {
    std::array<std::pair<int, int>, 12> p;
    std::size_t k = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) p[k++] = {i, j};
      }
    }
    return p;
  }();
  return pairs;
}

LmiProblem build_lmi(const Tuning& t, const ClassParams& c, double rho) {
  c.validate();
  if (!(t.gamma > 0.0)) throw InvalidTuning("build_lmi: gamma must be positive");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("build_lmi: rho must be in (0, 1]");

  const auto res = sym_residuals(t, c);
  const Mat45 Pt = window_now(t);
  const Mat45 Pn = window_next(t);

  LmiProblem p{t, c, rho, {}};
  SdpProblem& sdp = p.sdp;
  sdp.num_vars = kLmiUnknowns;
  AffineMatrix A{MatrixXd::Zero(5, 5), std::vector<MatrixXd>(kLmiUnknowns, MatrixXd::Zero(5, 5))};
  AffineMatrix B = A;
  MatrixXd E = MatrixXd::Zero(6, kLmiUnknowns);
  VectorXd e = VectorXd::Zero(6);

  // f-coefficients (f_{t-1}, f_t, f_{t+1}) of V_t and V_{t+1} per ell entry.
  const std::array<Vector3d, 2> v_now{Vector3d::UnitY(), Vector3d::UnitX()};
  const std::array<Vector3d, 2> v_next{Vector3d::UnitZ(), Vector3d::UnitY()};
  for (std::size_t k = 0; k < 2; ++k) {
    E.block<3, 1>(0, kEll + k) = rho * v_now[k] - v_next[k];
    E.block<3, 1>(3, kEll + k) = v_next[k];
  }
  e.segment<3>(3) = Vector3d::UnitZ();

  const auto entries = q_entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Eigen::Matrix4d Eab = q_basis(entries[k].first, entries[k].second);
    const Mat5 now = Pt.transpose() * Eab * Pt;
    const Mat5 next = Pn.transpose() * Eab * Pn;
    A.coeffs[kQ + k] = rho * now - next;
    B.coeffs[kQ + k] = next;
  }
  for (std::size_t k = 0; k < 12; ++k) {
    A.coeffs[kLambda + k] = -res[k].R;
    B.coeffs[kNu + k] = -res[k].R;
    E.block<3, 1>(0, kLambda + k) = -res[k].a;
    E.block<3, 1>(3, kNu + k) = -res[k].a;
    sdp.nonneg.push_back(kLambda + k);
    sdp.nonneg.push_back(kNu + k);
  }
  sdp.blocks = {std::move(A), std::move(B)};
  sdp.eq_matrix = std::move(E);
  sdp.eq_rhs = std::move(e);
  return p;
}

LyapunovCertificate certificate_from_unknowns(const VectorXd& z, const LmiProblem& p) {
  if (z.size() != static_cast<Eigen::Index>(kLmiUnknowns)) {
    throw std::invalid_argument("certificate_from_unknowns: expected 36 unknowns");
  }
  LyapunovCertificate cert;
  cert.ell = {z[kEll], z[kEll + 1]};
  const auto entries = q_entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [a, b] = entries[k];
    cert.Q(a, b) = z[static_cast<Eigen::Index>(kQ + k)];
    cert.Q(b, a) = cert.Q(a, b);
  }
  for (std::size_t k = 0; k < 12; ++k) {
    cert.lambda[k] = z[static_cast<Eigen::Index>(kLambda + k)];
    cert.nu[k] = z[static_cast<Eigen::Index>(kNu + k)];
  }
  cert.rho = p.rho;
  cert.tuning = p.tuning;
  cert.cls = p.cls;
  return cert;
}

VectorXd unknowns_from_certificate(const LyapunovCertificate& cert) {
  VectorXd z(kLmiUnknowns);
  z[kEll] = cert.ell[0];
  z[kEll + 1] = cert.ell[1];
  const auto entries = q_entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    // The basis element for an off-diagonal entry carries both (a,b) and (b,a).
    z[static_cast<Eigen::Index>(kQ + k)] = cert.Q(entries[k].first, entries[k].second);
  }
  for (std::size_t k = 0; k < 12; ++k) {
    z[static_cast<Eigen::Index>(kLambda + k)] = cert.lambda[k];
    z[static_cast<Eigen::Index>(kNu + k)] = cert.nu[k];
  }
  return z;
}

CertificateMatrices certificate_matrices(const LyapunovCertificate& cert) {
  const Tuning& t = cert.tuning;
  const auto res = sym_residuals(t, cert.cls);
  const Mat45 Pt = window_now(t);
  const Mat45 Pn = window_next(t);
  const Eigen::Matrix4d Q = 0.5 * (cert.Q + cert.Q.transpose());
  const double l1 = cert.ell[0];
  const double l2 = cert.ell[1];

  CertificateMatrices m;
  Mat5 A = cert.rho * Pt.transpose() * Q * Pt - Pn.transpose() * Q * Pn;
  Mat5 B = Pn.transpose() * Q * Pn;
  // rho V_t - V_{t+1} and V_{t+1} - f_{t+1}, f-parts over (f_{t-1}, f_t, f_{t+1}).
  Vector3d fa(cert.rho * l2, cert.rho * l1 - l2, -l1);
  Vector3d fb(0.0, l2, l1 - 1.0);
  for (std::size_t k = 0; k < 12; ++k) {
    A -= cert.lambda[k] * res[k].R;
    B -= cert.nu[k] * res[k].R;
    fa -= cert.lambda[k] * res[k].a;
    fb -= cert.nu[k] * res[k].a;
  }
  m.A = A;
  m.B = B;
  m.f_residual_A = fa;
  m.f_residual_B = fb;
  return m;
}

std::string certificate_violation(const LyapunovCertificate& cert, double tol) {
  for (std::size_t k = 0; k < 12; ++k) {
    if (!(cert.lambda[k] >= -tol)) return "lambda[" + std::to_string(k) + "] negative";
    if (!(cert.nu[k] >= -tol)) return "nu[" + std::to_string(k) + "] negative";
  }
  if (!(cert.rho > 0.0 && cert.rho <= 1.0)) return "rho outside (0, 1]";
  const auto m = certificate_matrices(cert);
  if (!(m.f_residual_A.cwiseAbs().maxCoeff() <= tol)) return "decrease condition f-residual";
  if (!(m.f_residual_B.cwiseAbs().maxCoeff() <= tol)) return "lower bound f-residual";
  if (!(min_eigenvalue(m.A) >= -tol)) return "decrease condition matrix not PSD";
  if (!(min_eigenvalue(m.B) >= -tol)) return "lower bound matrix not PSD";
  return {};
}

bool verify_certificate(const LyapunovCertificate& cert, const Tuning& t, const ClassParams& c,
                        double tol) {
  if (!(cert.tuning == t) || !(cert.cls == c)) return false;
  return certificate_violation(cert, tol).empty();
}

LyapunovResult sdp_feasible(const LmiProblem& p, double tol, const SdpOptions& opts) {
  const SdpResult sol = solve_sdp(p.sdp, opts);
  if (sol.status == SdpStatus::Infeasible) return {LyapunovStatus::None, std::nullopt, {}};

  LyapunovCertificate cert = certificate_from_unknowns(sol.z, p);
  for (auto* arr : {&cert.lambda, &cert.nu}) {
    for (double& v : *arr) {
      if (v < 0.0 && v >= -tol) v = 0.0;
    }
  }
  const auto m = certificate_matrices(cert);
  cert.min_eig_A = min_eigenvalue(m.A);
  cert.min_eig_B = min_eigenvalue(m.B);
  if (auto why = certificate_violation(cert, tol); !why.empty()) {
    return {LyapunovStatus::Indeterminate, std::nullopt,
            std::string("solver ") + to_string(sol.status) + ", candidate rejected: " + why};
  }
  return {LyapunovStatus::Found, std::move(cert), {}};
}

LyapunovResult lyapunov_certificate(const Tuning& t, const ClassParams& c, double rho,
                                    double tol, const SdpOptions& opts) {
  const double q = rate_over_class(t, c).rho;
  if (q * q > rho) return {LyapunovStatus::None, std::nullopt, "quadratic rate exceeds rho"};
  return sdp_feasible(build_lmi(t, c, rho), tol, opts);
}

BestRate best_rate(const Tuning& t, const ClassParams& c, double tol_rho, double tol,
                   const SdpOptions& opts) {
  if (!(tol_rho > 0.0)) throw std::invalid_argument("best_rate: tol_rho must be positive");
  BestRate out;
  const auto top = lyapunov_certificate(t, c, 1.0, tol, opts);
  if (top.status != LyapunovStatus::Found) {
    out.status = top.status;
    out.note = top.note;
    return out;
  }
  const double q = rate_over_class(t, c).rho;
  double lo = q * q;
  double hi = 1.0;
  out.status = LyapunovStatus::Found;
  out.certificate = top.certificate;
  while (hi - lo > tol_rho) {
    const double mid = 0.5 * (lo + hi);
    auto r = sdp_feasible(build_lmi(t, c, mid), tol, opts);
    if (r.status == LyapunovStatus::Found) {
      hi = mid;
      out.certificate = std::move(r.certificate);
    } else {
      if (r.status == LyapunovStatus::Indeterminate && out.note.empty()) {
        out.note = "indeterminate at rho=" + std::to_string(mid);
      }
      lo = mid;
    }
  }
  out.rho = hi;
  return out;
}

const char* to_string(LyapunovStatus s) {
  switch (s) {
    case LyapunovStatus::Found: return "found";
    case LyapunovStatus::None: return "none";
    case LyapunovStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace hbatlas
