#include "hbatlas/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hbatlas {

Eigen::MatrixXd AffineMatrix::eval(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd m = base;
  for (std::size_t k = 0; k < coeffs.size(); ++k) m += z[static_cast<Eigen::Index>(k)] * coeffs[k];
  return m;
}

void SdpProblem::validate() const {
  for (const auto& b : blocks) {
    if (b.coeffs.size() != num_vars) throw std::invalid_argument("sdp: block arity != num_vars");
    if (b.base.rows() != b.base.cols()) throw std::invalid_argument("sdp: block not square");
    for (const auto& m : b.coeffs) {
      if (m.rows() != b.base.rows() || m.cols() != b.base.cols()) {
        throw std::invalid_argument("sdp: block coefficient shape mismatch");
      }
    }
  }
  for (std::size_t k : nonneg) {
    if (k >= num_vars) throw std::invalid_argument("sdp: nonneg index out of range");
  }
  if (eq_matrix.rows() != eq_rhs.size() ||
      (eq_matrix.rows() > 0 && eq_matrix.cols() != static_cast<Eigen::Index>(num_vars))) {
    throw std::invalid_argument("sdp: equality shape mismatch");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// The problem restricted to the affine set: z = z0 + N w, y = (w, s).
class Reduced {
 public:
  Reduced(const SdpProblem& p, VectorXd z0, MatrixXd N, double radius)
      : z0_(std::move(z0)), N_(std::move(N)), dim_(N_.cols()) {
    for (const auto& b : p.blocks) {
      Block blk;
      blk.base = b.eval(z0_);
      for (Index l = 0; l < dim_; ++l) {
        MatrixXd m = MatrixXd::Zero(b.base.rows(), b.base.cols());
        for (std::size_t k = 0; k < b.coeffs.size(); ++k) m += N_(static_cast<Index>(k), l) * b.coeffs[k];
        blk.dirs.push_back(std::move(m));
      }
      barrier_weight_ += static_cast<double>(b.base.rows());
      blocks_.push_back(std::move(blk));
    }
    for (std::size_t k : p.nonneg) {
      nonneg_offset_.push_back(z0_[static_cast<Index>(k)]);
      nonneg_rows_.push_back(N_.row(static_cast<Index>(k)).transpose());
    }
    barrier_weight_ += static_cast<double>(p.nonneg.size()) + 2.0;
    ball_ = radius * radius - z0_.squaredNorm();
  }

  Index size() const { return dim_ + 1; }
  double barrier_weight() const { return barrier_weight_; }
  VectorXd z(const VectorXd& y) const { return z0_ + N_ * y.head(dim_); }

  /// Smallest constraint value at w (the margin s achievable at this w).
  double margin(const VectorXd& y) const {
    const VectorXd w = y.head(dim_);
    double m = kInf;
    for (const auto& b : blocks_) m = std::min(m, min_eigenvalue(matrix(b, w, 0.0)));
    for (std::size_t i = 0; i < nonneg_rows_.size(); ++i) {
      m = std::min(m, nonneg_offset_[i] + nonneg_rows_[i].dot(w));
    }
    return m;
  }

  /// Barrier value plus optional gradient/Hessian; +inf outside the domain.
  double barrier(const VectorXd& y, VectorXd* grad, MatrixXd* hess) const {
    const VectorXd w = y.head(dim_);
    const double s = y[dim_];
    const Index n = size();
    if (grad) grad->setZero(n);
    if (hess) hess->setZero(n, n);
    double phi = 0.0;

    for (const auto& b : blocks_) {
      const MatrixXd M = matrix(b, w, s);
      Eigen::LLT<MatrixXd> llt(M);
      if (llt.info() != Eigen::Success) return kInf;
      const MatrixXd Lm = llt.matrixL();
      for (Index i = 0; i < Lm.rows(); ++i) {
        if (!(Lm(i, i) > 0.0)) return kInf;
        phi -= 2.0 * std::log(Lm(i, i));
      }
      if (!grad) continue;
      const MatrixXd Minv = llt.solve(MatrixXd::Identity(M.rows(), M.cols()));
      std::vector<MatrixXd> S;
      S.reserve(static_cast<std::size_t>(n));
      for (Index l = 0; l < dim_; ++l) S.push_back(Minv * b.dirs[static_cast<std::size_t>(l)]);
      S.push_back(-Minv);
      for (Index l = 0; l < n; ++l) {
        (*grad)[l] -= S[static_cast<std::size_t>(l)].trace();
        if (!hess) continue;
        for (Index m = 0; m <= l; ++m) {
          const double v = S[static_cast<std::size_t>(l)].cwiseProduct(S[static_cast<std::size_t>(m)].transpose()).sum();
          (*hess)(l, m) += v;
          if (m != l) (*hess)(m, l) += v;
        }
      }
    }

    for (std::size_t i = 0; i < nonneg_rows_.size(); ++i) {
      const double h = nonneg_offset_[i] + nonneg_rows_[i].dot(w) - s;
      if (!(h > 0.0)) return kInf;
      phi -= std::log(h);
      if (!grad) continue;
      VectorXd a(n);
      a << nonneg_rows_[i], -1.0;
      *grad -= a / h;
      if (hess) *hess += a * a.transpose() / (h * h);
    }

    const double hb = ball_ - w.squaredNorm();
    if (!(hb > 0.0)) return kInf;
    phi -= std::log(hb);
    const double hc = 1.0 - s;
    if (!(hc > 0.0)) return kInf;
    phi -= std::log(hc);
    if (grad) {
      grad->head(dim_) += 2.0 * w / hb;
      (*grad)[dim_] += 1.0 / hc;
      if (hess) {
        hess->topLeftCorner(dim_, dim_) +=
            2.0 * MatrixXd::Identity(dim_, dim_) / hb + 4.0 * w * w.transpose() / (hb * hb);
        (*hess)(dim_, dim_) += 1.0 / (hc * hc);
      }
    }
    return phi;
  }

 private:
  struct Block {
    MatrixXd base;
    std::vector<MatrixXd> dirs;
  };

  MatrixXd matrix(const Block& b, const VectorXd& w, double s) const {
    MatrixXd M = b.base;
    for (Index l = 0; l < dim_; ++l) M += w[l] * b.dirs[static_cast<std::size_t>(l)];
    M.diagonal().array() -= s;
    return M;
  }

  VectorXd z0_;
  MatrixXd N_;
  Index dim_;
  std::vector<Block> blocks_;
  std::vector<double> nonneg_offset_;
  std::vector<VectorXd> nonneg_rows_;
  double ball_ = 0.0;
  double barrier_weight_ = 0.0;
};

}  // namespace

SdpResult solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  p.validate();
  const Index n = static_cast<Index>(p.num_vars);
  VectorXd z0 = VectorXd::Zero(n);
  MatrixXd N = MatrixXd::Identity(n, n);
  if (p.eq_matrix.rows() > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(p.eq_matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-12 * std::max(1.0, sv[0]);
    z0 = svd.solve(p.eq_rhs);
    if ((p.eq_matrix * z0 - p.eq_rhs).norm() > 1e-10 * (1.0 + p.eq_rhs.norm())) {
      SdpResult r;
      r.status = SdpStatus::Infeasible;
      r.note = "equality constraints are inconsistent";
      return r;
    }
    N = svd.matrixV().rightCols(n - rank);
  }
  const double radius = std::max(opts.radius, 10.0 * z0.norm());
  const Reduced red(p, z0, N, radius);

  VectorXd y = VectorXd::Zero(red.size());
  y[red.size() - 1] = std::min(red.margin(y), 0.0) - 1.0;

  SdpResult best;
  best.z = red.z(y);
  best.margin = red.margin(y);
  auto record = [&](const VectorXd& yy) {
    const double m = red.margin(yy);
    if (m > best.margin) {
      best.margin = m;
      best.z = red.z(yy);
    }
  };

  const Index s_index = red.size() - 1;
  VectorXd grad;
  MatrixXd hess;
  for (double tau = opts.tau_start; tau <= opts.tau_max; tau *= opts.tau_growth) {
    for (std::size_t it = 0; it < opts.max_newton; ++it) {
      const double phi = red.barrier(y, &grad, &hess);
      const double F = -tau * y[s_index] + phi;
      grad[s_index] -= tau;
      const VectorXd step = -hess.ldlt().solve(grad);
      const double slope = grad.dot(step);
      if (!(slope < 0.0) || -slope < 1e-12) break;
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-14) {
        const VectorXd trial = y + alpha * step;
        const double Ft = -tau * trial[s_index] + red.barrier(trial, nullptr, nullptr);
        if (Ft <= F + 0.25 * alpha * slope) {
          y = trial;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      ++best.newton_steps;
      if (!moved) break;
      record(y);
      if (best.margin > 0.0) {
        best.status = SdpStatus::Feasible;
        best.margin_bound = kInf;
        return best;
      }
      if (-slope < 1e-9) break;
    }
    best.margin_bound = y[s_index] + red.barrier_weight() / tau;
    if (best.margin_bound < -opts.infeasible_margin) {
      best.status = SdpStatus::Infeasible;
      return best;
    }
  }
  best.status = SdpStatus::Indeterminate;
  best.note = "barrier path ended with margin " + std::to_string(best.margin);
  return best;
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Feasible: return "feasible";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace hbatlas
