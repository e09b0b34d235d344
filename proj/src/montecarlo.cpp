#include "hbatlas/montecarlo.hpp"

#include "hbatlas/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

namespace hbatlas {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// f(x) = mu/2 |x|^2 + (L - mu) (h(x) - h(0) - <grad h(0), x>), h convex and 1-smooth.
class RandomFunction {
 public:
  RandomFunction(const ClassParams& c, std::mt19937_64& rng) : mu_(c.mu), span_(c.L - c.mu) {
    std::uniform_int_distribution<int> dim(1, 3);
    std::uniform_int_distribution<int> kind(0, 2);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    d_ = dim(rng);
    quadratic_ = kind(rng) == 0;
    if (quadratic_) {
      MatrixXd R = MatrixXd::NullaryExpr(d_, d_, [&] { return normal(rng); });
      Eigen::HouseholderQR<MatrixXd> qr(R);
      const MatrixXd U = qr.householderQ();
      VectorXd eig(d_);
      for (int i = 0; i < d_; ++i) {
        // Favor the extreme curvatures, where certificates are tight.
        const double u = unit(rng);
        eig[i] = u < 0.35 ? 0.0 : (u < 0.7 ? 1.0 : unit(rng));
      }
      S_ = U * eig.asDiagonal() * U.transpose();
      return;
    }
    const int ridges = 1 + static_cast<int>(unit(rng) * 4.0);
    double total = 0.0;
    for (int r = 0; r < ridges; ++r) {
      VectorXd a = VectorXd::NullaryExpr(d_, [&] { return normal(rng); });
      const double sharp = std::exp(std::log(0.1) + unit(rng) * std::log(1e3));  // 0.1 .. 100
      a *= sharp / a.norm();
      const double w = unit(rng) + 0.05;
      dirs_.push_back(a);
      weights_.push_back(w);
      offsets_.push_back(normal(rng) * 2.0);
      total += w * a.squaredNorm();
    }
    for (double& w : weights_) w /= total;  // sum w |a|^2 = 1 and logcosh'' <= 1
    g0_ = h_grad(VectorXd::Zero(d_));
    h0_ = h_value(VectorXd::Zero(d_));
  }

  int dim() const { return d_; }

  double value(const VectorXd& x) const {
    const double part = quadratic_ ? 0.5 * x.dot(S_ * x) : h_value(x) - h0_ - g0_.dot(x);
    return 0.5 * mu_ * x.squaredNorm() + span_ * part;
  }

  VectorXd grad(const VectorXd& x) const {
    const VectorXd part = quadratic_ ? VectorXd(S_ * x) : VectorXd(h_grad(x) - g0_);
    return mu_ * x + span_ * part;
  }

 private:
  static double logcosh(double u) {
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  }

  double h_value(const VectorXd& x) const {
    double v = 0.0;
    for (std::size_t r = 0; r < dirs_.size(); ++r) {
      v += weights_[r] * logcosh(dirs_[r].dot(x) - offsets_[r]);
    }
    return v;
  }

  VectorXd h_grad(const VectorXd& x) const {
    VectorXd g = VectorXd::Zero(d_);
    for (std::size_t r = 0; r < dirs_.size(); ++r) {
      g += weights_[r] * std::tanh(dirs_[r].dot(x) - offsets_[r]) * dirs_[r];
    }
    return g;
  }

  double mu_;
  double span_;
  int d_ = 1;
  bool quadratic_ = false;
  MatrixXd S_;
  std::vector<VectorXd> dirs_;
  std::vector<double> weights_;
  std::vector<double> offsets_;
  VectorXd g0_;
  double h0_ = 0.0;
};

double lyapunov_value(const LyapunovCertificate& cert, const VectorXd& x_prev,
                      const VectorXd& g_prev, const VectorXd& x, const VectorXd& g, double f_prev,
                      double f) {
  const std::array<const VectorXd*, 4> z{&x_prev, &g_prev, &x, &g};
  double q = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) q += cert.Q(a, b) * z[a]->dot(*z[b]);
  }
  return cert.ell[0] * f + cert.ell[1] * f_prev + q;
}

}  // namespace

SampleCheck sample_lyapunov_check(const LyapunovCertificate& cert, std::size_t windows,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleCheck out;
  out.worst_decrease = std::numeric_limits<double>::infinity();
  out.worst_lower = std::numeric_limits<double>::infinity();
  constexpr std::size_t kSteps = 5;
  while (out.windows < windows) {
    const RandomFunction f(cert.cls, rng);
    const double scale = std::exp(std::log(0.1) + unit(rng) * std::log(1e2));  // 0.1 .. 10
    VectorXd x_prev = VectorXd::NullaryExpr(f.dim(), [&] { return normal(rng); }) * scale;
    VectorXd x = unit(rng) < 0.3 ? x_prev
                                 : VectorXd(VectorXd::NullaryExpr(f.dim(), [&] { return normal(rng); }) * scale);
    VectorXd g_prev = f.grad(x_prev);
    VectorXd g = f.grad(x);
    double f_prev = f.value(x_prev);
    double f_cur = f.value(x);
    for (std::size_t s = 0; s < kSteps && out.windows < windows; ++s) {
      const VectorXd x_next = hb_step(HbState{x_prev, x}, g, cert.tuning).x_cur;
      const VectorXd g_next = f.grad(x_next);
      const double f_next = f.value(x_next);
      const double v_now = lyapunov_value(cert, x_prev, g_prev, x, g, f_prev, f_cur);
      const double v_next = lyapunov_value(cert, x, g, x_next, g_next, f_cur, f_next);
      out.worst_decrease = std::min(out.worst_decrease, cert.rho * v_now - v_next);
      out.worst_lower = std::min(out.worst_lower, v_next - f_next);
      ++out.windows;
      x_prev = x;
      g_prev = g;
      f_prev = f_cur;
      x = x_next;
      g = g_next;
      f_cur = f_next;
    }
  }
  return out;
}

}  // namespace hbatlas
