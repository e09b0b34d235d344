#include <doctest.h>

#include "hbatlas/dim2_cycles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace hbatlas;

namespace {

using cplx = std::complex<double>;

double re_dot(cplx a, cplx b) { return (a * std::conj(b)).real(); }

// Interpolation residual with zero function values between x_i and x_{i+d}
// on the unit circle, written in complex arithmetic. It does not depend on i.
double zero_f_residual(const Tuning& t, const ClassParams& c, std::size_t K, std::size_t d) {
  const double th = 2.0 * std::numbers::pi / static_cast<double>(K);
  const cplx w = ((1.0 + t.beta) - std::polar(1.0, th) - t.beta * std::polar(1.0, -th)) / t.gamma;
  const cplx xi = 1.0;
  const cplx xj = std::polar(1.0, th * static_cast<double>(d));
  const cplx dx = xi - xj;
  const cplx gj = w * xj;
  const cplx dg = w * dx;
  const double kappa = 1.0 / (2.0 * (1.0 - c.mu / c.L));
  return -re_dot(gj, dx) -
         kappa * (std::norm(dg) / c.L + c.mu * std::norm(dx) - 2.0 * c.mu / c.L * re_dot(dg, dx));
}

double min_zero_f_residual(const Tuning& t, const ClassParams& c, std::size_t K) {
  double m = INFINITY;
  for (std::size_t d = 1; d < K; ++d) m = std::min(m, zero_f_residual(t, c, K, d));
  return m;
}

// Difference-constraint feasibility f_j - f_i <= w_ij via negative-cycle detection.
bool floyd_warshall_feasible(const std::vector<std::vector<double>>& w) {
  auto d = w;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) d[i][i] = std::min(d[i][i], 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (std::size_t i = 0; i < n; ++i)
    if (d[i][i] < -1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("roots_cycle_geometry") {
  const ClassParams c{1.0, 10.0};
  const Tuning t{0.3, 0.4};
  const auto g = roots_cycle_geometry(t, c, 5);
  REQUIRE(g.points.size() == 5);
  REQUIRE(g.grads.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(g.points[i].norm() == doctest::Approx(1.0));
    const auto& prev = g.points[(i + 4) % 5];
    const Eigen::Vector2d next = g.points[i] - t.gamma * g.grads[i] + t.beta * (g.points[i] - prev);
    CHECK((next - g.points[(i + 1) % 5]).norm() <= 1e-12);
  }
  const auto lp = roots_cycle_lp(g);
  CHECK(lp.num_vars == 5);
  CHECK(lp.inequalities.size() == 20);
}

TEST_CASE("LP feasibility matches the closed-form residual oracle") {
  const ClassParams c{1.0, 10.0};
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ug(0.01, 0.4), ub(-0.99, 0.99);
  std::size_t found = 0, checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const Tuning t{ug(rng), ub(rng)};
    const std::size_t K = 3 + trial % 6;
    const double m = min_zero_f_residual(t, c, K);
    if (std::abs(m) < 1e-8) continue;
    ++checked;
    const auto r = roots_cycle_feasible(t, c, K);
    CHECK(r.status == (m >= 0.0 ? SearchStatus::Found : SearchStatus::None));

    // Same answer from shortest paths on the full pairwise weights.
    const auto geo = roots_cycle_geometry(t, c, K);
    std::vector<std::vector<double>> w(K, std::vector<double>(K, INFINITY));
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j)
        if (i != j) w[i][j] = zero_f_residual(t, c, K, (j + K - i) % K);
    CHECK(floyd_warshall_feasible(w) == (m >= 0.0));

    if (r.cycle) {
      ++found;
      CHECK(check_roots_cycle(*r.cycle) == "");
      CHECK(min_interp_residual(*r.cycle) >= -1e-9);
    }
  }
  CHECK(checked > 500);
  CHECK(found > 0);
}

TEST_CASE("found cycles survive zeroing the function values") {
  const ClassParams c{1.0, 10.0};
  for (const Tuning t : {Tuning{0.35, 0.9}, Tuning{0.3, 0.8}, Tuning{0.38, 0.5}}) {
    const auto cell = dim2_cycle_search(t, c, 12);
    if (cell.status != SearchStatus::Found) continue;
    auto cyc = roots_cycle_geometry(t, c, cell.K);
    CHECK(check_roots_cycle(cyc) == "");
  }
}

TEST_CASE("homogeneity in (gamma, mu, L)") {
  const ClassParams c{1.0, 10.0};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ug(0.01, 0.4), ub(-0.99, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const Tuning t{ug(rng), ub(rng)};
    const double s = 3.0;
    const auto a = dim2_cycle_search(t, c, 8);
    const auto b = dim2_cycle_search({t.gamma / s, t.beta}, {c.mu * s, c.L * s}, 8);
    if (a.status == SearchStatus::Indeterminate || b.status == SearchStatus::Indeterminate) continue;
    CHECK(a == b);
  }
}

TEST_CASE("gradient descent never cycles on the unit circle") {
  const ClassParams c{1.0, 10.0};
  for (double g : {0.02, 0.1, 0.19}) {
    CHECK(dim2_cycle_search({g, 0.0}, c, 10).status == SearchStatus::None);
  }
}

TEST_CASE("dim2_region equals pointwise search") {
  const ClassParams c{1.0, 10.0};
  const auto spec = GridSpec::default_for(c, 7, 5);
  const auto reg = dim2_region(spec, c, 8, 2);
  REQUIRE(reg.cells.size() == spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    CHECK(reg.cells[k] == dim2_cycle_search(spec.tuning_at(k), c, 8));
  }
}
