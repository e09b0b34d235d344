#include <doctest.h>

#include "hbatlas/core.hpp"
#include "hbatlas/cycle_lp.hpp"
#include "hbatlas/grid.hpp"

#include <algorithm>
#include <cmath>

using namespace hbatlas;

namespace {

const ClassParams kWide{1.0, 25.0};

CycleCertificate polyak_cycle() {
  const auto r = cycle_exists_dim1(polyak_tuning(kWide), kWide, 8, PermutationMode::ConjecturedOnly);
  REQUIRE(r.status == SearchStatus::Found);
  return *r.certificate;
}

}  // namespace

TEST_CASE("circulant_gradient") {
  const Tuning t{0.5, 0.25};
  const std::vector<double> X{0.0, 1.0, 3.0};
  const auto G = circulant_gradient(X, t);
  REQUIRE(G.size() == 3);
  // G_0 = (1.25*0 - 1 - 0.25*3)/0.5
  CHECK(G[0] == doctest::Approx(-3.5));
  CHECK(G[1] == doctest::Approx((1.25 - 3.0) / 0.5));
  CHECK(G[2] == doctest::Approx((3.75 - 0.0 - 0.25) / 0.5));
  SUBCASE("constant iterates give zero gradients") {
    const std::vector<double> C(5, 2.0);
    for (double g : circulant_gradient(C, t)) CHECK(std::abs(g) <= 1e-15);
  }
  SUBCASE("gradients make HB step through X") {
    for (std::size_t i = 0; i < X.size(); ++i) {
      const double prev = X[(i + 2) % 3], cur = X[i], next = X[(i + 1) % 3];
      CHECK(cur - t.gamma * G[i] + t.beta * (cur - prev) == doctest::Approx(next));
    }
  }
}

TEST_CASE("build_lp shape") {
  const auto p = build_lp({0.1, 0.5}, kWide, 3, Permutation({0, 1, 2}));
  CHECK(p.num_vars == 3);
  CHECK(p.inequalities.size() == 6);
  CHECK(p.equalities.size() == 2);
  const auto q = build_lp({0.1, 0.5}, kWide, 6, conjectured_permutation(6));
  CHECK(q.inequalities.size() == 15);
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("gradient descent inside the stable window has no cycle") {
  for (double g : {0.5, 1.0, 1.5, 1.99}) {
    const Tuning t{g / kWide.L, 0.0};
    const auto r = cycle_exists_dim1(t, kWide, 7, PermutationMode::FullEnumeration);
    CHECK(r.status == SearchStatus::None);
  }
}

TEST_CASE("Polyak tuning cycles on a wide class") {
  const auto cert = polyak_cycle();
  CHECK(check_cycle_certificate(cert) == "");
  CHECK(cert.K >= 3);
  CHECK(minimal_period(cert.X, 1e-12) == cert.K);
  CHECK(cert.min_gap > 1e-7);
  SUBCASE("replay reproduces the cycle") {
    const auto rep = replay_certificate(cert, 100);
    CHECK(rep.error == "");
    CHECK(rep.max_period_error <= 1e-9);
    CHECK(rep.period == cert.K);
  }
  SUBCASE("a tampered gradient is rejected") {
    auto bad = cert;
    bad.G[1] += 1e-3;
    CHECK(check_cycle_certificate(bad) != "");
  }
  SUBCASE("reflection symmetry") {
    const auto mirrored = lp_feasible_sigma(cert.tuning, kWide, cert.K, cert.sigma.reflected());
    CHECK(mirrored.status == SearchStatus::Found);
  }
}

TEST_CASE("scale invariance of the LP") {
  const Tuning t = polyak_tuning(kWide);
  const auto base = cycle_exists_dim1(t, kWide, 8, PermutationMode::ConjecturedOnly);
  REQUIRE(base.status == SearchStatus::Found);
  for (double s : {0.1, 7.0}) {
    const ClassParams scaled{kWide.mu * s, kWide.L * s};
    const Tuning ts{t.gamma / s, t.beta};
    const auto r = lp_feasible_sigma(ts, scaled, base.certificate->K, base.certificate->sigma);
    CHECK(r.status == SearchStatus::Found);
    if (r.certificate) CHECK(check_cycle_certificate(*r.certificate) == "");
  }
}

TEST_CASE("minimal_period") {
  CHECK(minimal_period(std::vector<double>{1, 2, 1, 2}, 1e-12) == 2);
  CHECK(minimal_period(std::vector<double>{1, 2, 3, 1, 2, 3}, 1e-12) == 3);
  CHECK(minimal_period(std::vector<double>{1, 2, 3, 4}, 1e-12) == 4);
  CHECK(minimal_period(std::vector<double>{5, 5, 5}, 1e-12) == 1);
}

TEST_CASE("cycle_exists_dim1 argument checks") {
  const Tuning t{0.1, 0.5};
  CHECK_THROWS_AS(cycle_exists_dim1(t, kWide, 10, PermutationMode::FullEnumeration), std::invalid_argument);
  CHECK_THROWS_AS(cycle_exists_dim1(t, kWide, 2, PermutationMode::ConjecturedOnly), std::invalid_argument);
}

TEST_CASE("search is monotone in Kmax") {
  const Tuning t = polyak_tuning(kWide);
  std::size_t first = 0;
  for (std::size_t kmax = 3; kmax <= 9; ++kmax) {
    const auto r = cycle_exists_dim1(t, kWide, kmax, PermutationMode::FullEnumeration);
    if (r.status == SearchStatus::Found) {
      if (first == 0) first = r.certificate->K;
      CHECK(r.certificate->K == first);
    } else {
      CHECK(first == 0);
    }
  }
}

TEST_CASE("replay is exact when momentum is close to 1") {
  const ClassParams c{1.0, 10.0};
  const auto spec = GridSpec::default_for(c, 40, 40);
  for (std::size_t cell : {1591, 1598, 1599, 1559}) {
    const Tuning t = spec.tuning_at(cell);
    for (const auto& sigma : reduced_permutations(6)) {
      const auto r = lp_feasible_sigma(t, c, 6, sigma);
      if (!r.certificate) continue;
      const auto rep = replay_certificate(*r.certificate, 100);
      CHECK(rep.max_period_error == 0.0);
    }
  }
}
