#include <doctest.h>

#include "hbatlas/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

using namespace hbatlas;

namespace {

// Orbits of all K! rank sequences under cyclic time shifts and rank reversal.
std::size_t orbit_count(std::size_t K) {
  std::vector<int> v(K);
  std::iota(v.begin(), v.end(), 0);
  std::set<std::vector<int>> seen;
  std::size_t orbits = 0;
  do {
    if (seen.count(v)) continue;
    ++orbits;
    for (int mirror = 0; mirror < 2; ++mirror) {
      std::vector<int> w = v;
      if (mirror) {
        for (auto& r : w) r = static_cast<int>(K) - 1 - r;
      }
      for (std::size_t s = 0; s < K; ++s) {
        seen.insert(w);
        std::rotate(w.begin(), w.begin() + 1, w.end());
      }
    }
  } while (std::next_permutation(v.begin(), v.end()));
  return orbits;
}

}  // namespace

TEST_CASE("conjectured_permutation") {
  CHECK(conjectured_permutation(4).images() == std::vector<int>{0, 1, 3, 2});
  CHECK(conjectured_permutation(5).images() == std::vector<int>{0, 1, 3, 4, 2});
  CHECK(conjectured_permutation(6).images() == std::vector<int>{0, 1, 3, 5, 4, 2});
  CHECK_THROWS_AS(conjectured_permutation(2), std::invalid_argument);
  for (std::size_t K = 3; K <= 25; ++K) {
    const auto p = conjectured_permutation(K);
    CHECK(p.is_canonical());
    // odd ranks ascending, then even ranks descending
    std::vector<int> expect{0};
    for (int r = 1; r < static_cast<int>(K); r += 2) expect.push_back(r);
    for (int r = static_cast<int>(K - 1 - (K - 1) % 2); r > 0; r -= 2) expect.push_back(r);
    CHECK(p.images() == expect);
  }
}

TEST_CASE("Permutation basics") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 1, 3}), std::invalid_argument);
  const Permutation p({2, 0, 3, 1});
  CHECK(p.canonical().images() == std::vector<int>{0, 3, 1, 2});
  CHECK(p.time_of_rank() == std::vector<int>{1, 3, 0, 2});
  // reversal gives {1, 3, 0, 2}, shifted to start at rank 0
  CHECK(p.reflected().images() == std::vector<int>{0, 2, 1, 3});
  CHECK(p.reflected().reflected() == p.canonical());
}

TEST_CASE("enumeration counts") {
  CHECK(canonical_permutations(4).size() == 6);
  CHECK(canonical_permutations(5).size() == 24);
  CHECK(reduced_permutations(4).size() == 4);
  CHECK(reduced_permutations(5).size() == 12);
  for (std::size_t K = 3; K <= 8; ++K) {
    const auto red = reduced_permutations(K);
    CHECK(red.size() == orbit_count(K));
    std::set<Permutation> reps;
    for (const auto& p : red) {
      CHECK(p.is_canonical());
      CHECK(p <= p.reflected());
      reps.insert(p);
    }
    CHECK(reps.size() == red.size());
    for (const auto& p : canonical_permutations(K)) {
      CHECK((reps.count(p) + reps.count(p.reflected())) >= 1);
    }
  }
  CHECK_THROWS_AS(reduced_permutations(2), std::invalid_argument);
  CHECK_THROWS_AS(reduced_permutations(kMaxEnumerationK + 1), std::invalid_argument);
}
