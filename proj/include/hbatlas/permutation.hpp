#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbatlas {

/// Sort permutation of a cycle: images[t] is the sorted rank of the iterate
/// x_t, i.e. x_t = x^(images[t]). Canonical permutations fix 0 (the first
/// iterate is the smallest one).
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `images` is a bijection on {0..K-1}.
  explicit Permutation(std::vector<int> images);

  std::size_t size() const { return images_.size(); }
  int operator[](std::size_t t) const { return images_[t]; }
  const std::vector<int>& images() const { return images_; }

  bool is_canonical() const { return !images_.empty() && images_[0] == 0; }
  /// time_of_rank()[r] is the time index carrying rank r.
  std::vector<int> time_of_rank() const;

  /// Cyclic time shift so that the rank-0 iterate comes first.
  Permutation canonical() const;
  /// Rank reversal r -> K-1-r (the mirror x -> -x), made canonical.
  Permutation reflected() const;

  std::string str() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

/// Zigzag sort order 0, 1, 3, 5, ..., (top), ..., 6, 4, 2 in time order.
Permutation conjectured_permutation(std::size_t K);

inline constexpr std::size_t kMaxEnumerationK = 9;

/// Canonical permutations of length K with one representative (the
/// lexicographically smaller one) per reflection pair; self-mirror
/// permutations appear once. Requires 3 <= K <= 9.
std::vector<Permutation> reduced_permutations(std::size_t K);

/// All (K-1)! canonical permutations in lexicographic order.
std::vector<Permutation> canonical_permutations(std::size_t K);

}  // namespace hbatlas
