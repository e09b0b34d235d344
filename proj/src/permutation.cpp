#include "hbatlas/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace hbatlas {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[v]) {
      throw std::invalid_argument("Permutation: not a bijection: " + str());
    }
    seen[v] = 1;
  }
}

std::vector<int> Permutation::time_of_rank() const {
  std::vector<int> inv(images_.size());
  for (std::size_t t = 0; t < images_.size(); ++t) inv[images_[t]] = static_cast<int>(t);
  return inv;
}

Permutation Permutation::canonical() const {
  const auto start = static_cast<std::size_t>(
      std::find(images_.begin(), images_.end(), 0) - images_.begin());
  std::vector<int> out(images_.size());
  for (std::size_t t = 0; t < images_.size(); ++t) out[t] = images_[(t + start) % images_.size()];
  return Permutation(std::move(out));
}

Permutation Permutation::reflected() const {
  const int top = static_cast<int>(images_.size()) - 1;
  std::vector<int> out(images_.size());
  std::transform(images_.begin(), images_.end(), out.begin(), [top](int r) { return top - r; });
  return Permutation(std::move(out)).canonical();
}

std::string Permutation::str() const {
  std::string s = "(";
  for (std::size_t t = 0; t < images_.size(); ++t) {
    if (t) s += ",";
    s += std::to_string(images_[t]);
  }
  return s + ")";
}

Permutation conjectured_permutation(std::size_t K) {
  if (K < 3) throw std::invalid_argument("conjectured_permutation: K must be >= 3");
  const std::size_t rising = K / 2;  // ceil((K-1)/2)
  std::vector<int> ranks(K);
  ranks[0] = 0;
  for (std::size_t t = 1; t < K; ++t) {
    ranks[t] = static_cast<int>(t <= rising ? 2 * t - 1 : 2 * (K - t));
  }
  return Permutation(std::move(ranks));
}

std::vector<Permutation> canonical_permutations(std::size_t K) {
  if (K < 1) return {};
  std::vector<int> v(K);
  std::iota(v.begin(), v.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin() + 1, v.end()));
  return out;
}

std::vector<Permutation> reduced_permutations(std::size_t K) {
  if (K < 3 || K > kMaxEnumerationK) {
    throw std::invalid_argument("reduced_permutations: K must be in [3, " +
                                std::to_string(kMaxEnumerationK) + "]");
  }
  std::vector<Permutation> out;
  for (auto& p : canonical_permutations(K)) {
    if (!(p.reflected() < p)) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace hbatlas
