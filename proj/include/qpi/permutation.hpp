#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qpi {

// Largest degree whose factorial fits comfortably in uint64.
inline constexpr int kMaxPermutationDegree = 20;

std::uint64_t factorial(int m);  // throws UsageError when m < 0 or m > 20

// A permutation of {1, ..., m}, stored as its image array, with a
// 0-based lexicographic rank: rank 0 is the identity, rank m!-1 is the
// reversal. Ranks are the canonical coordinates of the multilinear
// space P_m throughout the library.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);  // validates a bijection
  static Permutation identity(int degree);
  static Permutation from_rank(int degree, std::uint64_t rank);

  int degree() const { return static_cast<int>(images_.size()); }
  // Image of i, 1-based.
  int operator()(int i) const { return images_[static_cast<std::size_t>(i) - 1]; }
  const std::vector<int>& images() const { return images_; }

  std::uint64_t rank() const;
  int sign() const;  // +1 or -1
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  Permutation() = default;
  std::vector<int> images_;
};

// (outer ∘ inner)(i) = outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

// Visits all m! permutations in lexicographic (= rank) order.
void for_each_permutation(int degree, const std::function<void(const Permutation&)>& fn);

}  // namespace qpi
