#include "qpi/permutation.hpp"

#include <algorithm>
#include <string>

#include "qpi/errors.hpp"

namespace qpi {

std::uint64_t factorial(int m) {
  if (m < 0 || m > kMaxPermutationDegree)
    throw UsageError("factorial not representable for degree " + std::to_string(m));
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int m = degree();
  if (m == 0 || m > kMaxPermutationDegree)
    throw UsageError("permutation degree out of range: " + std::to_string(m));
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int v : images_) {
    if (v < 1 || v > m || seen[static_cast<std::size_t>(v) - 1])
      throw UsageError("image array is not a bijection on 1.." + std::to_string(m));
    seen[static_cast<std::size_t>(v) - 1] = true;
  }
}

Permutation Permutation::identity(int degree) {
  std::vector<int> im(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) im[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(im));
}

Permutation Permutation::from_rank(int degree, std::uint64_t rank) {
  const std::uint64_t total = factorial(degree);
  if (rank >= total)
    throw UsageError("rank " + std::to_string(rank) + " out of range for degree " +
                     std::to_string(degree));
  std::vector<int> pool(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  Permutation p;
  p.images_.reserve(static_cast<std::size_t>(degree));
  std::uint64_t block = total;
  for (int i = degree; i >= 1; --i) {
    block /= static_cast<std::uint64_t>(i);
    const auto idx = static_cast<std::size_t>(rank / block);
    rank %= block;
    p.images_.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return p;
}

std::uint64_t Permutation::rank() const {
  const int m = degree();
  std::uint64_t r = 0;
  std::uint64_t block = factorial(m);
  for (int i = 0; i < m; ++i) {
    block /= static_cast<std::uint64_t>(m - i);
    std::uint64_t smaller = 0;
    for (int j = i + 1; j < m; ++j)
      if (images_[static_cast<std::size_t>(j)] < images_[static_cast<std::size_t>(i)]) ++smaller;
    r += smaller * block;
  }
  return r;
}

int Permutation::sign() const {
  int inversions = 0;
  const int m = degree();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (images_[static_cast<std::size_t>(i)] > images_[static_cast<std::size_t>(j)]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

Permutation Permutation::inverse() const {
  std::vector<int> im(images_.size());
  for (int i = 1; i <= degree(); ++i)
    im[static_cast<std::size_t>((*this)(i)) - 1] = i;
  return Permutation(std::move(im));
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.degree() != inner.degree())
    throw UsageError("composing permutations of different degrees");
  std::vector<int> im(static_cast<std::size_t>(inner.degree()));
  for (int i = 1; i <= inner.degree(); ++i)
    im[static_cast<std::size_t>(i) - 1] = outer(inner(i));
  return Permutation(std::move(im));
}

void for_each_permutation(int degree, const std::function<void(const Permutation&)>& fn) {
  Permutation p = Permutation::identity(degree);
  std::vector<int> im = p.images();
  do {
    fn(Permutation(im));
  } while (std::next_permutation(im.begin(), im.end()));
}

}  // namespace qpi
