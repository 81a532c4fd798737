#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qpi/incidence.hpp"
#include "qpi/multilinear.hpp"

namespace qpi {

// Degree budgets for the exact kernel computations. Exceeding a budget
// is an explicit ResourceError, never a silent truncation.
struct SubspaceBudget {
  int max_identity_degree = 7;               // m! up to 5040 coordinates
  int max_tideal_degree = 6;
  std::uint64_t max_unit_tuples = 100'000'000;
};

// A subspace of the multilinear space P_m, held as its unique reduced
// row-echelon basis over lexicographic permutation ranks. Two subspaces
// are equal exactly when their bases are identical.
class IdentitySubspace {
 public:
  // Canonicalizes an arbitrary spanning set.
  static IdentitySubspace from_spanning(int degree, const std::vector<MultilinearPoly>& polys);
  static IdentitySubspace full(int degree);   // all of P_m
  static IdentitySubspace zero(int degree);

  int degree() const { return degree_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<MultilinearPoly>& basis() const { return basis_; }

  bool contains(const MultilinearPoly& f) const;
  // The residual of f after elimination by the basis; zero iff contained.
  MultilinearPoly reduce(const MultilinearPoly& f) const;

  bool operator==(const IdentitySubspace&) const = default;

 private:
  IdentitySubspace(int degree, std::vector<MultilinearPoly> basis)
      : degree_(degree), basis_(std::move(basis)) {}
  int degree_;
  std::vector<MultilinearPoly> basis_;  // canonical RREF
};

// The multilinear identities of the incidence algebra of rel in degree
// m: the exact kernel of evaluation on all m-tuples of the pattern's
// matrix units. Each tuple contributes one sparse 0/1 constraint row per
// nonzero sector (permutations whose ordered unit product equals a fixed
// unit); rows are deduplicated before elimination. Tuple enumeration is
// parallel; the result is deterministic (the RREF basis is unique).
IdentitySubspace identity_space(const TransitiveRelation& rel, int m,
                                const SubspaceBudget& budget = {});

// The degree-m multilinear component of the T-ideal generated by the
// given multilinear polynomials: the span of a g(u_1, .., u_k) b over
// monomials a, b (possibly empty) and nonempty monomials u_t whose
// variables together are exactly x_1..x_m, each once.
IdentitySubspace tideal_component(std::span<const MultilinearPoly> generators, int m,
                                  const SubspaceBudget& budget = {});

enum class SubspaceOrder { equal, left_inside_right, right_inside_left, incomparable };

struct SubspaceComparison {
  SubspaceOrder order = SubspaceOrder::incomparable;
  // A basis element of one side that the other side misses, when any.
  std::optional<MultilinearPoly> left_only;
  std::optional<MultilinearPoly> right_only;
};

SubspaceComparison subspace_compare(const IdentitySubspace& u, const IdentitySubspace& v);

IdentitySubspace intersect(const IdentitySubspace& u, const IdentitySubspace& v);

const char* to_string(SubspaceOrder order);

}  // namespace qpi
