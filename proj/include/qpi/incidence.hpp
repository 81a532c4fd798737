#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qpi/quiver.hpp"
#include "qpi/rational.hpp"

namespace qpi {

// A transitive relation on vertices 1..n: the support pattern of an
// incidence algebra. Not required reflexive, not required antisymmetric
// (the full relation of an oriented cycle is a legal pattern).
class TransitiveRelation {
 public:
  // Validates transitivity; throws UsageError otherwise.
  TransitiveRelation(int n, std::set<std::pair<int, int>> pairs);
  // Builds the least transitive relation containing the given pairs.
  static TransitiveRelation closure(int n, const std::set<std::pair<int, int>>& pairs);
  static TransitiveRelation full(int n);

  int vertex_count() const { return n_; }
  bool contains(int i, int j) const { return pairs_.count({i, j}) > 0; }
  const std::set<std::pair<int, int>>& pairs() const { return pairs_; }
  bool subset_of(const TransitiveRelation& other) const;

  bool operator==(const TransitiveRelation&) const = default;

 private:
  int n_;
  std::set<std::pair<int, int>> pairs_;
};

// Sparse exact element of M_n with support tracked by entry; the matrix
// unit span of an incidence algebra lives here.
class IncidenceElement {
 public:
  explicit IncidenceElement(int n);
  static IncidenceElement unit(int n, int i, int j);  // e_{ij}

  int size() const { return n_; }
  bool is_zero() const { return entries_.empty(); }
  const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }
  Rational entry(int i, int j) const;

  void add_term(int i, int j, const Rational& c);
  void add_scaled(const Rational& c, const IncidenceElement& other);
  IncidenceElement scaled(const Rational& c) const;
  bool supported_on(const TransitiveRelation& rel) const;

  bool operator==(const IncidenceElement&) const = default;

 private:
  int n_;
  std::map<std::pair<int, int>, Rational> entries_;
};

// pi~-reachability: the transitive closure of the endpoint pairs of pi.
// Exact with no truncation; a product of pi-members realizes precisely a
// walk in the endpoint digraph.
TransitiveRelation relation_from_pi(const Quiver& q, const PathSet& pi);

// The algebra map p -> e_{s(p)t(p)}, extended linearly.
IncidenceElement phi(const Quiver& q, const PathAlgebraElement& x);

// Exact matrix product in M_n.
IncidenceElement incidence_multiply(const IncidenceElement& x, const IncidenceElement& y);

// Pattern-checked product: inputs must be supported on rel (UsageError),
// and the output is asserted to stay inside rel (InternalError if not;
// transitivity makes escape impossible for genuine patterns).
IncidenceElement incidence_multiply(const IncidenceElement& x, const IncidenceElement& y,
                                    const TransitiveRelation& rel);

// A chain: pairwise related distinct vertices in order, with a flag per
// vertex recording whether (v, v) is in the relation.
struct Chain {
  std::vector<int> vertices;
  std::vector<bool> self_related;

  bool operator==(const Chain&) const = default;
};

// All maximal chains of a relation that is acyclic on distinct vertices,
// in lexicographic vertex order. A relation with i != j related both
// ways is not chain-decomposable (UsageError).
std::vector<Chain> maximal_chains(const TransitiveRelation& rel);

// The pattern induced by a chain on its own vertices, renumbered 1..k in
// chain order: all (a, b) with a < b, plus (a, a) for self-related ones.
TransitiveRelation chain_pattern(const Chain& c);

// n lines of n characters, '*' for a present pair and '.' otherwise.
std::string render_pattern(const TransitiveRelation& rel);

}  // namespace qpi
