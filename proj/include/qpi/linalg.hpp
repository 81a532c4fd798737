#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qpi/rational.hpp"

namespace qpi {

// Exact sparse linear algebra over the rationals. Vectors are sorted
// (index, coefficient) lists with no stored zeros; subspace bases are
// kept in reduced row-echelon form, which is unique per subspace and is
// what makes golden tests and cross-oracle comparisons bit-stable.

using Index = std::uint64_t;

struct SparseVec {
  std::vector<std::pair<Index, Rational>> terms;  // sorted by index

  bool is_zero() const { return terms.empty(); }
  Index leading_index() const { return terms.front().first; }
  const Rational& leading_coeff() const { return terms.front().second; }
  Rational at(Index i) const;
  void scale(const Rational& c);

  bool operator==(const SparseVec&) const = default;
};

Rational dot(const SparseVec& a, const SparseVec& b);

// Incremental row-echelon basis: pivot column -> row with leading 1.
class EchelonBasis {
 public:
  // Eliminates v against the current pivot rows.
  SparseVec reduce(SparseVec v) const;
  // Reduces and, when a nonzero residual remains, normalizes it and adds
  // it as a new pivot row. Returns true when the rank grew.
  bool insert(SparseVec v);
  // Clears every pivot column out of the other rows: full RREF.
  void back_eliminate();

  std::size_t rank() const { return pivots_.size(); }
  const std::map<Index, SparseVec>& rows() const { return pivots_; }

  // Wraps rows that are already a reduced echelon basis (no checking of
  // mutual reduction; leading coefficients must be 1).
  static EchelonBasis from_rref_rows(const std::vector<SparseVec>& rows);

 private:
  std::map<Index, SparseVec> pivots_;
};

// The unique RREF basis of the span of the given rows.
std::vector<SparseVec> canonical_basis(const std::vector<SparseVec>& rows);

// The unique RREF basis of the common kernel {x : row . x = 0 for all
// rows}, over coordinates 0..ncols-1.
//
// Internally a mod-p elimination pass first selects candidate pivot
// rows, the exact elimination runs on those, and the resulting kernel is
// then certified exactly against every input row (escalating any row the
// candidate set missed). The output is exact unconditionally; the mod-p
// pass is only a filter that keeps dependent rows out of the expensive
// rational elimination.
std::vector<SparseVec> kernel_basis(const std::vector<SparseVec>& rows, Index ncols);

// RREF basis of rowspace(a) .. intersected with rowspace(b), both living
// in coordinates 0..ncols-1 (Zassenhaus block elimination).
std::vector<SparseVec> intersect_rowspaces(const std::vector<SparseVec>& a,
                                           const std::vector<SparseVec>& b, Index ncols);

}  // namespace qpi
