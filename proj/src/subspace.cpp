#include "qpi/subspace.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_set>

#include "qpi/errors.hpp"
#include "qpi/linalg.hpp"
#include "qpi/parallel.hpp"

namespace qpi {

namespace {

SparseVec to_vec(const MultilinearPoly& f) {
  SparseVec v;
  v.terms.assign(f.terms().begin(), f.terms().end());
  return v;
}

MultilinearPoly to_poly(int degree, const SparseVec& v) {
  return MultilinearPoly::from_terms(degree, v.terms);
}

struct RowHash {
  std::size_t operator()(const std::vector<std::uint32_t>& row) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t x : row) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

using RowSet = std::unordered_set<std::vector<std::uint32_t>, RowHash>;

// Depth-first enumeration of the composable orders of one unit tuple.
// Slot by slot it picks an unused tuple element whose row matches the
// previous element's column, building the permutation word in
// lexicographic order; full words are binned by the product's endpoints.
class SectorScan {
 public:
  SectorScan(int m, int n) : m_(m), n_(n), sectors_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}

  // units: the (row, col) of each tuple element.
  template <class Emit>
  void run(const std::vector<std::pair<int, int>>& units, Emit&& emit) {
    units_ = &units;
    used_ = 0;
    for (std::size_t d : dirty_) sectors_[d].clear();
    dirty_.clear();
    descend(0, 0, 0);
    for (std::size_t d : dirty_) emit(sectors_[d]);
  }

 private:
  void descend(int depth, int open_row, int prev_col) {
    if (depth == m_) {
      const std::size_t key = static_cast<std::size_t>(open_row - 1) * static_cast<std::size_t>(n_) +
                              static_cast<std::size_t>(prev_col - 1);
      if (sectors_[key].empty()) dirty_.push_back(key);
      sectors_[key].push_back(rank_of_word());
      return;
    }
    for (int e = 0; e < m_; ++e) {
      if (used_ & (1u << e)) continue;
      const auto [r, c] = (*units_)[static_cast<std::size_t>(e)];
      if (depth > 0 && r != prev_col) continue;
      used_ |= (1u << e);
      word_[static_cast<std::size_t>(depth)] = e + 1;
      descend(depth + 1, depth == 0 ? r : open_row, c);
      used_ &= ~(1u << e);
    }
  }

  std::uint32_t rank_of_word() const {
    std::uint32_t rank = 0;
    std::uint32_t block = 1;
    // Factoradic from the right.
    for (int i = m_ - 1; i >= 0; --i) {
      std::uint32_t smaller = 0;
      for (int j = i + 1; j < m_; ++j)
        if (word_[static_cast<std::size_t>(j)] < word_[static_cast<std::size_t>(i)]) ++smaller;
      rank += smaller * block;
      block *= static_cast<std::uint32_t>(m_ - i);
    }
    return rank;
  }

  int m_;
  int n_;
  const std::vector<std::pair<int, int>>* units_ = nullptr;
  unsigned used_ = 0;
  std::array<int, 16> word_{};
  std::vector<std::vector<std::uint32_t>> sectors_;
  std::vector<std::size_t> dirty_;
};

}  // namespace

IdentitySubspace IdentitySubspace::from_spanning(int degree,
                                                 const std::vector<MultilinearPoly>& polys) {
  std::vector<SparseVec> rows;
  rows.reserve(polys.size());
  for (const MultilinearPoly& f : polys) {
    if (f.degree() != degree)
      throw UsageError("spanning polynomial of degree " + std::to_string(f.degree()) +
                       " in a degree-" + std::to_string(degree) + " subspace");
    rows.push_back(to_vec(f));
  }
  std::vector<MultilinearPoly> basis;
  for (const SparseVec& v : canonical_basis(rows)) basis.push_back(to_poly(degree, v));
  return IdentitySubspace(degree, std::move(basis));
}

IdentitySubspace IdentitySubspace::full(int degree) {
  std::vector<MultilinearPoly> basis;
  const std::uint64_t total = factorial(degree);
  basis.reserve(total);
  for (std::uint64_t r = 0; r < total; ++r)
    basis.push_back(MultilinearPoly::from_terms(degree, {{r, 1}}));
  return IdentitySubspace(degree, std::move(basis));
}

IdentitySubspace IdentitySubspace::zero(int degree) { return IdentitySubspace(degree, {}); }

MultilinearPoly IdentitySubspace::reduce(const MultilinearPoly& f) const {
  if (f.degree() != degree_) throw UsageError("reduce: degree mismatch");
  std::vector<SparseVec> rows;
  rows.reserve(basis_.size());
  for (const MultilinearPoly& b : basis_) rows.push_back(to_vec(b));
  EchelonBasis eb = EchelonBasis::from_rref_rows(rows);
  return to_poly(degree_, eb.reduce(to_vec(f)));
}

bool IdentitySubspace::contains(const MultilinearPoly& f) const {
  return reduce(f).is_zero();
}

IdentitySubspace identity_space(const TransitiveRelation& rel, int m,
                                const SubspaceBudget& budget) {
  if (m < 1) throw UsageError("identity_space: degree must be at least 1");
  const std::vector<std::pair<int, int>> pairs(rel.pairs().begin(), rel.pairs().end());
  const std::uint64_t base = pairs.size();

  std::uint64_t tuple_count = 1;
  bool overflow = false;
  for (int i = 0; i < m; ++i) {
    if (base != 0 && tuple_count > std::uint64_t(-1) / std::max<std::uint64_t>(base, 1)) {
      overflow = true;
      break;
    }
    tuple_count *= base;
  }
  if (m > budget.max_identity_degree || overflow || tuple_count > budget.max_unit_tuples) {
    throw ResourceError(
        "identity_space budget exceeded: degree " + std::to_string(m) + " means " +
        std::to_string(factorial(std::min(m, kMaxPermutationDegree))) + " coordinates and " +
        (overflow ? std::string("more than 2^64") : std::to_string(tuple_count)) +
        " unit tuples (budget: degree <= " + std::to_string(budget.max_identity_degree) +
        ", tuples <= " + std::to_string(budget.max_unit_tuples) + ")");
  }

  const int n = rel.vertex_count();
  std::vector<RowSet> worker_rows(static_cast<std::size_t>(worker_count()));
  if (base > 0) {
    parallel_chunks(tuple_count, [&](int worker, std::uint64_t begin, std::uint64_t end) {
      SectorScan scan(m, n);
      std::vector<std::pair<int, int>> units(static_cast<std::size_t>(m));
      RowSet& local = worker_rows[static_cast<std::size_t>(worker)];
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        std::uint64_t rest = idx;
        for (int k = m - 1; k >= 0; --k) {
          units[static_cast<std::size_t>(k)] = pairs[static_cast<std::size_t>(rest % base)];
          rest /= base;
        }
        scan.run(units, [&](const std::vector<std::uint32_t>& sector) { local.insert(sector); });
      }
    });
  }

  RowSet merged;
  for (RowSet& w : worker_rows) {
    if (merged.empty()) {
      merged = std::move(w);
    } else {
      for (auto& row : w) merged.insert(row);
    }
  }

  // Sparsest rows first keeps elimination fill-in low and the pivot
  // choice deterministic.
  std::vector<std::vector<std::uint32_t>> sorted(merged.begin(), merged.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<SparseVec> rows;
  rows.reserve(sorted.size());
  for (const auto& r : sorted) {
    SparseVec v;
    v.terms.reserve(r.size());
    for (std::uint32_t rank : r) v.terms.emplace_back(rank, 1);
    rows.push_back(std::move(v));
  }

  std::vector<MultilinearPoly> basis;
  for (const SparseVec& v : kernel_basis(rows, factorial(m)))
    basis.push_back(to_poly(m, v));
  return IdentitySubspace::from_spanning(m, basis);
}

namespace {

// All ways to distribute `extra` among `slots` nonnegative parts.
void for_each_composition(int extra, int slots, std::vector<int>& comp,
                          const std::function<void(const std::vector<int>&)>& fn, int at = 0) {
  if (at == slots - 1) {
    comp[static_cast<std::size_t>(at)] = extra;
    fn(comp);
    return;
  }
  for (int take = 0; take <= extra; ++take) {
    comp[static_cast<std::size_t>(at)] = take;
    for_each_composition(extra - take, slots, comp, fn, at + 1);
  }
}

}  // namespace

IdentitySubspace tideal_component(std::span<const MultilinearPoly> generators, int m,
                                  const SubspaceBudget& budget) {
  if (m < 1) throw UsageError("tideal_component: degree must be at least 1");
  if (m > budget.max_tideal_degree)
    throw ResourceError("tideal_component budget exceeded: degree " + std::to_string(m) +
                        " means " + std::to_string(factorial(m)) +
                        " coordinates (budget: degree <= " +
                        std::to_string(budget.max_tideal_degree) + ")");
  for (const MultilinearPoly& g : generators)
    if (g.degree() > m)
      throw UsageError("generator degree " + std::to_string(g.degree()) +
                       " exceeds target degree " + std::to_string(m));

  std::vector<MultilinearPoly> span;
  std::unordered_set<std::string> seen;  // substitution outcomes, deduplicated

  for (const MultilinearPoly& g : generators) {
    if (g.is_zero()) continue;
    const int k = g.degree();
    const int extra = m - k;
    std::vector<int> comp(static_cast<std::size_t>(k) + 2);
    for_each_composition(extra, k + 2, comp, [&](const std::vector<int>& c) {
      const int r = c.front();
      const int q = c.back();
      // Block t of the word w is substituted for variable x_t of g.
      std::vector<int> block_begin(static_cast<std::size_t>(k) + 1);
      std::vector<int> block_size(static_cast<std::size_t>(k) + 1);
      int cursor = r;
      for (int t = 1; t <= k; ++t) {
        block_begin[static_cast<std::size_t>(t)] = cursor;
        block_size[static_cast<std::size_t>(t)] = 1 + c[static_cast<std::size_t>(t)];
        cursor += block_size[static_cast<std::size_t>(t)];
      }
      for_each_permutation(m, [&](const Permutation& w) {
        MultilinearPoly candidate(m);
        for (const auto& [grank, lambda] : g.terms()) {
          const Permutation gsigma = Permutation::from_rank(k, grank);
          std::vector<int> word;
          word.reserve(static_cast<std::size_t>(m));
          for (int i = 1; i <= r; ++i) word.push_back(w(i));
          for (int slot = 1; slot <= k; ++slot) {
            const int t = gsigma(slot);
            for (int i = 0; i < block_size[static_cast<std::size_t>(t)]; ++i)
              word.push_back(w(block_begin[static_cast<std::size_t>(t)] + i + 1));
          }
          for (int i = m - q + 1; i <= m; ++i) word.push_back(w(i));
          candidate.add_term(Permutation(std::move(word)).rank(), lambda);
        }
        if (!candidate.is_zero() && seen.insert(format_poly(candidate)).second)
          span.push_back(std::move(candidate));
      });
    });
  }
  return IdentitySubspace::from_spanning(m, span);
}

SubspaceComparison subspace_compare(const IdentitySubspace& u, const IdentitySubspace& v) {
  if (u.degree() != v.degree()) throw UsageError("subspace_compare: degree mismatch");
  SubspaceComparison out;
  bool u_in_v = true, v_in_u = true;
  for (const MultilinearPoly& f : u.basis()) {
    if (!v.contains(f)) {
      u_in_v = false;
      out.left_only = f;
      break;
    }
  }
  for (const MultilinearPoly& f : v.basis()) {
    if (!u.contains(f)) {
      v_in_u = false;
      out.right_only = f;
      break;
    }
  }
  if (u_in_v && v_in_u)
    out.order = SubspaceOrder::equal;
  else if (u_in_v)
    out.order = SubspaceOrder::left_inside_right;
  else if (v_in_u)
    out.order = SubspaceOrder::right_inside_left;
  else
    out.order = SubspaceOrder::incomparable;
  return out;
}

IdentitySubspace intersect(const IdentitySubspace& u, const IdentitySubspace& v) {
  if (u.degree() != v.degree()) throw UsageError("intersect: degree mismatch");
  std::vector<SparseVec> a, b;
  for (const MultilinearPoly& f : u.basis()) a.push_back(to_vec(f));
  for (const MultilinearPoly& f : v.basis()) b.push_back(to_vec(f));
  std::vector<MultilinearPoly> polys;
  for (const SparseVec& w : intersect_rowspaces(a, b, factorial(u.degree())))
    polys.push_back(to_poly(u.degree(), w));
  return IdentitySubspace::from_spanning(u.degree(), polys);
}

const char* to_string(SubspaceOrder order) {
  switch (order) {
    case SubspaceOrder::equal:
      return "equal";
    case SubspaceOrder::left_inside_right:
      return "left subspace strictly inside right";
    case SubspaceOrder::right_inside_left:
      return "right subspace strictly inside left";
    case SubspaceOrder::incomparable:
      return "incomparable";
  }
  return "?";
}

}  // namespace qpi
