#include "qpi/linalg.hpp"

#include <algorithm>

#include "qpi/errors.hpp"

namespace qpi {

Rational SparseVec::at(Index i) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), i,
                             [](const auto& t, Index idx) { return t.first < idx; });
  if (it == terms.end() || it->first != i) return 0;
  return it->second;
}

void SparseVec::scale(const Rational& c) {
  if (c == 0) {
    terms.clear();
    return;
  }
  for (auto& [i, v] : terms) v *= c;
}

Rational dot(const SparseVec& a, const SparseVec& b) {
  Rational acc = 0;
  auto i = a.terms.begin();
  auto j = b.terms.begin();
  while (i != a.terms.end() && j != b.terms.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      acc += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return acc;
}

SparseVec EchelonBasis::reduce(SparseVec v) const {
  if (pivots_.empty() || v.is_zero()) return v;
  std::map<Index, Rational> work(v.terms.begin(), v.terms.end());
  auto it = work.begin();
  while (it != work.end()) {
    auto pivot = pivots_.find(it->first);
    if (pivot == pivots_.end()) {
      ++it;
      continue;
    }
    const Index col = it->first;
    const Rational c = it->second;  // pivot rows have leading coefficient 1
    for (const auto& [idx, val] : pivot->second.terms) {
      auto [w, inserted] = work.emplace(idx, 0);
      w->second -= c * val;
      if (w->second == 0) work.erase(w);
    }
    // The entry at col cancelled exactly; new fill-in is at indices > col.
    it = work.upper_bound(col);
  }
  SparseVec out;
  out.terms.assign(work.begin(), work.end());
  return out;
}

bool EchelonBasis::insert(SparseVec v) {
  SparseVec r = reduce(std::move(v));
  if (r.is_zero()) return false;
  const Rational lead = r.leading_coeff();
  r.scale(Rational(1) / lead);
  const Index col = r.leading_index();
  pivots_.emplace(col, std::move(r));
  return true;
}

void EchelonBasis::back_eliminate() {
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    const Index col = it->first;
    const SparseVec& pivot_row = it->second;
    for (auto& [col2, row2] : pivots_) {
      if (col2 >= col) break;
      const Rational c = row2.at(col);
      if (c == 0) continue;
      std::map<Index, Rational> work(row2.terms.begin(), row2.terms.end());
      for (const auto& [idx, val] : pivot_row.terms) {
        auto [w, inserted] = work.emplace(idx, 0);
        w->second -= c * val;
        if (w->second == 0) work.erase(w);
      }
      row2.terms.assign(work.begin(), work.end());
    }
  }
}

EchelonBasis EchelonBasis::from_rref_rows(const std::vector<SparseVec>& rows) {
  EchelonBasis eb;
  for (const SparseVec& r : rows) {
    if (r.is_zero() || r.leading_coeff() != 1)
      throw InternalError("from_rref_rows: rows are not a reduced basis");
    eb.pivots_.emplace(r.leading_index(), r);
  }
  return eb;
}

std::vector<SparseVec> canonical_basis(const std::vector<SparseVec>& rows) {
  EchelonBasis eb;
  for (const SparseVec& r : rows) eb.insert(r);
  eb.back_eliminate();
  std::vector<SparseVec> out;
  out.reserve(eb.rank());
  for (const auto& [col, row] : eb.rows()) out.push_back(row);
  return out;
}

namespace {

// Arithmetic mod the Mersenne prime 2^61 - 1 for the pivot prefilter.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t acc = 1;
  while (exp > 0) {
    if (exp & 1) acc = mul_mod(acc, base);
    base = mul_mod(base, base);
    exp >>= 1;
  }
  return acc;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::uint64_t mod_of_mpz(const mpz_class& z) {
  const std::uint64_t r = mpz_fdiv_ui(z.get_mpz_t(), kPrime);
  return r;
}

using ModRow = std::vector<std::pair<Index, std::uint64_t>>;

// Returns false when a denominator vanishes mod p (caller must then keep
// the row for the exact pass unconditionally).
bool row_mod_p(const SparseVec& v, ModRow& out) {
  out.clear();
  out.reserve(v.terms.size());
  for (const auto& [i, c] : v.terms) {
    const std::uint64_t den = mod_of_mpz(c.get_den());
    if (den == 0) return false;
    const std::uint64_t num = mod_of_mpz(c.get_num());
    if (num == 0) continue;  // a nonzero rational can reduce to 0 mod p
    out.emplace_back(i, mul_mod(num, inv_mod(den)));
  }
  return true;
}

class ModEchelon {
 public:
  // Reduces and inserts; true when the rank grew.
  bool insert(ModRow row) {
    while (!row.empty()) {
      auto pivot = pivots_.find(row.front().first);
      if (pivot == pivots_.end()) {
        const std::uint64_t inv = inv_mod(row.front().second);
        for (auto& [i, v] : row) v = mul_mod(v, inv);
        pivots_.emplace(row.front().first, std::move(row));
        return true;
      }
      row = subtract_scaled(row, row.front().second, pivot->second);
    }
    return false;
  }

 private:
  static ModRow subtract_scaled(const ModRow& a, std::uint64_t c, const ModRow& b) {
    ModRow out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
      if (j == b.end() || (i != a.end() && i->first < j->first)) {
        out.push_back(*i++);
      } else if (i == a.end() || j->first < i->first) {
        out.emplace_back(j->first, kPrime - mul_mod(c, j->second));
        ++j;
      } else {
        const std::uint64_t v = (i->second + kPrime - mul_mod(c, j->second)) % kPrime;
        if (v != 0) out.emplace_back(i->first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::map<Index, ModRow> pivots_;
};

std::vector<SparseVec> kernel_of_echelon(EchelonBasis& eb, Index ncols) {
  eb.back_eliminate();
  std::vector<SparseVec> kernel;
  const auto& rows = eb.rows();
  for (Index c = 0; c < ncols; ++c) {
    if (rows.count(c) > 0) continue;  // pivot column
    SparseVec v;
    for (const auto& [p, row] : rows) {
      if (p >= c) break;
      const Rational val = row.at(c);
      if (val != 0) v.terms.emplace_back(p, -val);
    }
    v.terms.emplace_back(c, 1);
    kernel.push_back(std::move(v));
  }
  return canonical_basis(kernel);
}

}  // namespace

std::vector<SparseVec> kernel_basis(const std::vector<SparseVec>& rows, Index ncols) {
  // Prefilter: a row whose mod-p reduction is dependent is almost surely
  // dependent over Q; it is skipped here and caught by the certificate
  // below in the rare case the filter was wrong.
  EchelonBasis exact;
  ModEchelon filter;
  ModRow scratch;
  for (const SparseVec& r : rows) {
    if (r.is_zero()) continue;
    if (!row_mod_p(r, scratch) || filter.insert(scratch)) exact.insert(r);
  }

  std::vector<SparseVec> kernel = kernel_of_echelon(exact, ncols);

  // Exact certificate: every kernel vector must annihilate every row.
  // Any violated row lies outside the eliminated rowspace; escalate it
  // and recompute. Termination: the rank strictly grows.
  bool clean = false;
  while (!clean) {
    clean = true;
    for (const SparseVec& r : rows) {
      bool violated = false;
      for (const SparseVec& k : kernel) {
        if (dot(r, k) != 0) {
          violated = true;
          break;
        }
      }
      if (violated) {
        if (!exact.insert(r))
          throw InternalError("kernel certificate violated by a dependent row");
        kernel = kernel_of_echelon(exact, ncols);
        clean = false;
      }
    }
  }
  return kernel;
}

std::vector<SparseVec> intersect_rowspaces(const std::vector<SparseVec>& a,
                                           const std::vector<SparseVec>& b, Index ncols) {
  // Zassenhaus: eliminate rows [v | v] for v in a and [w | 0] for w in b;
  // the fully reduced rows supported on the right block span the
  // intersection.
  EchelonBasis eb;
  for (const SparseVec& v : a) {
    SparseVec both = v;
    for (const auto& [i, c] : v.terms) both.terms.emplace_back(i + ncols, c);
    eb.insert(std::move(both));
  }
  for (const SparseVec& w : b) eb.insert(w);
  eb.back_eliminate();

  std::vector<SparseVec> out;
  for (const auto& [col, row] : eb.rows()) {
    if (col < ncols) continue;
    SparseVec v;
    v.terms.reserve(row.terms.size());
    for (const auto& [i, c] : row.terms) v.terms.emplace_back(i - ncols, c);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qpi
