#include "qpi/incidence.hpp"

#include <algorithm>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

void check_vertex_range(int n, const std::set<std::pair<int, int>>& pairs) {
  for (auto [i, j] : pairs)
    if (i < 1 || i > n || j < 1 || j > n)
      throw UsageError("relation pair (" + std::to_string(i) + "," + std::to_string(j) +
                       ") outside 1.." + std::to_string(n));
}

}  // namespace

TransitiveRelation::TransitiveRelation(int n, std::set<std::pair<int, int>> pairs)
    : n_(n), pairs_(std::move(pairs)) {
  if (n_ < 1) throw UsageError("relation needs at least one vertex");
  check_vertex_range(n_, pairs_);
  for (auto [i, j] : pairs_)
    for (auto [k, l] : pairs_)
      if (j == k && !contains(i, l))
        throw UsageError("relation is not transitive: (" + std::to_string(i) + "," +
                         std::to_string(j) + ") and (" + std::to_string(k) + "," +
                         std::to_string(l) + ") without (" + std::to_string(i) + "," +
                         std::to_string(l) + ")");
}

TransitiveRelation TransitiveRelation::closure(int n,
                                               const std::set<std::pair<int, int>>& pairs) {
  if (n < 1) throw UsageError("relation needs at least one vertex");
  check_vertex_range(n, pairs);
  // Warshall on the boolean pair matrix; no reflexive pairs are added.
  std::vector<std::vector<bool>> r(static_cast<std::size_t>(n),
                                   std::vector<bool>(static_cast<std::size_t>(n), false));
  for (auto [i, j] : pairs) r[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])
        for (int j = 0; j < n; ++j)
          if (r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) out.emplace(i + 1, j + 1);
  TransitiveRelation rel(n, {});
  rel.pairs_ = std::move(out);
  return rel;
}

TransitiveRelation TransitiveRelation::full(int n) {
  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) pairs.emplace(i, j);
  return TransitiveRelation(n, std::move(pairs));
}

bool TransitiveRelation::subset_of(const TransitiveRelation& other) const {
  if (n_ != other.n_) return false;
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

IncidenceElement::IncidenceElement(int n) : n_(n) {
  if (n < 1) throw UsageError("incidence element needs n >= 1");
}

IncidenceElement IncidenceElement::unit(int n, int i, int j) {
  IncidenceElement e(n);
  if (i < 1 || i > n || j < 1 || j > n) throw UsageError("matrix unit index out of range");
  e.add_term(i, j, 1);
  return e;
}

Rational IncidenceElement::entry(int i, int j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? Rational(0) : it->second;
}

void IncidenceElement::add_term(int i, int j, const Rational& c) {
  if (c == 0) return;
  if (i < 1 || i > n_ || j < 1 || j > n_) throw UsageError("matrix entry index out of range");
  auto [it, inserted] = entries_.emplace(std::make_pair(i, j), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) entries_.erase(it);
  }
}

void IncidenceElement::add_scaled(const Rational& c, const IncidenceElement& other) {
  if (n_ != other.n_) throw UsageError("adding incidence elements of different sizes");
  if (c == 0) return;
  for (const auto& [ij, v] : other.entries_) add_term(ij.first, ij.second, c * v);
}

IncidenceElement IncidenceElement::scaled(const Rational& c) const {
  IncidenceElement out(n_);
  out.add_scaled(c, *this);
  return out;
}

bool IncidenceElement::supported_on(const TransitiveRelation& rel) const {
  if (rel.vertex_count() != n_) return false;
  for (const auto& [ij, v] : entries_)
    if (!rel.contains(ij.first, ij.second)) return false;
  return true;
}

TransitiveRelation relation_from_pi(const Quiver& q, const PathSet& pi) {
  std::set<std::pair<int, int>> pairs;
  for (const Path& p : pi.paths()) pairs.emplace(p.source(), p.target());
  return TransitiveRelation::closure(q.vertex_count(), pairs);
}

IncidenceElement phi(const Quiver& q, const PathAlgebraElement& x) {
  IncidenceElement out(q.vertex_count());
  for (const auto& [p, c] : x.terms()) {
    if (!path_valid_in(q, p)) throw UsageError("phi: element not supported on this quiver");
    out.add_term(p.source(), p.target(), c);
  }
  return out;
}

IncidenceElement incidence_multiply(const IncidenceElement& x, const IncidenceElement& y) {
  if (x.size() != y.size()) throw UsageError("multiplying incidence elements of different sizes");
  IncidenceElement out(x.size());
  for (const auto& [ij, a] : x.entries())
    for (const auto& [kl, b] : y.entries())
      if (ij.second == kl.first) out.add_term(ij.first, kl.second, a * b);
  return out;
}

IncidenceElement incidence_multiply(const IncidenceElement& x, const IncidenceElement& y,
                                    const TransitiveRelation& rel) {
  if (!x.supported_on(rel) || !y.supported_on(rel))
    throw UsageError("incidence_multiply: operand support escapes the pattern");
  IncidenceElement out = incidence_multiply(x, y);
  if (!out.supported_on(rel))
    throw InternalError("incidence_multiply: product escaped a supposedly transitive pattern");
  return out;
}

std::vector<Chain> maximal_chains(const TransitiveRelation& rel) {
  const int n = rel.vertex_count();
  for (auto [i, j] : rel.pairs())
    if (i != j && rel.contains(j, i))
      throw UsageError("relation is not chain-decomposable: vertices " + std::to_string(i) +
                       " and " + std::to_string(j) + " are related both ways");

  // On distinct vertices the relation is a strict partial order; maximal
  // chains are exactly the cover-paths from minimal to maximal elements.
  auto less = [&](int a, int b) { return a != b && rel.contains(a, b); };
  auto covers = [&](int a, int b) {
    if (!less(a, b)) return false;
    for (int w = 1; w <= n; ++w)
      if (w != a && w != b && less(a, w) && less(w, b)) return false;
    return true;
  };

  std::vector<Chain> out;
  std::vector<int> current;
  auto emit = [&]() {
    Chain c;
    c.vertices = current;
    for (int v : current) c.self_related.push_back(rel.contains(v, v));
    out.push_back(std::move(c));
  };
  std::function<void(int)> extend = [&](int v) {
    current.push_back(v);
    bool extended = false;
    for (int w = 1; w <= n; ++w)
      if (covers(v, w)) {
        extended = true;
        extend(w);
      }
    if (!extended) emit();
    current.pop_back();
  };
  for (int v = 1; v <= n; ++v) {
    bool minimal = true;
    for (int u = 1; u <= n; ++u)
      if (less(u, v)) minimal = false;
    if (minimal) extend(v);
  }
  return out;
}

TransitiveRelation chain_pattern(const Chain& c) {
  const int k = static_cast<int>(c.vertices.size());
  if (k == 0) throw UsageError("empty chain has no pattern");
  if (c.self_related.size() != c.vertices.size())
    throw UsageError("chain self-related flags out of step with vertices");
  std::set<std::pair<int, int>> pairs;
  for (int a = 1; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) pairs.emplace(a, b);
    if (c.self_related[static_cast<std::size_t>(a - 1)]) pairs.emplace(a, a);
  }
  return TransitiveRelation(k, std::move(pairs));
}

std::string render_pattern(const TransitiveRelation& rel) {
  std::string out;
  const int n = rel.vertex_count();
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) out += rel.contains(i, j) ? '*' : '.';
    out += '\n';
  }
  return out;
}

}  // namespace qpi
