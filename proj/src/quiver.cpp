#include "qpi/quiver.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "qpi/errors.hpp"

namespace qpi {

Quiver::Quiver(int vertex_count, std::vector<Arrow> arrows)
    : vertex_count_(vertex_count), arrows_(std::move(arrows)) {
  if (vertex_count_ <= 0)
    throw UsageError("a quiver needs at least one vertex");
  for (std::size_t id = 0; id < arrows_.size(); ++id) {
    Arrow& a = arrows_[id];
    if (a.source < 1 || a.source > vertex_count_ || a.target < 1 || a.target > vertex_count_)
      throw UsageError("arrow " + std::to_string(id) + " has endpoints outside 1.." +
                       std::to_string(vertex_count_));
    if (a.name.empty()) a.name = "a" + std::to_string(id);
    auto [it, inserted] = by_name_.emplace(a.name, static_cast<int>(id));
    if (!inserted)
      throw UsageError("duplicate arrow name '" + a.name + "' (arrows " +
                       std::to_string(it->second) + " and " + std::to_string(id) + ")");
  }
}

const Arrow& Quiver::arrow(int id) const {
  if (id < 0 || id >= arrow_count())
    throw UsageError("arrow id " + std::to_string(id) + " out of range");
  return arrows_[static_cast<std::size_t>(id)];
}

std::optional<int> Quiver::arrow_id(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Path Path::trivial(int vertex) {
  if (vertex < 1) throw UsageError("trivial path at non-positive vertex");
  return Path(vertex, vertex, {});
}

Path Path::of_arrows(const Quiver& q, std::vector<int> arrow_ids) {
  if (arrow_ids.empty()) throw UsageError("empty arrow sequence; use Path::trivial");
  for (std::size_t k = 0; k < arrow_ids.size(); ++k) {
    const Arrow& a = q.arrow(arrow_ids[k]);
    if (k > 0 && q.arrow(arrow_ids[k - 1]).target != a.source)
      throw UsageError("non-composable at step " + std::to_string(k + 1));
  }
  const int s = q.arrow(arrow_ids.front()).source;
  const int t = q.arrow(arrow_ids.back()).target;
  return Path(s, t, std::move(arrow_ids));
}

std::strong_ordering Path::operator<=>(const Path& other) const {
  if (auto c = length() <=> other.length(); c != 0) return c;
  if (is_trivial()) return source_ <=> other.source_;
  return arrow_ids_ <=> other.arrow_ids_;
}

bool path_valid_in(const Quiver& q, const Path& p) {
  if (p.is_trivial())
    return p.source() >= 1 && p.source() <= q.vertex_count() && p.source() == p.target();
  const auto& ids = p.arrow_ids();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] < 0 || ids[k] >= q.arrow_count()) return false;
    if (k > 0 && q.arrow(ids[k - 1]).target != q.arrow(ids[k]).source) return false;
  }
  return p.source() == q.arrow(ids.front()).source && p.target() == q.arrow(ids.back()).target;
}

std::string format_path(const Quiver& q, const Path& p) {
  if (p.is_trivial()) return "e" + std::to_string(p.source());
  std::string out;
  for (std::size_t k = 0; k < p.arrow_ids().size(); ++k) {
    if (k > 0) out += ' ';
    out += q.arrow(p.arrow_ids()[k]).name;
  }
  return out;
}

PathSet::PathSet(const Quiver& q, std::vector<Path> paths) : paths_(std::move(paths)) {
  std::set<Path> seen;
  for (const Path& p : paths_) {
    if (!path_valid_in(q, p))
      throw UsageError("path set contains a path that is not valid in the quiver");
    if (!seen.insert(p).second)
      throw UsageError("path set contains duplicate path '" + format_path(q, p) + "'");
  }
}

PathAlgebraElement PathAlgebraElement::of_path(const Path& p, const Rational& c) {
  PathAlgebraElement e;
  e.add_term(p, c);
  return e;
}

PathAlgebraElement PathAlgebraElement::unit(const Quiver& q) {
  PathAlgebraElement e;
  for (int i = 1; i <= q.vertex_count(); ++i) e.add_term(Path::trivial(i), 1);
  return e;
}

Rational PathAlgebraElement::coefficient(const Path& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PathAlgebraElement::add_term(const Path& p, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void PathAlgebraElement::add_scaled(const Rational& c, const PathAlgebraElement& other) {
  if (c == 0) return;
  for (const auto& [p, coeff] : other.terms_) add_term(p, c * coeff);
}

PathAlgebraElement PathAlgebraElement::scaled(const Rational& c) const {
  PathAlgebraElement out;
  out.add_scaled(c, *this);
  return out;
}

std::optional<Path> compose_paths(const Quiver& q, const Path& p, const Path& r) {
  if (!path_valid_in(q, p) || !path_valid_in(q, r))
    throw UsageError("compose_paths: path does not belong to this quiver");
  if (p.target() != r.source()) return std::nullopt;
  if (p.is_trivial()) return r;
  if (r.is_trivial()) return p;
  std::vector<int> ids = p.arrow_ids();
  ids.insert(ids.end(), r.arrow_ids().begin(), r.arrow_ids().end());
  return Path::of_arrows(q, std::move(ids));
}

PathAlgebraElement multiply_elements(const Quiver& q, const PathAlgebraElement& x,
                                     const PathAlgebraElement& y) {
  PathAlgebraElement out;
  for (const auto& [p, a] : x.terms())
    for (const auto& [r, b] : y.terms())
      if (auto pr = compose_paths(q, p, r)) out.add_term(*pr, a * b);
  return out;
}

std::vector<Path> closure_paths(const Quiver& q, const PathSet& pi, int max_len) {
  if (max_len < 0) throw UsageError("closure_paths: negative length bound");
  // Every nonzero product of pi-members has composable prefixes, so a
  // breadth-first closure under right-composition by pi reaches all of
  // them without exceeding the final length.
  std::set<Path> found;
  std::deque<Path> frontier;
  for (const Path& p : pi.paths()) {
    if (p.length() <= max_len && found.insert(p).second) frontier.push_back(p);
  }
  while (!frontier.empty()) {
    Path head = frontier.front();
    frontier.pop_front();
    for (const Path& p : pi.paths()) {
      if (head.length() + p.length() > max_len) continue;
      auto prod = compose_paths(q, head, p);
      if (prod && found.insert(*prod).second) frontier.push_back(*prod);
    }
  }
  return {found.begin(), found.end()};
}

std::vector<Path> paths_between(const Quiver& q, const PathSet& pi, int from, int to,
                                int max_len) {
  if (from < 1 || from > q.vertex_count() || to < 1 || to > q.vertex_count())
    throw UsageError("paths_between: vertex out of range");
  std::vector<Path> out;
  for (const Path& p : closure_paths(q, pi, max_len))
    if (p.source() == from && p.target() == to) out.push_back(p);
  return out;
}

namespace {

// Tarjan over vertices 0..n-1 with adjacency by arrow list.
struct SccState {
  std::vector<std::vector<int>> adj;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  void dfs(int v) {
    index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = next_index++;
    stack.push_back(v);
    on_stack[static_cast<std::size_t>(v)] = true;
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (index[static_cast<std::size_t>(w)] < 0) {
        dfs(w);
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
      } else if (on_stack[static_cast<std::size_t>(w)]) {
        low[static_cast<std::size_t>(v)] =
            std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
    }
    if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp[static_cast<std::size_t>(w)] = next_comp;
        if (w == v) break;
      }
      ++next_comp;
    }
  }
};

}  // namespace

PiQuiverCheck is_pi_quiver(const Quiver& q) {
  const int n = q.vertex_count();
  SccState s;
  s.adj.assign(static_cast<std::size_t>(n), {});
  s.index.assign(static_cast<std::size_t>(n), -1);
  s.low.assign(static_cast<std::size_t>(n), -1);
  s.comp.assign(static_cast<std::size_t>(n), -1);
  s.on_stack.assign(static_cast<std::size_t>(n), false);
  for (const Arrow& a : q.arrows())
    s.adj[static_cast<std::size_t>(a.source - 1)].push_back(a.target - 1);
  for (int v = 0; v < n; ++v)
    if (s.index[static_cast<std::size_t>(v)] < 0) s.dfs(v);

  // Within one strongly connected component, any vertex with two in- or
  // two out-arrows lies on two distinct oriented cycles. Conversely when
  // every vertex has in-degree and out-degree one inside its component
  // the component is a single simple cycle.
  std::vector<int> indeg(static_cast<std::size_t>(n), 0), outdeg(static_cast<std::size_t>(n), 0);
  for (const Arrow& a : q.arrows()) {
    if (s.comp[static_cast<std::size_t>(a.source - 1)] ==
        s.comp[static_cast<std::size_t>(a.target - 1)]) {
      ++outdeg[static_cast<std::size_t>(a.source - 1)];
      ++indeg[static_cast<std::size_t>(a.target - 1)];
    }
  }
  for (int v = 0; v < n; ++v) {
    if (outdeg[static_cast<std::size_t>(v)] > 1 || indeg[static_cast<std::size_t>(v)] > 1)
      return {false, v + 1};
  }
  return {true, std::nullopt};
}

}  // namespace qpi
