#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpi/rational.hpp"

namespace qpi {

struct Arrow {
  int source = 0;
  int target = 0;
  std::string name;
};

// A finite quiver: vertices 1..n and a list of arrows. Arrow ids are
// dense (0..a-1), assigned by position. Parallel arrows and loops are
// allowed; an empty vertex set is not (the path algebra needs a unit).
class Quiver {
 public:
  Quiver(int vertex_count, std::vector<Arrow> arrows);

  int vertex_count() const { return vertex_count_; }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(int id) const;
  const std::vector<Arrow>& arrows() const { return arrows_; }
  std::optional<int> arrow_id(const std::string& name) const;

 private:
  int vertex_count_;
  std::vector<Arrow> arrows_;
  std::map<std::string, int> by_name_;
};

// A basis path of the path algebra: the trivial path at a vertex, or a
// nonempty composable arrow sequence with cached endpoints. Ordering is
// by length, then by start vertex for trivial paths, then by the arrow
// id sequence; this is the deterministic order used everywhere.
class Path {
 public:
  static Path trivial(int vertex);
  // Validates the sequence composes inside q; throws UsageError with the
  // failing step otherwise.
  static Path of_arrows(const Quiver& q, std::vector<int> arrow_ids);

  bool is_trivial() const { return arrow_ids_.empty(); }
  int source() const { return source_; }
  int target() const { return target_; }
  int length() const { return static_cast<int>(arrow_ids_.size()); }
  const std::vector<int>& arrow_ids() const { return arrow_ids_; }

  std::strong_ordering operator<=>(const Path& other) const;
  bool operator==(const Path& other) const = default;

 private:
  Path(int source, int target, std::vector<int> arrow_ids)
      : source_(source), target_(target), arrow_ids_(std::move(arrow_ids)) {}
  int source_;
  int target_;
  std::vector<int> arrow_ids_;
};

// True when p is structurally a path of q (vertices and arrows in range,
// consecutive arrows compose, cached endpoints consistent).
bool path_valid_in(const Quiver& q, const Path& p);

// "e3" for trivial paths, otherwise arrow names joined by spaces.
std::string format_path(const Quiver& q, const Path& p);

// A finite set of distinct paths of one quiver: the generating set pi.
class PathSet {
 public:
  PathSet(const Quiver& q, std::vector<Path> paths);  // rejects duplicates
  const std::vector<Path>& paths() const { return paths_; }
  bool empty() const { return paths_.empty(); }
  std::size_t size() const { return paths_.size(); }

 private:
  std::vector<Path> paths_;
};

// Sparse exact-rational combination of paths. Canonical: no stored zero
// coefficients, deterministic iteration order.
class PathAlgebraElement {
 public:
  PathAlgebraElement() = default;
  static PathAlgebraElement of_path(const Path& p, const Rational& c = 1);
  static PathAlgebraElement unit(const Quiver& q);  // sum of all trivial paths

  bool is_zero() const { return terms_.empty(); }
  const std::map<Path, Rational>& terms() const { return terms_; }
  Rational coefficient(const Path& p) const;

  void add_scaled(const Rational& c, const PathAlgebraElement& other);
  void add_term(const Path& p, const Rational& c);
  PathAlgebraElement scaled(const Rational& c) const;

  bool operator==(const PathAlgebraElement&) const = default;

 private:
  std::map<Path, Rational> terms_;
};

// The product pq, or nullopt (the distinguished zero) when t(p) != s(q).
// Trivial paths act as one-sided units at their vertex.
std::optional<Path> compose_paths(const Quiver& q, const Path& p, const Path& r);

// Bilinear extension of compose_paths; exact coefficients.
PathAlgebraElement multiply_elements(const Quiver& q, const PathAlgebraElement& x,
                                     const PathAlgebraElement& y);

// All paths of length <= max_len expressible as a product of one or more
// members of pi, deduplicated, in canonical path order. Breadth-first
// closure under composition with the length cutoff.
std::vector<Path> closure_paths(const Quiver& q, const PathSet& pi, int max_len);

// closure_paths filtered by endpoints.
std::vector<Path> paths_between(const Quiver& q, const PathSet& pi, int from, int to,
                                int max_len);

struct PiQuiverCheck {
  bool is_pi = false;
  // A vertex lying on two distinct oriented cycles, when not PI.
  std::optional<int> witness_vertex;
};

// A quiver is PI exactly when no vertex lies on two distinct oriented
// cycles; equivalently every strongly connected component is a single
// vertex without loops or a single simple directed cycle.
PiQuiverCheck is_pi_quiver(const Quiver& q);

}  // namespace qpi
