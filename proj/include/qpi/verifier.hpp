#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpi/incidence.hpp"
#include "qpi/multilinear.hpp"
#include "qpi/quiver.hpp"
#include "qpi/subspace.hpp"

namespace qpi {

// A choice of m closure paths, in tuple order.
struct PathTuple {
  std::vector<Path> paths;

  bool operator==(const PathTuple&) const = default;
};

// One endpoint sector of a tuple: the permutations whose ordered product
// is a nonzero path from source to target, the distinct products seen
// (exactly one for PI quivers), and the sum of the polynomial's
// coefficients over the sector.
struct Sector {
  int source = 0;
  int target = 0;
  std::vector<std::uint64_t> permutation_ranks;
  std::vector<Path> products;  // distinct, in first-seen order
  Rational coefficient_sum;
};

struct SectorReport {
  int degree = 0;
  std::vector<Sector> sectors;  // sorted by (source, target)
  bool all_sums_zero = true;
  bool products_unique = true;
};

// Groups every permutation with a nonzero ordered product by the
// product's endpoints; f only enters through the per-sector coefficient
// sums. Non-composable tuples yield an empty report.
SectorReport sector_decompose(const Quiver& q, const MultilinearPoly& f, const PathTuple& beta);

struct UniqueProductViolation {
  int source = 0;
  int target = 0;
  std::uint64_t sigma_rank = 0;
  std::uint64_t sigma_prime_rank = 0;
  Path product_a = Path::trivial(1);
  Path product_b = Path::trivial(1);
};

struct UniqueProductCheck {
  bool pass = true;
  std::optional<UniqueProductViolation> violation;
};

// For PI quivers every sector of every tuple holds a single product
// path. A violation would falsify that and must abort any theorem
// report built on it. Calling this on a non-PI quiver is a usage error
// (two loops at one vertex already break the property).
UniqueProductCheck verify_unique_products(const Quiver& q, const PathTuple& beta);

struct UnitTupleWitness {
  std::vector<std::pair<int, int>> units;
  IncidenceElement value;

  UnitTupleWitness(std::vector<std::pair<int, int>> u, IncidenceElement v)
      : units(std::move(u)), value(std::move(v)) {}
};

enum class PathCheckVerdict {
  pass,
  // f failed its precondition: it is not an identity of the pattern.
  not_pattern_identity,
  // f killed the pattern but not some path tuple: a counterexample to
  // the theorem (build-stopping if it ever happens).
  counterexample,
};

struct PathCheckResult {
  PathCheckVerdict verdict = PathCheckVerdict::pass;
  bool pi_quiver = true;
  std::optional<int> pi_witness;
  std::uint64_t total_tuples = 0;
  std::uint64_t checked_tuples = 0;
  bool sampled = false;
  int max_len = 0;
  std::uint64_t seed = 0;
  std::optional<UnitTupleWitness> unit_witness;
  std::optional<PathTuple> counterexample;
  std::optional<PathAlgebraElement> counterexample_value;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  // Above this many tuples the check switches to seeded uniform sampling
  // of exactly this many tuples and the result is marked sampled.
  std::uint64_t tuple_budget = 1'000'000;
  std::uint64_t sector_spot_checks = 200;
  SubspaceBudget subspace;
};

// Checks f = 0 on every tuple of pi-closure paths of length <= max_len
// (or on a seeded sample when the tuple count exceeds the budget).
// Precondition checked first: f must kill all unit tuples of the
// pattern, i.e. lie in identity_space(relation_from_pi(q, pi), deg f);
// the witness tuple is reported otherwise. A non-PI quiver is reported
// in the result and the check continues (the containment direction being
// tested is exactly what fails to be a theorem there).
PathCheckResult verify_identity_on_paths(const MultilinearPoly& f, const Quiver& q,
                                         const PathSet& pi, int max_len,
                                         const VerifyOptions& options = {});

// Exact f(beta) in the path algebra.
PathAlgebraElement evaluate_on_path_tuple(const Quiver& q, const MultilinearPoly& f,
                                          const PathTuple& beta);

struct DegreeReport {
  int m = 0;
  int dimension = 0;
  std::vector<std::string> basis;
  std::uint64_t total_tuples = 0;
  std::uint64_t checked_tuples = 0;
  bool sampled = false;
  std::uint64_t sector_checks = 0;
  std::uint64_t unique_product_checks = 0;
  bool pass = true;
  std::optional<std::string> failure;
};

struct TheoremReport {
  int schema = 1;
  std::string quiver_hash;
  std::vector<std::string> pi;
  bool pi_quiver = true;
  std::optional<int> pi_witness;
  bool pattern_empty = false;  // A_pi = 0: every f is an identity
  std::string pattern;
  int m_max = 0;
  int max_len = 0;
  std::uint64_t seed = 0;
  std::vector<DegreeReport> degrees;
  bool pass = true;

  std::string verdict() const { return pass ? "pass" : "fail"; }
};

// For each degree m <= m_max: computes the identity space of the
// pattern, verifies every basis identity on all (or a seeded sample of)
// closure-path tuples, spot-checks that every sector sum vanishes and
// that sectors hold unique products. Deterministic: identical inputs
// give byte-identical reports.
TheoremReport theorem_report(const Quiver& q, const PathSet& pi, int m_max, int max_len,
                             const VerifyOptions& options = {});

// FNV-1a over a canonical serialization of the quiver, in hex.
std::string quiver_hash(const Quiver& q);

std::string report_to_json(const TheoremReport& report);  // schema 1, 2-space indent
std::string report_summary(const TheoremReport& report);  // human-readable table

}  // namespace qpi
