#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpi/errors.hpp"
#include "qpi/permutation.hpp"
#include "qpi/rational.hpp"

namespace qpi {

// A multilinear polynomial of degree m: an exact-rational coefficient
// per permutation, keyed by lexicographic rank. Terms are sorted by
// rank and zero coefficients are never stored.
class MultilinearPoly {
 public:
  explicit MultilinearPoly(int degree);
  static MultilinearPoly from_terms(int degree,
                                    std::vector<std::pair<std::uint64_t, Rational>> terms);

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<std::pair<std::uint64_t, Rational>>& terms() const { return terms_; }
  Rational coefficient(std::uint64_t rank) const;

  void add_term(std::uint64_t rank, const Rational& c);
  void add_scaled(const Rational& c, const MultilinearPoly& other);
  MultilinearPoly scaled(const Rational& c) const;

  bool operator==(const MultilinearPoly&) const = default;

 private:
  int degree_;
  std::vector<std::pair<std::uint64_t, Rational>> terms_;
};

// The single monomial x_{w(1)} x_{w(2)} ... x_{w(m)}.
MultilinearPoly monomial(const Permutation& word, const Rational& c = 1);

// One factor of a product constructor: a variable x_i, a commutator
// [x_i, x_j], or a standard polynomial over an explicit variable list.
struct PolyFactor {
  enum class Kind { variable, commutator, standard };
  Kind kind = Kind::variable;
  std::vector<int> variables;

  static PolyFactor var(int i) { return {Kind::variable, {i}}; }
  static PolyFactor comm(int i, int j) { return {Kind::commutator, {i, j}}; }
  static PolyFactor std_on(std::vector<int> vars) { return {Kind::standard, std::move(vars)}; }
};

// Expanded product of factors with disjoint variables. The variables
// across all factors must be exactly 1..m, each once (UsageError).
MultilinearPoly product_of_factors(std::span<const PolyFactor> factors);

// [x_a, x_b] as a polynomial of degree 2 ({a, b} must be {1, 2}).
MultilinearPoly commutator(int a, int b);

// The standard polynomial s_k: the sign-alternating sum over S_k.
MultilinearPoly standard_poly(int k);

// f with every variable x_i renamed to x_{tau(i)}.
MultilinearPoly permute_variables(const MultilinearPoly& f, const Permutation& tau);

// Evaluates f at m algebra elements under the given product. The carrier
// needs: default construction = zero, add_scaled(c, elem).
template <class Elem, class Mul>
Elem evaluate(const MultilinearPoly& f, std::span<const Elem> xs, Mul&& mul) {
  if (static_cast<int>(xs.size()) != f.degree())
    throw UsageError("evaluate: argument count differs from polynomial degree");
  Elem acc{};
  for (const auto& [rank, coeff] : f.terms()) {
    const Permutation sigma = Permutation::from_rank(f.degree(), rank);
    Elem prod = xs[static_cast<std::size_t>(sigma(1)) - 1];
    for (int k = 2; k <= f.degree(); ++k)
      prod = mul(prod, xs[static_cast<std::size_t>(sigma(k)) - 1]);
    acc.add_scaled(coeff, prod);
  }
  return acc;
}

// Text form: signed terms in rank order, e.g. "+1 x1 x2 x3 -1 x2 x1 x3";
// coefficients are exact rationals ("p/q").
std::string format_poly(const MultilinearPoly& f);

// Accepts the term-list syntax above or the constructor syntax:
// products of comm(i,j) / x(i) factors joined by '*', or std(k).
MultilinearPoly parse_poly(const std::string& text);

}  // namespace qpi
