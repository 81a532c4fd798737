#include "qpi/multilinear.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qpi/errors.hpp"

namespace qpi {

MultilinearPoly::MultilinearPoly(int degree) : degree_(degree) {
  if (degree < 1 || degree > kMaxPermutationDegree)
    throw UsageError("polynomial degree out of range: " + std::to_string(degree));
}

MultilinearPoly MultilinearPoly::from_terms(
    int degree, std::vector<std::pair<std::uint64_t, Rational>> terms) {
  MultilinearPoly f(degree);
  for (auto& [rank, c] : terms) f.add_term(rank, c);
  return f;
}

Rational MultilinearPoly::coefficient(std::uint64_t rank) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), rank,
                             [](const auto& t, std::uint64_t r) { return t.first < r; });
  if (it == terms_.end() || it->first != rank) return 0;
  return it->second;
}

void MultilinearPoly::add_term(std::uint64_t rank, const Rational& c) {
  if (c == 0) return;
  if (rank >= factorial(degree_))
    throw UsageError("term rank out of range for degree " + std::to_string(degree_));
  auto it = std::lower_bound(terms_.begin(), terms_.end(), rank,
                             [](const auto& t, std::uint64_t r) { return t.first < r; });
  if (it != terms_.end() && it->first == rank) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {rank, c});
  }
}

void MultilinearPoly::add_scaled(const Rational& c, const MultilinearPoly& other) {
  if (degree_ != other.degree_) throw UsageError("adding polynomials of different degrees");
  if (c == 0) return;
  // Merge two sorted term lists.
  std::vector<std::pair<std::uint64_t, Rational>> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      merged.emplace_back(b->first, c * b->second);
      ++b;
    } else {
      Rational v = a->second + c * b->second;
      if (v != 0) merged.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

MultilinearPoly MultilinearPoly::scaled(const Rational& c) const {
  MultilinearPoly out(degree_);
  out.add_scaled(c, *this);
  return out;
}

MultilinearPoly monomial(const Permutation& word, const Rational& c) {
  MultilinearPoly f(word.degree());
  f.add_term(word.rank(), c);
  return f;
}

MultilinearPoly product_of_factors(std::span<const PolyFactor> factors) {
  if (factors.empty()) throw UsageError("empty factor product");
  int m = 0;
  for (const PolyFactor& f : factors) {
    if (f.kind == PolyFactor::Kind::commutator && f.variables.size() != 2)
      throw UsageError("commutator factor needs exactly two variables");
    if (f.variables.empty()) throw UsageError("factor with no variables");
    m += static_cast<int>(f.variables.size());
  }
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (const PolyFactor& f : factors)
    for (int v : f.variables) {
      if (v < 1 || v > m || used[static_cast<std::size_t>(v) - 1])
        throw UsageError("factor variables must cover x1..x" + std::to_string(m) +
                         " exactly once (offending index " + std::to_string(v) + ")");
      used[static_cast<std::size_t>(v) - 1] = true;
    }

  // Expand each factor to (word, coefficient) pairs and take all
  // cross-products. Factor supports are disjoint, so concatenation of
  // words stays multilinear.
  std::vector<std::vector<std::pair<std::vector<int>, Rational>>> expanded;
  for (const PolyFactor& f : factors) {
    std::vector<std::pair<std::vector<int>, Rational>> terms;
    switch (f.kind) {
      case PolyFactor::Kind::variable:
        terms.push_back({f.variables, 1});
        break;
      case PolyFactor::Kind::commutator:
        terms.push_back({{f.variables[0], f.variables[1]}, 1});
        terms.push_back({{f.variables[1], f.variables[0]}, -1});
        break;
      case PolyFactor::Kind::standard: {
        const int k = static_cast<int>(f.variables.size());
        for_each_permutation(k, [&](const Permutation& sigma) {
          std::vector<int> word;
          word.reserve(static_cast<std::size_t>(k));
          for (int i = 1; i <= k; ++i)
            word.push_back(f.variables[static_cast<std::size_t>(sigma(i)) - 1]);
          terms.push_back({std::move(word), sigma.sign()});
        });
        break;
      }
    }
    expanded.push_back(std::move(terms));
  }

  MultilinearPoly out(m);
  std::vector<std::size_t> pick(expanded.size(), 0);
  while (true) {
    std::vector<int> word;
    word.reserve(static_cast<std::size_t>(m));
    Rational coeff = 1;
    for (std::size_t i = 0; i < expanded.size(); ++i) {
      const auto& [w, c] = expanded[i][pick[i]];
      word.insert(word.end(), w.begin(), w.end());
      coeff *= c;
    }
    out.add_term(Permutation(std::move(word)).rank(), coeff);
    std::size_t i = expanded.size();
    while (i > 0) {
      --i;
      if (++pick[i] < expanded[i].size()) break;
      pick[i] = 0;
      if (i == 0) return out;
    }
  }
}

MultilinearPoly commutator(int a, int b) {
  PolyFactor f = PolyFactor::comm(a, b);
  return product_of_factors(std::span<const PolyFactor>(&f, 1));
}

MultilinearPoly standard_poly(int k) {
  if (k < 1) throw UsageError("standard polynomial needs k >= 1");
  std::vector<int> vars(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) vars[static_cast<std::size_t>(i)] = i + 1;
  PolyFactor f = PolyFactor::std_on(std::move(vars));
  return product_of_factors(std::span<const PolyFactor>(&f, 1));
}

MultilinearPoly permute_variables(const MultilinearPoly& f, const Permutation& tau) {
  if (tau.degree() != f.degree())
    throw UsageError("permute_variables: degree mismatch");
  MultilinearPoly out(f.degree());
  for (const auto& [rank, c] : f.terms()) {
    const Permutation sigma = Permutation::from_rank(f.degree(), rank);
    out.add_term(compose(tau, sigma).rank(), c);
  }
  return out;
}

std::string format_poly(const MultilinearPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [rank, c] : f.terms()) {
    if (!out.empty()) out += ' ';
    out += (c < 0) ? "-" : "+";
    out += rational_to_string(c < 0 ? Rational(-c) : c);
    const Permutation sigma = Permutation::from_rank(f.degree(), rank);
    for (int i = 1; i <= f.degree(); ++i) out += " x" + std::to_string(sigma(i));
  }
  return out;
}

namespace {

// Tokenizer for the constructor syntax. Term-list input is detected by a
// leading sign token.
struct ConstructorParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw UsageError("polynomial syntax: expected '" + std::string(1, c) + "' at offset " +
                       std::to_string(pos));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw UsageError("polynomial syntax: expected a name at offset " +
                                       std::to_string(pos));
    return std::string(text.substr(start, pos - start));
  }
  int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos)
      throw UsageError("polynomial syntax: expected an integer at offset " + std::to_string(pos));
    return std::stoi(std::string(text.substr(start, pos - start)));
  }

  std::vector<int> int_list() {
    std::vector<int> out;
    expect('(');
    out.push_back(integer());
    while (eat(',')) out.push_back(integer());
    expect(')');
    return out;
  }

  MultilinearPoly parse() {
    std::vector<PolyFactor> factors;
    while (true) {
      const std::string name = ident();
      std::vector<int> args = int_list();
      if (name == "x") {
        if (args.size() != 1) throw UsageError("x(...) takes one variable index");
        factors.push_back(PolyFactor::var(args[0]));
      } else if (name == "comm") {
        if (args.size() != 2) throw UsageError("comm(...) takes two variable indices");
        factors.push_back(PolyFactor::comm(args[0], args[1]));
      } else if (name == "std") {
        if (args.size() == 1) {
          std::vector<int> vars(static_cast<std::size_t>(args[0]));
          for (int i = 0; i < args[0]; ++i) vars[static_cast<std::size_t>(i)] = i + 1;
          factors.push_back(PolyFactor::std_on(std::move(vars)));
        } else {
          factors.push_back(PolyFactor::std_on(std::move(args)));
        }
      } else {
        throw UsageError("unknown polynomial constructor '" + name + "'");
      }
      if (!eat('*')) break;
    }
    skip_ws();
    if (pos != text.size())
      throw UsageError("polynomial syntax: trailing input at offset " + std::to_string(pos));
    return product_of_factors(factors);
  }
};

MultilinearPoly parse_term_list(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);

  struct RawTerm {
    Rational coeff;
    std::vector<int> word;
  };
  std::vector<RawTerm> raw;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::string t = tokens[i];
    if (t[0] != '+' && t[0] != '-')
      throw UsageError("term must start with a signed coefficient, got '" + t + "'");
    const bool negative = t[0] == '-';
    std::string mag = t.substr(1);
    ++i;
    Rational coeff = mag.empty() ? Rational(1) : parse_rational(mag);
    if (negative) coeff = -coeff;
    std::vector<int> word;
    while (i < tokens.size() && tokens[i][0] == 'x') {
      const std::string idx = tokens[i].substr(1);
      if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          }))
        throw UsageError("bad variable token '" + tokens[i] + "'");
      word.push_back(std::stoi(idx));
      ++i;
    }
    if (word.empty()) throw UsageError("term with no variables");
    raw.push_back({std::move(coeff), std::move(word)});
  }
  if (raw.empty()) throw UsageError("empty polynomial text");
  const std::size_t m = raw.front().word.size();
  MultilinearPoly f(static_cast<int>(m));
  for (RawTerm& t : raw) {
    if (t.word.size() != m)
      throw UsageError("terms of mixed degree in one polynomial");
    f.add_term(Permutation(std::move(t.word)).rank(), t.coeff);
  }
  return f;
}

}  // namespace

MultilinearPoly parse_poly(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw UsageError("empty polynomial text");
  if (text[first] == '+' || text[first] == '-') return parse_term_list(text);
  ConstructorParser p{text};
  return p.parse();
}

}  // namespace qpi
