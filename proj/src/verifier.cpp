#include "qpi/verifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <sstream>

#include "qpi/errors.hpp"
#include "qpi/parallel.hpp"

namespace qpi {

namespace {

std::optional<std::uint64_t> checked_pow(std::uint64_t base, int exp) {
  std::uint64_t acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && acc > std::uint64_t(-1) / base) return std::nullopt;
    acc *= base;
  }
  return acc;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform draw from [0, n) via rejection; pinned to mt19937_64 so that
// sampled runs are reproducible across platforms.
std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// A polynomial with its permutations decoded once, for tight loops.
struct DecodedPoly {
  const MultilinearPoly* poly = nullptr;
  std::vector<std::pair<std::vector<int>, Rational>> terms;  // (images, coeff)
};

DecodedPoly decode(const MultilinearPoly& f) {
  DecodedPoly d;
  d.poly = &f;
  d.terms.reserve(f.term_count());
  for (const auto& [rank, c] : f.terms())
    d.terms.emplace_back(Permutation::from_rank(f.degree(), rank).images(), c);
  return d;
}

// Product of tuple paths in word order, written as (start vertex, arrow
// ids); nullopt when the chain breaks.
std::optional<std::pair<int, std::vector<int>>> chain_product(
    const std::vector<const Path*>& tuple, const std::vector<int>& word) {
  const Path* first = tuple[static_cast<std::size_t>(word.front()) - 1];
  int cursor = first->target();
  for (std::size_t k = 1; k < word.size(); ++k) {
    const Path* next = tuple[static_cast<std::size_t>(word[k]) - 1];
    if (next->source() != cursor) return std::nullopt;
    cursor = next->target();
  }
  std::pair<int, std::vector<int>> key{first->source(), {}};
  for (int w : word) {
    const Path* p = tuple[static_cast<std::size_t>(w) - 1];
    key.second.insert(key.second.end(), p->arrow_ids().begin(), p->arrow_ids().end());
  }
  return key;
}

bool vanishes_on_tuple(const std::vector<const Path*>& tuple, const DecodedPoly& f) {
  std::map<std::pair<int, std::vector<int>>, Rational> acc;
  for (const auto& [word, coeff] : f.terms) {
    auto key = chain_product(tuple, word);
    if (!key) continue;
    auto [it, inserted] = acc.emplace(std::move(*key), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) acc.erase(it);
    }
  }
  return acc.empty();
}

// Evaluates f on a tuple of matrix units; returns the value by sector.
IncidenceElement unit_tuple_value(int n, const DecodedPoly& f,
                                  const std::vector<std::pair<int, int>>& units) {
  IncidenceElement out(n);
  for (const auto& [word, coeff] : f.terms) {
    const auto [r0, c0] = units[static_cast<std::size_t>(word.front()) - 1];
    int cursor = c0;
    bool alive = true;
    for (std::size_t k = 1; k < word.size() && alive; ++k) {
      const auto [r, c] = units[static_cast<std::size_t>(word[k]) - 1];
      if (r != cursor) alive = false;
      cursor = c;
    }
    if (alive) out.add_term(r0, cursor, coeff);
  }
  return out;
}

// First unit tuple of the pattern that f fails to kill, in
// lexicographic tuple order over the sorted pair list.
std::optional<UnitTupleWitness> pattern_identity_witness(const TransitiveRelation& rel,
                                                         const MultilinearPoly& f,
                                                         std::uint64_t max_unit_tuples) {
  const std::vector<std::pair<int, int>> pairs(rel.pairs().begin(), rel.pairs().end());
  const int m = f.degree();
  const auto total = checked_pow(pairs.size(), m);
  if (!total || *total > max_unit_tuples)
    throw ResourceError("pattern membership check needs " +
                        (total ? std::to_string(*total) : std::string("more than 2^64")) +
                        " unit tuples, over the budget of " + std::to_string(max_unit_tuples));
  if (pairs.empty()) return std::nullopt;  // the zero algebra: everything vanishes
  const DecodedPoly d = decode(f);
  std::vector<std::pair<int, int>> units(static_cast<std::size_t>(m));
  for (std::uint64_t idx = 0; idx < *total; ++idx) {
    std::uint64_t rest = idx;
    for (int k = m - 1; k >= 0; --k) {
      units[static_cast<std::size_t>(k)] = pairs[static_cast<std::size_t>(rest % pairs.size())];
      rest /= pairs.size();
    }
    IncidenceElement value = unit_tuple_value(rel.vertex_count(), d, units);
    if (!value.is_zero()) return UnitTupleWitness(units, std::move(value));
  }
  return std::nullopt;
}

struct SweepPlan {
  std::uint64_t total = 0;    // all tuples under the bound
  std::uint64_t checked = 0;  // enumerated or sampled count
  bool sampled = false;
  std::vector<std::uint64_t> sample;  // tuple indices when sampled
};

SweepPlan plan_sweep(std::uint64_t closure_size, int m, std::uint64_t budget,
                     std::uint64_t seed) {
  SweepPlan plan;
  const auto total = checked_pow(closure_size, m);
  if (total && *total <= budget) {
    plan.total = *total;
    plan.checked = *total;
    return plan;
  }
  plan.total = total ? *total : std::uint64_t(-1);
  plan.sampled = true;
  plan.checked = budget;
  plan.sample.reserve(budget);
  std::mt19937_64 gen(splitmix64(seed));
  for (std::uint64_t i = 0; i < budget; ++i)
    plan.sample.push_back(bounded_draw(gen, plan.total));
  return plan;
}

void decode_tuple(const std::vector<Path>& closure, int m, std::uint64_t idx,
                  std::vector<const Path*>& tuple) {
  std::uint64_t rest = idx;
  for (int k = m - 1; k >= 0; --k) {
    tuple[static_cast<std::size_t>(k)] = &closure[static_cast<std::size_t>(rest % closure.size())];
    rest /= closure.size();
  }
}

struct SweepFailure {
  std::uint64_t position = std::uint64_t(-1);
  int poly = -1;
};

// Evaluates every polynomial on every planned tuple, in parallel; the
// failure with the smallest enumeration position wins, so the outcome is
// independent of the thread layout.
SweepFailure sweep_tuples(const std::vector<Path>& closure, int m,
                          const std::vector<DecodedPoly>& polys, const SweepPlan& plan) {
  std::atomic<std::uint64_t> best_pos{std::uint64_t(-1)};
  const int workers = worker_count();
  std::vector<SweepFailure> local(static_cast<std::size_t>(workers));
  parallel_chunks(plan.checked, [&](int w, std::uint64_t begin, std::uint64_t end) {
    std::vector<const Path*> tuple(static_cast<std::size_t>(m));
    for (std::uint64_t pos = begin; pos < end; ++pos) {
      if (pos > best_pos.load(std::memory_order_relaxed)) return;
      const std::uint64_t idx = plan.sampled ? plan.sample[static_cast<std::size_t>(pos)] : pos;
      decode_tuple(closure, m, idx, tuple);
      for (std::size_t j = 0; j < polys.size(); ++j) {
        if (!vanishes_on_tuple(tuple, polys[j])) {
          auto& slot = local[static_cast<std::size_t>(w)];
          if (pos < slot.position) {
            slot.position = pos;
            slot.poly = static_cast<int>(j);
          }
          std::uint64_t seen = best_pos.load(std::memory_order_relaxed);
          while (pos < seen && !best_pos.compare_exchange_weak(seen, pos)) {
          }
          return;
        }
      }
    }
  });
  SweepFailure best;
  for (const SweepFailure& f : local)
    if (f.position < best.position || (f.position == best.position && f.poly < best.poly &&
                                       f.poly >= 0 && best.poly >= 0))
      best = f;
  return best;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

SectorReport sector_decompose(const Quiver& q, const MultilinearPoly& f, const PathTuple& beta) {
  const int m = static_cast<int>(beta.paths.size());
  if (m != f.degree())
    throw UsageError("sector_decompose: tuple size differs from polynomial degree");
  for (const Path& p : beta.paths)
    if (!path_valid_in(q, p)) throw UsageError("sector_decompose: tuple path not in this quiver");

  std::map<std::pair<int, int>, Sector> sectors;
  for_each_permutation(m, [&](const Permutation& sigma) {
    std::optional<Path> prod = beta.paths[static_cast<std::size_t>(sigma(1)) - 1];
    for (int k = 2; k <= m && prod; ++k)
      prod = compose_paths(q, *prod, beta.paths[static_cast<std::size_t>(sigma(k)) - 1]);
    if (!prod) return;
    const std::pair<int, int> key{prod->source(), prod->target()};
    auto [it, inserted] = sectors.emplace(key, Sector{});
    Sector& s = it->second;
    if (inserted) {
      s.source = key.first;
      s.target = key.second;
      s.coefficient_sum = 0;
    }
    s.permutation_ranks.push_back(sigma.rank());
    if (std::find(s.products.begin(), s.products.end(), *prod) == s.products.end())
      s.products.push_back(*prod);
    s.coefficient_sum += f.coefficient(sigma.rank());
  });

  SectorReport report;
  report.degree = m;
  for (auto& [key, s] : sectors) {
    report.all_sums_zero = report.all_sums_zero && s.coefficient_sum == 0;
    report.products_unique = report.products_unique && s.products.size() == 1;
    report.sectors.push_back(std::move(s));
  }
  return report;
}

UniqueProductCheck verify_unique_products(const Quiver& q, const PathTuple& beta) {
  if (beta.paths.empty()) throw UsageError("verify_unique_products: empty tuple");
  const PiQuiverCheck pi_check = is_pi_quiver(q);
  const MultilinearPoly zero(static_cast<int>(beta.paths.size()));
  const SectorReport report = sector_decompose(q, zero, beta);
  if (!pi_check.is_pi) {
    std::string message = "verify_unique_products requires a PI quiver (vertex " +
                          std::to_string(*pi_check.witness_vertex) +
                          " lies on two distinct oriented cycles)";
    for (const Sector& s : report.sectors) {
      if (s.products.size() > 1) {
        message += "; sector (" + std::to_string(s.source) + "," + std::to_string(s.target) +
                   ") of this tuple already holds distinct products '" +
                   format_path(q, s.products[0]) + "' and '" + format_path(q, s.products[1]) + "'";
        break;
      }
    }
    throw UsageError(message);
  }
  for (const Sector& s : report.sectors) {
    if (s.products.size() > 1) {
      // Falsifies the unique-product property on a PI quiver; callers
      // must abort any theorem verification.
      UniqueProductViolation v;
      v.source = s.source;
      v.target = s.target;
      v.sigma_rank = s.permutation_ranks[0];
      v.sigma_prime_rank = s.permutation_ranks[1];
      v.product_a = s.products[0];
      v.product_b = s.products[1];
      return {false, v};
    }
  }
  return {true, std::nullopt};
}

PathAlgebraElement evaluate_on_path_tuple(const Quiver& q, const MultilinearPoly& f,
                                          const PathTuple& beta) {
  if (static_cast<int>(beta.paths.size()) != f.degree())
    throw UsageError("evaluate_on_path_tuple: tuple size differs from polynomial degree");
  PathAlgebraElement acc;
  for (const auto& [rank, c] : f.terms()) {
    const Permutation sigma = Permutation::from_rank(f.degree(), rank);
    std::optional<Path> prod = beta.paths[static_cast<std::size_t>(sigma(1)) - 1];
    for (int k = 2; k <= f.degree() && prod; ++k)
      prod = compose_paths(q, *prod, beta.paths[static_cast<std::size_t>(sigma(k)) - 1]);
    if (prod) acc.add_term(*prod, c);
  }
  return acc;
}

PathCheckResult verify_identity_on_paths(const MultilinearPoly& f, const Quiver& q,
                                         const PathSet& pi, int max_len,
                                         const VerifyOptions& options) {
  if (max_len < 0) throw UsageError("verify_identity_on_paths: negative length bound");
  PathCheckResult result;
  result.max_len = max_len;
  result.seed = options.seed;

  const TransitiveRelation rel = relation_from_pi(q, pi);
  if (auto witness = pattern_identity_witness(rel, f, options.subspace.max_unit_tuples)) {
    result.verdict = PathCheckVerdict::not_pattern_identity;
    result.unit_witness = std::move(witness);
    return result;
  }

  const PiQuiverCheck pi_check = is_pi_quiver(q);
  result.pi_quiver = pi_check.is_pi;
  result.pi_witness = pi_check.witness_vertex;

  const std::vector<Path> closure = closure_paths(q, pi, max_len);
  if (closure.empty()) {
    result.verdict = PathCheckVerdict::pass;
    return result;
  }

  const SweepPlan plan =
      plan_sweep(closure.size(), f.degree(), options.tuple_budget, options.seed);
  result.total_tuples = plan.total;
  result.checked_tuples = plan.checked;
  result.sampled = plan.sampled;

  std::vector<DecodedPoly> polys;
  polys.push_back(decode(f));
  const SweepFailure fail = sweep_tuples(closure, f.degree(), polys, plan);
  if (fail.poly >= 0) {
    result.verdict = PathCheckVerdict::counterexample;
    result.checked_tuples = fail.position + 1;
    std::vector<const Path*> tuple(static_cast<std::size_t>(f.degree()));
    const std::uint64_t idx =
        plan.sampled ? plan.sample[static_cast<std::size_t>(fail.position)] : fail.position;
    decode_tuple(closure, f.degree(), idx, tuple);
    PathTuple beta;
    for (const Path* p : tuple) beta.paths.push_back(*p);
    result.counterexample_value = evaluate_on_path_tuple(q, f, beta);
    result.counterexample = std::move(beta);
  }
  return result;
}

TheoremReport theorem_report(const Quiver& q, const PathSet& pi, int m_max, int max_len,
                             const VerifyOptions& options) {
  if (m_max < 1) throw UsageError("theorem_report: m_max must be at least 1");
  if (max_len < 0) throw UsageError("theorem_report: negative length bound");

  TheoremReport report;
  report.quiver_hash = quiver_hash(q);
  for (const Path& p : pi.paths()) report.pi.push_back(format_path(q, p));
  const PiQuiverCheck pi_check = is_pi_quiver(q);
  report.pi_quiver = pi_check.is_pi;
  report.pi_witness = pi_check.witness_vertex;
  report.m_max = m_max;
  report.max_len = max_len;
  report.seed = options.seed;

  const TransitiveRelation rel = relation_from_pi(q, pi);
  report.pattern_empty = rel.pairs().empty();
  report.pattern = render_pattern(rel);

  const std::vector<Path> closure = closure_paths(q, pi, max_len);

  for (int m = 1; m <= m_max; ++m) {
    DegreeReport dr;
    dr.m = m;
    const IdentitySubspace space = identity_space(rel, m, options.subspace);
    dr.dimension = space.dimension();
    for (const MultilinearPoly& f : space.basis()) dr.basis.push_back(format_poly(f));

    std::vector<DecodedPoly> polys;
    polys.reserve(space.basis().size());
    for (const MultilinearPoly& f : space.basis()) {
      // The basis came out of the kernel computation; a unit tuple it
      // misses would mean the kernel itself is wrong.
      if (auto witness = pattern_identity_witness(rel, f, options.subspace.max_unit_tuples))
        throw InternalError("identity_space basis element fails on a unit tuple");
      polys.push_back(decode(f));
    }

    if (closure.empty() || polys.empty()) {
      dr.total_tuples = 0;
      dr.checked_tuples = 0;
      report.degrees.push_back(std::move(dr));
      continue;
    }

    const SweepPlan plan = plan_sweep(closure.size(), m, options.tuple_budget,
                                      splitmix64(options.seed) ^ static_cast<std::uint64_t>(m));
    dr.total_tuples = plan.total;
    dr.checked_tuples = plan.checked;
    dr.sampled = plan.sampled;

    const SweepFailure fail = sweep_tuples(closure, m, polys, plan);
    if (fail.poly >= 0) {
      dr.pass = false;
      dr.checked_tuples = fail.position + 1;
      std::vector<const Path*> tuple(static_cast<std::size_t>(m));
      const std::uint64_t idx =
          plan.sampled ? plan.sample[static_cast<std::size_t>(fail.position)] : fail.position;
      decode_tuple(closure, m, idx, tuple);
      std::string names;
      for (const Path* p : tuple) names += (names.empty() ? "" : ", ") + format_path(q, *p);
      dr.failure = "basis identity " + std::to_string(fail.poly + 1) +
                   " does not vanish on path tuple (" + names + ")";
    } else if (report.pi_quiver) {
      // Spot checks: the proof-level displays. Every sector sum of an
      // identity vanishes, and each sector holds one product path.
      const std::uint64_t spots = std::min<std::uint64_t>(plan.checked, options.sector_spot_checks);
      std::vector<const Path*> tuple(static_cast<std::size_t>(m));
      for (std::uint64_t pos = 0; pos < spots && dr.pass; ++pos) {
        const std::uint64_t idx = plan.sampled ? plan.sample[static_cast<std::size_t>(pos)] : pos;
        decode_tuple(closure, m, idx, tuple);
        PathTuple beta;
        for (const Path* p : tuple) beta.paths.push_back(*p);
        const UniqueProductCheck unique = verify_unique_products(q, beta);
        ++dr.unique_product_checks;
        if (!unique.pass) {
          dr.pass = false;
          dr.failure = "unique-product violation in sector (" +
                       std::to_string(unique.violation->source) + "," +
                       std::to_string(unique.violation->target) + ")";
          break;
        }
        for (const MultilinearPoly& f : space.basis()) {
          const SectorReport sectors = sector_decompose(q, f, beta);
          ++dr.sector_checks;
          if (!sectors.all_sums_zero) {
            dr.pass = false;
            dr.failure = "nonzero sector sum for a basis identity";
            break;
          }
        }
      }
    }
    report.pass = report.pass && dr.pass;
    report.degrees.push_back(std::move(dr));
  }
  return report;
}

std::string quiver_hash(const Quiver& q) {
  std::string canon = "n=" + std::to_string(q.vertex_count());
  for (const Arrow& a : q.arrows())
    canon += ";" + a.name + ":" + std::to_string(a.source) + "->" + std::to_string(a.target);
  std::ostringstream out;
  out << std::hex << fnv1a(canon);
  return out.str();
}

std::string report_to_json(const TheoremReport& report) {
  nlohmann::json j;
  j["schema"] = report.schema;
  j["quiver_hash"] = report.quiver_hash;
  j["pi"] = report.pi;
  j["pi_quiver"] = report.pi_quiver;
  if (report.pi_witness)
    j["pi_witness"] = *report.pi_witness;
  else
    j["pi_witness"] = nullptr;
  j["pattern_empty"] = report.pattern_empty;
  {
    std::vector<std::string> rows;
    std::istringstream in(report.pattern);
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    j["pattern"] = rows;
  }
  j["m_max"] = report.m_max;
  j["max_len"] = report.max_len;
  j["seed"] = report.seed;
  j["degrees"] = nlohmann::json::array();
  for (const DegreeReport& d : report.degrees) {
    nlohmann::json jd;
    jd["m"] = d.m;
    jd["dimension"] = d.dimension;
    jd["basis"] = d.basis;
    jd["total_tuples"] = d.total_tuples;
    jd["checked_tuples"] = d.checked_tuples;
    jd["bound"] = report.max_len;
    jd["sampled"] = d.sampled;
    jd["sector_checks"] = d.sector_checks;
    jd["unique_product_checks"] = d.unique_product_checks;
    jd["verdict"] = d.pass ? "pass" : "fail";
    if (d.failure)
      jd["failure"] = *d.failure;
    else
      jd["failure"] = nullptr;
    j["degrees"].push_back(std::move(jd));
  }
  j["verdict"] = report.verdict();
  return j.dump(2) + "\n";
}

std::string report_summary(const TheoremReport& report) {
  std::ostringstream out;
  out << "quiver " << report.quiver_hash << "  PI: " << (report.pi_quiver ? "yes" : "no");
  if (!report.pi_quiver && report.pi_witness) out << " (witness vertex " << *report.pi_witness << ")";
  out << "\n";
  out << "pi:";
  for (const std::string& p : report.pi) out << " " << p;
  out << "\n";
  if (report.pattern_empty) out << "pattern: empty (A_pi = 0; every polynomial is an identity)\n";
  out << "pattern:\n";
  {
    std::istringstream in(report.pattern);
    for (std::string line; std::getline(in, line);) out << "  " << line << "\n";
  }
  out << "max path length: " << report.max_len << ", seed: " << report.seed << "\n";
  out << " m | dim | tuples checked | sampled | sector sums | unique products | verdict\n";
  for (const DegreeReport& d : report.degrees) {
    out << " " << d.m << " | " << d.dimension << " | " << d.checked_tuples << "/"
        << d.total_tuples << " | " << (d.sampled ? "yes" : "no") << " | " << d.sector_checks
        << " | " << d.unique_product_checks << " | " << (d.pass ? "pass" : "FAIL");
    if (d.failure) out << "  (" << *d.failure << ")";
    out << "\n";
  }
  out << "verdict: " << report.verdict() << "\n";
  return out.str();
}

}  // namespace qpi
