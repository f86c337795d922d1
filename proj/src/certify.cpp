#include "slackcert/certify.hpp"

#include "slackcert/error.hpp"
#include "slackcert/parallel.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace slackcert {

void validate(const HeuristicConfig& h) {
  for (auto v : h.avoid) {
    if (std::find(h.fix.begin(), h.fix.end(), v) != h.fix.end()) {
      throw InvalidInput("vertex " + std::to_string(v + 1) + " is both avoided and fixed");
    }
  }
}

std::string to_string(const Factor& f) {
  std::string idx = std::to_string(f.row + 1) + "," + std::to_string(f.col + 1);
  switch (f.kind) {
    case FactorKind::Entry:
      return "S_{" + idx + "}";
    case FactorKind::Cofactor:
      return "C_{" + idx + "}";
    case FactorKind::Variable:
      break;
  }
  return "x_{" + idx + "}";
}

Polynomial factor_polynomial(const Factor& f, const ParametrizedSlackMatrix& s) {
  switch (f.kind) {
    case FactorKind::Entry:
      return s.entry(f.row, f.col);
    case FactorKind::Cofactor: {
      Polynomial e = s.entry(f.row, f.col);
      if (e.is_zero()) return e;
      return factor_monomial(e).cofactor;
    }
    case FactorKind::Variable:
      break;
  }
  return Polynomial::variable(Var{f.row, f.col});
}

// ------------------------------------------------------------- constraints

namespace {

bool contains(const std::vector<std::uint32_t>& set, std::uint32_t v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

// Canonical key up to positive scaling.
std::string scale_key(const Polynomial& p) {
  Rational lead = p.leading_term().coefficient;
  if (lead < 0) lead = -lead;
  return to_string(p.scaled(Rational(1) / lead));
}

void check_deadline(const Deadline& deadline, const char* stage) {
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw TimeLimitExceeded(std::string("time limit reached during ") + stage);
  }
}

Polynomial product_of(const std::vector<Factor>& factors, const ParametrizedSlackMatrix& s) {
  Polynomial p = Polynomial::constant(1);
  for (const auto& f : factors) p *= factor_polynomial(f, s);
  return p;
}

}  // namespace

ConstraintSet generate_constraints(const ParametrizedSlackMatrix& s, const std::vector<Var>& variables,
                                   std::uint32_t k, std::uint32_t l, const HeuristicConfig& h, Deadline deadline) {
  validate(h);
  if (k < 1 || l < 1) throw InvalidInput("k and l must be at least 1");
  ConstraintSet set;
  set.k = k;
  set.l = l;
  set.heuristics = h;

  std::set<std::string> seen;
  for (std::uint32_t j = 0; j < s.cols(); ++j) {
    const auto& facet = s.facet_sets[j];
    bool facet_avoided = std::any_of(facet.begin(), facet.end(), [&](auto v) { return contains(h.avoid, v); });
    for (std::uint32_t i = 0; i < s.rows; ++i) {
      if (s.incident(i, j)) continue;
      if (facet_avoided || contains(h.avoid, i)) continue;
      bool fixed_ok = std::all_of(h.fix.begin(), h.fix.end(), [&](auto v) {
        return v == i || std::binary_search(facet.begin(), facet.end(), v);
      });
      if (!fixed_ok) continue;
      Polynomial p = s.entry(i, j);
      if (p.is_zero()) continue;
      Factor f{FactorKind::Entry, i, j};
      if (h.monomial_simplify) {
        p = factor_monomial(p).cofactor;
        f.kind = FactorKind::Cofactor;
      }
      if (p.degree() > l) continue;
      if (!seen.insert(scale_key(p)).second) continue;
      set.pool.push_back(PoolMember{f, std::move(p)});
    }
  }
  set.entry_members = set.pool.size();
  for (auto v : variables) {
    set.pool.push_back(PoolMember{Factor{FactorKind::Variable, v.row, v.col}, Polynomial::variable(v)});
  }
  set.variable_members = variables.size();
  if (set.pool.empty()) throw SearchFailed("no constraints");

  // All multisets of at most k pool members, by nondecreasing index tuples.
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::uint32_t> current;
  const auto size = static_cast<std::uint32_t>(set.pool.size());
  auto extend = [&](auto&& self, std::uint32_t from) -> void {
    if (!current.empty()) tuples.push_back(current);
    if (current.size() == k) return;
    for (std::uint32_t t = from; t < size; ++t) {
      current.push_back(t);
      self(self, t);
      current.pop_back();
    }
  };
  extend(extend, 0);
  check_deadline(deadline, "constraint generation");

  set.items.resize(tuples.size());
  parallel_for(tuples.size(), [&](std::size_t t) {
    if (t % 256 == 0) check_deadline(deadline, "constraint generation");
    Constraint c;
    c.polynomial = Polynomial::constant(1);
    for (auto idx : tuples[t]) {
      c.provenance.push_back(set.pool[idx].factor);
      c.polynomial *= set.pool[idx].polynomial;
    }
    std::sort(c.provenance.begin(), c.provenance.end());
    set.items[t] = std::move(c);
  });
  return set;
}

Linearization linearize(const ConstraintSet& constraints) {
  std::unordered_map<Monomial, std::uint32_t, MonomialHash> index;
  std::vector<Monomial> monomials;
  for (const auto& item : constraints.items) {
    for (const auto& term : item.polynomial.terms()) {
      if (index.emplace(term.monomial, 0).second) monomials.push_back(term.monomial);
    }
  }
  std::sort(monomials.begin(), monomials.end(),
            [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) > 0; });
  for (std::uint32_t r = 0; r < monomials.size(); ++r) index[monomials[r]] = r;

  Linearization out;
  out.matrix = SparseRationalMatrix(monomials.size(), constraints.items.size());
  for (std::uint32_t c = 0; c < constraints.items.size(); ++c) {
    std::vector<SparseRationalMatrix::Entry> column;
    for (const auto& term : constraints.items[c].polynomial.terms()) {
      column.emplace_back(index.at(term.monomial), term.coefficient);
    }
    out.matrix.set_column(c, std::move(column));
  }
  out.monomials = std::move(monomials);
  return out;
}

// ------------------------------------------------------------------ search

Polynomial certificate_residual(const Certificate& cert, const ParametrizedSlackMatrix& s) {
  Polynomial total;
  for (const auto& term : cert.terms) total += product_of(term.factors, s).scaled(term.weight);
  return total;
}

Polynomial verify_certificate(Certificate& cert, const ParametrizedSlackMatrix& s) {
  Polynomial total;
  bool positive = !cert.terms.empty();
  for (auto& term : cert.terms) {
    if (term.weight <= 0) positive = false;
    term.polynomial = product_of(term.factors, s);
    total += term.polynomial.scaled(term.weight);
  }
  cert.verified = positive && total.is_zero();
  return total;
}

namespace {

void normalize_weights(std::vector<CertificateTerm>& terms) {
  Integer denominators = 1;
  for (const auto& t : terms) {
    denominators = boost::multiprecision::lcm(denominators, Integer(boost::multiprecision::denominator(t.weight)));
  }
  Integer numerators = 0;
  for (auto& t : terms) {
    t.weight *= denominators;
    numerators = boost::multiprecision::gcd(numerators, Integer(boost::multiprecision::numerator(t.weight)));
  }
  if (numerators > 1) {
    for (auto& t : terms) t.weight /= numerators;
  }
}

}  // namespace

SearchResult search_certificate(const ParametrizedSlackMatrix& s, const std::vector<Var>& variables,
                                std::uint32_t k, std::uint32_t l, const HeuristicConfig& h, const LpOptions& lp) {
  SearchResult result;
  ConstraintSet constraints = generate_constraints(s, variables, k, l, h, lp.deadline);
  result.stats.entry_constraints = constraints.entry_members;
  result.stats.variable_constraints = constraints.variable_members;
  result.stats.products = constraints.items.size();
  Linearization lin = linearize(constraints);
  result.stats.monomial_rows = lin.monomials.size();
  check_deadline(lp.deadline, "linearization");

  LpOutcome outcome = solve_certificate_lp(lin.matrix, lp);
  result.stats.pivots = outcome.pivots;
  result.stats.active_rows = outcome.active_rows;
  result.stats.active_cols = outcome.active_cols;
  if (outcome.status != LpStatus::CertificateFound) return result;

  Certificate cert;
  cert.k = k;
  cert.l = l;
  cert.heuristics = h;
  for (const auto& [col, weight] : extract_support(outcome)) {
    cert.terms.push_back(CertificateTerm{weight, constraints.items[col].provenance, {}});
  }
  normalize_weights(cert.terms);
  Polynomial residual = verify_certificate(cert, s);
  if (!cert.verified) throw InternalError("certificate invalid: residual " + to_string(residual));
  result.certificate = std::move(cert);
  return result;
}

// -------------------------------------------------------- rehomogenization

namespace {

struct HomogeneousFactor {
  LaurentMonomial scale;
  Polynomial value;
};

HomogeneousFactor homogeneous_factor(const Factor& f, const SlackModel& model) {
  const auto& ledger = model.ledger;
  const auto& h = *model.homogeneous;
  switch (f.kind) {
    case FactorKind::Entry: {
      auto r = rehomogenize_entry(ledger, h, f.row, f.col);
      return {r.scale, r.homogeneous};
    }
    case FactorKind::Cofactor: {
      auto r = rehomogenize_entry(ledger, h, f.row, f.col);
      Monomial content = factor_monomial(model.matrix.entry(f.row, f.col)).content;
      LaurentMonomial scale = r.scale;
      for (const auto& [v, e] : content.factors()) {
        for (std::uint32_t t = 0; t < e; ++t) scale = scale / ledger.variable_scale(v);
      }
      auto quotient = divide_exact(r.homogeneous, Polynomial::monomial(content));
      if (!quotient) throw InternalError("monomial content does not divide the homogeneous entry");
      return {scale, *quotient};
    }
    case FactorKind::Variable:
      break;
  }
  Var v{f.row, f.col};
  return {ledger.variable_scale(v), Polynomial::variable(v)};
}

}  // namespace

Polynomial homogeneous_residual(const Certificate& cert, const SlackModel& model) {
  if (!cert.homogeneous_multipliers || cert.homogeneous_multipliers->size() != cert.terms.size()) {
    throw InternalError("certificate has no homogeneous form");
  }
  Polynomial total;
  for (std::size_t t = 0; t < cert.terms.size(); ++t) {
    Polynomial p = Polynomial::monomial((*cert.homogeneous_multipliers)[t], cert.terms[t].weight);
    for (const auto& f : cert.terms[t].factors) p *= homogeneous_factor(f, model).value;
    total += p;
  }
  return total;
}

void rehomogenize(Certificate& cert, const SlackModel& model) {
  if (!model.homogeneous) throw InternalError("homogeneous reconstruction unavailable");
  if (cert.terms.empty()) throw InvalidInput("empty certificate");
  std::vector<LaurentMonomial> scales;
  for (const auto& term : cert.terms) {
    LaurentMonomial scale;
    for (const auto& f : term.factors) scale = scale * homogeneous_factor(f, model).scale;
    scales.push_back(scale);
  }
  LaurentMonomial floor = scales.front();
  for (const auto& s : scales) floor = LaurentMonomial::min(floor, s);
  std::vector<Monomial> multipliers;
  for (const auto& s : scales) {
    LaurentMonomial beta = s / floor;
    if (!beta.is_monomial() && !beta.is_one()) throw InternalError("rehomogenization produced a negative exponent");
    multipliers.push_back(beta.is_one() ? Monomial{} : beta.to_monomial());
  }
  cert.homogeneous_multipliers = std::move(multipliers);
  Polynomial residual = homogeneous_residual(cert, model);
  if (!residual.is_zero()) {
    throw InternalError("homogeneous certificate does not vanish: " + to_string(residual));
  }
}

// ------------------------------------------------------- final polynomials

namespace {

std::vector<std::int64_t> column_profile(const Monomial& m, std::size_t cols) {
  std::vector<std::int64_t> profile(cols, 0);
  for (const auto& [v, e] : m.factors()) profile.at(v.col) += e;
  return profile;
}

struct EntryRef {
  std::uint32_t row;
  std::uint32_t col;
  friend auto operator<=>(const EntryRef&, const EntryRef&) = default;
};

}  // namespace

void to_final_polynomial(Certificate& cert, const SlackModel& model) {
  cert.final_polynomial.reset();
  cert.translation_note.clear();
  if (!cert.homogeneous_multipliers) throw InternalError("rehomogenize before translating");
  const auto& h = *model.homogeneous;
  const std::size_t flag_cols = model.flag.size();

  struct Work {
    Rational coefficient;
    std::vector<EntryRef> entries;
    Monomial beta;
  };
  std::vector<Work> terms;
  for (std::size_t t = 0; t < cert.terms.size(); ++t) {
    Work w{cert.terms[t].weight, {}, (*cert.homogeneous_multipliers)[t]};
    for (const auto& f : cert.terms[t].factors) {
      if (f.kind == FactorKind::Cofactor) {
        cert.translation_note = "translation unavailable: certificate uses cofactors";
        return;
      }
      if (f.kind == FactorKind::Variable) {
        w.beta = w.beta * Monomial(Var{f.row, f.col});
      } else {
        w.entries.push_back(EntryRef{f.row, f.col});
      }
    }
    terms.push_back(std::move(w));
  }

  // Entries of S^H that are single monomials can absorb multiplier content.
  struct MonomialEntry {
    EntryRef ref;
    Monomial monomial;
    Rational coefficient;
    std::vector<std::int64_t> profile;
  };
  std::vector<MonomialEntry> candidates;
  for (std::uint32_t i = 0; i < h.rows; ++i) {
    for (std::uint32_t j = 0; j < h.cols(); ++j) {
      if (h.incident(i, j)) continue;
      Polynomial e = h.entry(i, j);
      if (!e.is_monomial() || e.is_constant() || e.leading_term().coefficient <= 0) continue;
      const auto& term = e.leading_term();
      candidates.push_back({EntryRef{i, j}, term.monomial, term.coefficient, column_profile(term.monomial, flag_cols)});
    }
  }

  std::vector<std::vector<std::int64_t>> profiles;
  for (const auto& w : terms) profiles.push_back(column_profile(w.beta, flag_cols));
  std::vector<std::int64_t> floor = profiles.front();
  for (const auto& p : profiles) {
    for (std::size_t c = 0; c < flag_cols; ++c) floor[c] = std::min(floor[c], p[c]);
  }
  for (std::size_t t = 0; t < terms.size(); ++t) {
    auto& w = terms[t];
    for (const auto& cand : candidates) {
      while (cand.monomial.divides(w.beta)) {
        bool fits = true;
        for (std::size_t c = 0; c < flag_cols; ++c) fits = fits && cand.profile[c] <= profiles[t][c] - floor[c];
        if (!fits) break;
        w.beta = w.beta / cand.monomial;
        w.coefficient /= cand.coefficient;
        w.entries.push_back(cand.ref);
        for (std::size_t c = 0; c < flag_cols; ++c) profiles[t][c] -= cand.profile[c];
      }
    }
  }
  for (const auto& p : profiles) {
    if (p != profiles.front()) {
      cert.translation_note = "translation unavailable: multipliers differ in column content";
      return;
    }
  }

  // Every remaining x_{i,c} becomes S^H_{i,F_c}; since all terms gain the
  // same column factors this multiplies the identity by a common factor.
  for (auto& w : terms) {
    for (const auto& [v, e] : w.beta.factors()) {
      for (std::uint32_t t = 0; t < e; ++t) w.entries.push_back(EntryRef{v.row, model.flag.at(v.col)});
    }
    w.beta = Monomial{};
    std::sort(w.entries.begin(), w.entries.end());
  }

  // Cancel entries shared by every term.
  std::vector<EntryRef> common = terms.front().entries;
  for (const auto& w : terms) {
    std::vector<EntryRef> next;
    std::set_intersection(common.begin(), common.end(), w.entries.begin(), w.entries.end(), std::back_inserter(next));
    common = std::move(next);
  }
  for (auto& w : terms) {
    std::vector<EntryRef> rest;
    std::set_difference(w.entries.begin(), w.entries.end(), common.begin(), common.end(), std::back_inserter(rest));
    w.entries = std::move(rest);
  }

  FinalPolynomial fp;
  fp.dimension = model.sphere.dimension;
  fp.num_vertices = model.sphere.num_vertices;
  for (std::uint32_t j = 0; j < model.sphere.num_facets(); ++j) {
    if (!model.sphere.is_simplicial(j)) fp.coplanar.push_back(model.sphere.facet_set(j));
  }
  const std::size_t d = fp.dimension;
  for (const auto& w : terms) {
    PluckerTerm pt;
    pt.coefficient = w.coefficient;
    for (const auto& e : w.entries) {
      std::vector<std::uint32_t> index = h.columns.at(e.col).basis;
      index.push_back(e.row);
      if (h.signs.at(e.col) < 0) std::swap(index[d - 1], index[d]);
      pt.coordinates.push_back(std::move(index));
    }
    fp.terms.push_back(std::move(pt));
  }
  cert.final_polynomial = std::move(fp);
}

namespace {

Rational minor_det(const std::vector<std::vector<Integer>>& matrix, const std::vector<std::uint32_t>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = Rational(matrix.at(rows[r]).at(c));
  }
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t t = c; t < n; ++t) a[r][t] -= f * a[c][t];
    }
  }
  return det;
}

// Integer basis of {x : r.x = 0 for every row r}.
std::vector<std::vector<Integer>> integer_kernel(const std::vector<std::vector<Integer>>& rows, std::size_t width) {
  std::vector<std::vector<Rational>> a;
  for (const auto& r : rows) a.emplace_back(r.begin(), r.end());
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < width && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    Rational inv = 1 / a[rank][c];
    for (auto& x : a[rank]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t t = 0; t < width; ++t) a[r][t] -= f * a[rank][t];
    }
    pivots.push_back(c);
    ++rank;
  }
  std::vector<std::vector<Integer>> out;
  for (std::size_t free = 0; free < width; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> x(width);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free];
    Integer scale = 1;
    for (const auto& q : x) scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(q));
    std::vector<Integer> v;
    for (const auto& q : x) v.push_back(boost::multiprecision::numerator(Rational(q * scale)));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

bool grassmann_numeric_check(const FinalPolynomial& fp, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> draw(-10, 10);
  const std::size_t width = fp.dimension + 1;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<std::vector<Integer>> matrix(fp.num_vertices, std::vector<Integer>(width));
    std::vector<std::vector<std::uint32_t>> placed(fp.coplanar.size());
    std::vector<std::optional<std::vector<Integer>>> normal(fp.coplanar.size());
    for (std::uint32_t v = 0; v < fp.num_vertices; ++v) {
      std::vector<std::vector<Integer>> constraints;
      for (std::size_t f = 0; f < fp.coplanar.size(); ++f) {
        const auto& set = fp.coplanar[f];
        if (!std::binary_search(set.begin(), set.end(), v)) continue;
        if (normal[f]) constraints.push_back(*normal[f]);
      }
      auto basis = integer_kernel(constraints, width);
      for (auto& x : matrix[v]) x = 0;
      for (const auto& b : basis) {
        Integer c = draw(rng);
        for (std::size_t t = 0; t < width; ++t) matrix[v][t] += c * b[t];
      }
      for (std::size_t f = 0; f < fp.coplanar.size(); ++f) {
        const auto& set = fp.coplanar[f];
        if (!std::binary_search(set.begin(), set.end(), v) || normal[f]) continue;
        placed[f].push_back(v);
        if (placed[f].size() + 1 == width) {
          std::vector<std::vector<Integer>> rows;
          for (auto u : placed[f]) rows.push_back(matrix[u]);
          normal[f] = integer_kernel(rows, width).front();
        }
      }
    }
    std::map<std::vector<std::uint32_t>, Rational> cache;
    Rational total = 0;
    for (const auto& term : fp.terms) {
      Rational value = term.coefficient;
      for (const auto& index : term.coordinates) {
        auto it = cache.find(index);
        if (it == cache.end()) it = cache.emplace(index, minor_det(matrix, index)).first;
        value *= it->second;
      }
      total += value;
    }
    if (total != 0) return false;
  }
  return true;
}

std::string to_string(const FinalPolynomial& fp) {
  std::ostringstream out;
  bool first = true;
  for (const auto& term : fp.terms) {
    Rational c = term.coefficient;
    bool negative = c < 0;
    if (negative) c = -c;
    out << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    bool need_star = false;
    if (c != 1 || term.coordinates.empty()) {
      out << to_string(c);
      need_star = true;
    }
    for (const auto& index : term.coordinates) {
      if (need_star) out << '*';
      need_star = true;
      out << "p(";
      for (std::size_t t = 0; t < index.size(); ++t) out << (t ? "," : "") << index[t] + 1;
      out << ')';
    }
  }
  if (first) out << '0';
  return out.str();
}

}  // namespace slackcert
