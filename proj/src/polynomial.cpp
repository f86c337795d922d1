#include "slackcert/polynomial.hpp"

#include "slackcert/error.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace slackcert {

std::string to_string(const Rational& value) {
  return value.str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidInput("empty rational literal");
  auto valid = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) return false;
    return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(start), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den)) throw InvalidInput("malformed rational '" + s + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  Integer d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
  return Rational(Integer(num), d);
}

std::string to_string(Var v) {
  return "x_{" + std::to_string(v.row + 1) + "," + std::to_string(v.col + 1) + "}";
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Var v, std::uint32_t exponent) {
  if (exponent > 0) {
    factors_.emplace_back(v, exponent);
    degree_ = exponent;
  }
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  Monomial m;
  for (const auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == v) {
      m.factors_.back().second += e;
    } else {
      m.factors_.emplace_back(v, e);
    }
    m.degree_ += e;
  }
  return m;
}

std::uint32_t Monomial::exponent(Var v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, Var key) { return f.first < key; });
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  auto it = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (it != other.factors_.end() && it->first < v) ++it;
    if (it == other.factors_.end() || it->first != v || it->second < e) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  out.degree_ = degree_ + other.degree_;
  return out;
}

Monomial Monomial::operator/(const Monomial& other) const {
  if (!other.divides(*this)) {
    throw InternalError("monomial " + to_string(other) + " does not divide " + to_string(*this));
  }
  Monomial out;
  auto b = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    std::uint32_t sub = 0;
    if (b != other.factors_.end() && b->first == v) sub = (b++)->second;
    if (e > sub) out.factors_.emplace_back(v, e - sub);
  }
  out.degree_ = degree_ - other.degree_;
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto it = b.factors_.begin();
  for (const auto& [v, e] : a.factors_) {
    while (it != b.factors_.end() && it->first < v) ++it;
    if (it != b.factors_.end() && it->first == v) {
      auto m = std::min(e, it->second);
      out.factors_.emplace_back(v, m);
      out.degree_ += m;
    }
  }
  return out;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& [v, e] : factors_) {
    std::uint64_t word = (std::uint64_t{v.row} << 40) ^ (std::uint64_t{v.col} << 16) ^ e;
    h ^= std::hash<std::uint64_t>{}(word) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  // Same degree: the monomial with the smaller exponent in the last variable
  // where they differ is the larger one.
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  auto i = static_cast<std::ptrdiff_t>(fa.size()) - 1;
  auto j = static_cast<std::ptrdiff_t>(fb.size()) - 1;
  while (i >= 0 || j >= 0) {
    if (i >= 0 && j >= 0 && fa[static_cast<std::size_t>(i)].first == fb[static_cast<std::size_t>(j)].first) {
      auto ea = fa[static_cast<std::size_t>(i)].second;
      auto eb = fb[static_cast<std::size_t>(j)].second;
      if (ea != eb) return ea < eb ? 1 : -1;
      --i;
      --j;
    } else if (j < 0 || (i >= 0 && fb[static_cast<std::size_t>(j)].first < fa[static_cast<std::size_t>(i)].first)) {
      // a carries a variable b lacks: a is smaller.
      return -1;
    } else {
      return 1;
    }
  }
  return 0;
}

std::string to_string(const Monomial& m) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += to_string(v);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------- LaurentMonomial

LaurentMonomial::LaurentMonomial(const Monomial& m) {
  for (const auto& [v, e] : m.factors()) factors_.emplace_back(v, static_cast<std::int64_t>(e));
}

LaurentMonomial LaurentMonomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  LaurentMonomial out;
  for (const auto& [v, e] : factors) {
    if (!out.factors_.empty() && out.factors_.back().first == v) {
      out.factors_.back().second += e;
    } else {
      out.factors_.emplace_back(v, e);
    }
  }
  std::erase_if(out.factors_, [](const Factor& f) { return f.second == 0; });
  return out;
}

std::int64_t LaurentMonomial::exponent(Var v) const {
  for (const auto& [w, e] : factors_) {
    if (w == v) return e;
  }
  return 0;
}

bool LaurentMonomial::is_monomial() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second > 0; });
}

Monomial LaurentMonomial::to_monomial() const {
  if (!is_monomial()) throw InternalError("negative exponent in " + to_string(*this));
  std::vector<Monomial::Factor> fs;
  for (const auto& [v, e] : factors_) fs.emplace_back(v, static_cast<std::uint32_t>(e));
  return Monomial::from_factors(std::move(fs));
}

namespace {

template <typename Combine>
LaurentMonomial merge(const std::vector<LaurentMonomial::Factor>& a,
                      const std::vector<LaurentMonomial::Factor>& b, Combine combine) {
  std::vector<LaurentMonomial::Factor> out;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.emplace_back(i->first, combine(i->second, 0));
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      out.emplace_back(j->first, combine(0, j->second));
      ++j;
    } else {
      out.emplace_back(i->first, combine(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return LaurentMonomial::from_factors(std::move(out));
}

}  // namespace

LaurentMonomial LaurentMonomial::operator*(const LaurentMonomial& other) const {
  return merge(factors_, other.factors_, [](std::int64_t x, std::int64_t y) { return x + y; });
}

LaurentMonomial LaurentMonomial::operator/(const LaurentMonomial& other) const {
  return merge(factors_, other.factors_, [](std::int64_t x, std::int64_t y) { return x - y; });
}

LaurentMonomial LaurentMonomial::inverse() const {
  return LaurentMonomial{} / *this;
}

LaurentMonomial LaurentMonomial::min(const LaurentMonomial& a, const LaurentMonomial& b) {
  return merge(a.factors_, b.factors_, [](std::int64_t x, std::int64_t y) { return std::min(x, y); });
}

LaurentMonomial LaurentMonomial::max(const LaurentMonomial& a, const LaurentMonomial& b) {
  return merge(a.factors_, b.factors_, [](std::int64_t x, std::int64_t y) { return std::max(x, y); });
}

std::string to_string(const LaurentMonomial& m) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += to_string(v);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// --------------------------------------------------------------- Polynomial

namespace {

bool term_greater(const Term& a, const Term& b) {
  return grevlex_compare(a.monomial, b.monomial) > 0;
}

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    int cmp;
    if (i == a.end()) {
      cmp = -1;
    } else if (j == b.end()) {
      cmp = 1;
    } else {
      cmp = grevlex_compare(i->monomial, j->monomial);
    }
    if (cmp > 0) {
      out.push_back(*i++);
    } else if (cmp < 0) {
      out.push_back(*j++);
      if (subtract) out.back().coefficient = -out.back().coefficient;
    } else {
      Rational c = subtract ? Rational(i->coefficient - j->coefficient)
                            : Rational(i->coefficient + j->coefficient);
      if (c != 0) out.push_back(Term{i->monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back(Term{Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(Var v) {
  Polynomial p;
  p.terms_.push_back(Term{Monomial(v), Rational(1)});
  return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back(Term{m, c});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(terms.size());
  for (auto& t : terms) acc[t.monomial] += t.coefficient;
  Polynomial p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) p.terms_.push_back(Term{m, std::move(c)});
  }
  std::sort(p.terms_.begin(), p.terms_.end(), term_greater);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.is_one());
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coefficient;
  return Rational(0);
}

std::uint32_t Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

bool Polynomial::is_homogeneous() const {
  return terms_.empty() || terms_.front().monomial.degree() == terms_.back().monomial.degree();
}

std::vector<Var> Polynomial::variables() const {
  std::vector<Var> vars;
  for (const auto& t : terms_) {
    for (const auto& f : t.monomial.factors()) vars.push_back(f.first);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coefficient = -t.coefficient;
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial p;
  p.terms_ = merge_terms(terms_, other.terms_, false);
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial p;
  p.terms_ = merge_terms(terms_, other.terms_, true);
  return p;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (terms_.empty() || other.terms_.empty()) return Polynomial{};
  if (terms_.size() == 1 && terms_.front().monomial.is_one()) return other.scaled(terms_.front().coefficient);
  if (other.terms_.size() == 1 && other.terms_.front().monomial.is_one()) {
    return scaled(other.terms_.front().coefficient);
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      acc[a.monomial * b.monomial] += a.coefficient * b.coefficient;
    }
  }
  Polynomial p;
  p.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) p.terms_.push_back(Term{m, std::move(c)});
  }
  std::sort(p.terms_.begin(), p.terms_.end(), term_greater);
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  terms_ = merge_terms(terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  terms_ = merge_terms(terms_, other.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial{};
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coefficient *= c;
  return p;
}

Polynomial Polynomial::times(const Monomial& m) const {
  // Multiplying by a monomial preserves grevlex order.
  Polynomial p = *this;
  for (auto& t : p.terms_) t.monomial = t.monomial * m;
  return p;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coefficient;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    if (t.monomial.is_one()) {
      out << to_string(c);
    } else {
      if (c != 1) out << to_string(c) << '*';
      out << to_string(t.monomial);
    }
  }
  return out.str();
}

Rational evaluate(const Polynomial& p, const Assignment& assignment) {
  Rational total = 0;
  for (const auto& t : p.terms()) {
    Rational value = t.coefficient;
    for (const auto& [v, e] : t.monomial.factors()) {
      auto it = assignment.find(v);
      if (it == assignment.end()) throw InvalidInput("no value assigned to " + to_string(v));
      for (std::uint32_t k = 0; k < e; ++k) value *= it->second;
    }
    total += value;
  }
  return total;
}

Rational evaluate(const LaurentMonomial& m, const Assignment& assignment) {
  Rational value = 1;
  for (const auto& [v, e] : m.factors()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw InvalidInput("no value assigned to " + to_string(v));
    if (it->second == 0 && e < 0) throw InvalidInput("negative power of zero at " + to_string(v));
    Rational base = e < 0 ? Rational(1 / it->second) : it->second;
    for (std::int64_t k = 0; k < (e < 0 ? -e : e); ++k) value *= base;
  }
  return value;
}

MonomialContent factor_monomial(const Polynomial& p) {
  if (p.is_zero()) throw InvalidInput("factor_monomial of the zero polynomial");
  Monomial g = p.terms().front().monomial;
  for (const auto& t : p.terms()) {
    if (g.is_one()) break;
    g = Monomial::gcd(g, t.monomial);
  }
  if (g.is_one()) return {g, p};
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back(Term{t.monomial / g, t.coefficient});
  // Dividing every term by the same monomial keeps the order.
  Polynomial cofactor = Polynomial::from_terms(std::move(terms));
  return {g, std::move(cofactor)};
}

std::optional<Polynomial> divide_exact(const Polynomial& numerator, const Polynomial& denominator) {
  if (denominator.is_zero()) throw InvalidInput("division by the zero polynomial");
  const Term& lead = denominator.leading_term();
  Polynomial remainder = numerator;
  std::vector<Term> quotient;
  while (!remainder.is_zero()) {
    const Term& r = remainder.leading_term();
    if (!lead.monomial.divides(r.monomial)) return std::nullopt;
    Term step{r.monomial / lead.monomial, r.coefficient / lead.coefficient};
    remainder -= denominator.times(step.monomial).scaled(step.coefficient);
    quotient.push_back(std::move(step));
  }
  return Polynomial::from_terms(std::move(quotient));
}

namespace {

class LaplaceExpander {
 public:
  explicit LaplaceExpander(const PolynomialMatrix& m) : m_(m), n_(m.size()) {}

  Polynomial det(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0) return Polynomial::constant(1);
    std::uint64_t key = (std::uint64_t{rows} << 32) | cols;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Choose the line with the most zeros among the remaining minor.
    int best_zeros = -1;
    bool along_row = false;
    std::size_t best = 0;
    for (std::size_t r = 0; r < n_; ++r) {
      if (!(rows >> r & 1U)) continue;
      int zeros = 0;
      for (std::size_t c = 0; c < n_; ++c) {
        if ((cols >> c & 1U) && m_[r][c].is_zero()) ++zeros;
      }
      if (zeros > best_zeros) {
        best_zeros = zeros;
        along_row = true;
        best = r;
      }
    }
    for (std::size_t c = 0; c < n_; ++c) {
      if (!(cols >> c & 1U)) continue;
      int zeros = 0;
      for (std::size_t r = 0; r < n_; ++r) {
        if ((rows >> r & 1U) && m_[r][c].is_zero()) ++zeros;
      }
      if (zeros > best_zeros) {
        best_zeros = zeros;
        along_row = false;
        best = c;
      }
    }

    Polynomial total;
    auto position = [](std::uint32_t mask, std::size_t index) {
      return std::popcount(mask & ((1U << index) - 1U));
    };
    if (along_row) {
      int pr = position(rows, best);
      for (std::size_t c = 0; c < n_; ++c) {
        if (!(cols >> c & 1U) || m_[best][c].is_zero()) continue;
        Polynomial minor = det(rows & ~(1U << best), cols & ~(1U << c));
        if (minor.is_zero()) continue;
        Polynomial term = m_[best][c] * minor;
        if ((pr + position(cols, c)) % 2 == 0) {
          total += term;
        } else {
          total -= term;
        }
      }
    } else {
      int pc = position(cols, best);
      for (std::size_t r = 0; r < n_; ++r) {
        if (!(rows >> r & 1U) || m_[r][best].is_zero()) continue;
        Polynomial minor = det(rows & ~(1U << r), cols & ~(1U << best));
        if (minor.is_zero()) continue;
        Polynomial term = m_[r][best] * minor;
        if ((pc + position(rows, r)) % 2 == 0) {
          total += term;
        } else {
          total -= term;
        }
      }
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  const PolynomialMatrix& m_;
  std::size_t n_;
  std::unordered_map<std::uint64_t, Polynomial> memo_;
};

}  // namespace

Polynomial det_symbolic(const PolynomialMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw InvalidInput("det_symbolic: matrix is not square");
  }
  if (n > 31) throw InvalidInput("det_symbolic: matrix too large");
  if (n == 0) return Polynomial::constant(1);
  std::uint32_t full = (n == 32) ? ~0U : ((1U << n) - 1U);
  LaplaceExpander expander(m);
  return expander.det(full, full);
}

}  // namespace slackcert
