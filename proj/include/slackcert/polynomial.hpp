#pragma once

// Exact sparse multivariate polynomials over the slack variables x_{i,j}.
//
// Coefficients are GMP rationals. Terms are kept in canonical form: sorted by
// decreasing graded reverse-lexicographic order, identical monomials merged,
// no zero coefficients. Two polynomials are equal iff their term vectors are.

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slackcert {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
/// Inverse of to_string(Rational); throws InvalidInput.
Rational parse_rational(std::string_view text);

/// Slack variable x_{row,col}. Zero-based; printed one-based.
struct Var {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend auto operator<=>(const Var&, const Var&) = default;
};

std::string to_string(Var v);

class Monomial {
 public:
  using Factor = std::pair<Var, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(Var v, std::uint32_t exponent = 1);

  /// Sorts, merges repeated variables and drops zero exponents.
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(Var v) const;
  bool divides(const Monomial& other) const;

  Monomial operator*(const Monomial& other) const;
  /// Exact quotient; throws InternalError when `other` does not divide.
  Monomial operator/(const Monomial& other) const;

  static Monomial gcd(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Structural order (for ordered containers), not the term order.
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.factors_ < b.factors_;
  }

  std::size_t hash() const;

 private:
  std::vector<Factor> factors_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Graded reverse-lexicographic order over the canonical variable order.
/// Returns <0, 0, >0 as a is smaller, equal, larger than b.
int grevlex_compare(const Monomial& a, const Monomial& b);

std::string to_string(const Monomial& m);

/// Monomial with integer (possibly negative) exponents. Used for the row and
/// column scale factors of dehomogenization.
class LaurentMonomial {
 public:
  using Factor = std::pair<Var, std::int64_t>;

  LaurentMonomial() = default;
  explicit LaurentMonomial(const Monomial& m);
  static LaurentMonomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::int64_t exponent(Var v) const;
  /// True when no exponent is negative.
  bool is_monomial() const;
  Monomial to_monomial() const;

  LaurentMonomial operator*(const LaurentMonomial& other) const;
  LaurentMonomial operator/(const LaurentMonomial& other) const;
  LaurentMonomial inverse() const;

  /// Component-wise minimum / maximum of exponents.
  static LaurentMonomial min(const LaurentMonomial& a, const LaurentMonomial& b);
  static LaurentMonomial max(const LaurentMonomial& a, const LaurentMonomial& b);

  friend bool operator==(const LaurentMonomial&, const LaurentMonomial&) = default;

 private:
  std::vector<Factor> factors_;
};

std::string to_string(const LaurentMonomial& m);

struct Term {
  Monomial monomial;
  Rational coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c);
  static Polynomial variable(Var v);
  static Polynomial monomial(const Monomial& m, const Rational& c = 1);
  /// Canonicalizes arbitrary term lists.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  /// Coefficient of the constant term, zero if absent.
  Rational constant_term() const;
  /// Total degree; 0 for the zero polynomial.
  std::uint32_t degree() const;
  bool is_homogeneous() const;
  /// Greatest term in grevlex order. Precondition: nonzero.
  const Term& leading_term() const { return terms_.front(); }
  std::vector<Var> variables() const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);

  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Term> terms_;
};

std::string to_string(const Polynomial& p);

using Assignment = std::map<Var, Rational>;

/// Exact value at an assignment; throws InvalidInput if a variable of p is
/// not assigned.
Rational evaluate(const Polynomial& p, const Assignment& assignment);
Rational evaluate(const LaurentMonomial& m, const Assignment& assignment);

struct MonomialContent {
  Monomial content;
  Polynomial cofactor;
};

/// Splits p = content * cofactor with `content` the gcd of all monomials of p.
/// Throws InvalidInput on the zero polynomial.
MonomialContent factor_monomial(const Polynomial& p);

/// q with numerator = q * denominator, or nullopt when not divisible.
std::optional<Polynomial> divide_exact(const Polynomial& numerator,
                                       const Polynomial& denominator);

using PolynomialMatrix = std::vector<std::vector<Polynomial>>;

/// Determinant by zero-pruned Laplace expansion with memoized minors. At each
/// level the row or column with the most structural zeros is expanded.
Polynomial det_symbolic(const PolynomialMatrix& m);

}  // namespace slackcert
