#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slackcert/error.hpp"
#include "slackcert/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace slackcert;

namespace {

Polynomial x(std::uint32_t i, std::uint32_t j) { return Polynomial::variable(Var{i, j}); }
Polynomial c(long v) { return Polynomial::constant(Rational(v)); }

Polynomial random_polynomial(std::mt19937& rng, std::uint32_t vars, std::size_t terms, std::uint32_t max_exp) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<std::uint32_t> var(0, vars - 1);
  std::uniform_int_distribution<std::uint32_t> exp(0, max_exp);
  std::vector<Term> out;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<Monomial::Factor> f;
    for (int k = 0; k < 3; ++k) f.emplace_back(Var{var(rng), 0}, exp(rng));
    out.push_back(Term{Monomial::from_factors(f), Rational(coef(rng))});
  }
  return Polynomial::from_terms(out);
}

Assignment random_point(std::mt19937& rng, std::uint32_t vars) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  Assignment a;
  for (std::uint32_t v = 0; v < vars; ++v) a[Var{v, 0}] = Rational(num(rng), den(rng));
  return a;
}

// Leibniz formula over all permutations, independent of det_symbolic.
Polynomial leibniz(const PolynomialMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial total;
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
    }
    Polynomial term = c(inversions % 2 == 0 ? 1 : -1);
    for (std::size_t r = 0; r < n; ++r) term *= m[r][perm[r]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("rationals print and parse") {
  CHECK(to_string(Rational(3)) == "3");
  CHECK(to_string(Rational(-6, 4)) == "-3/2");
  CHECK(parse_rational("-3/2") == Rational(-3, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
}

TEST_CASE("canonical form merges and drops zero terms") {
  Polynomial p = x(0, 0) + x(1, 0) - x(0, 0);
  CHECK(p == x(1, 0));
  CHECK((x(0, 0) - x(0, 0)).is_zero());
  CHECK((x(0, 0) * x(1, 1)) == (x(1, 1) * x(0, 0)));
  CHECK(c(0).is_zero());
  CHECK(c(4).is_constant());
  CHECK(c(4).constant_term() == 4);
}

TEST_CASE("grevlex order ranks by degree then reverse lexicographic") {
  Monomial a(Var{0, 0}, 2);
  Monomial b = Monomial(Var{0, 0}) * Monomial(Var{1, 0});
  Monomial d(Var{1, 0}, 2);
  CHECK(grevlex_compare(a, b) > 0);
  CHECK(grevlex_compare(b, d) > 0);
  CHECK(grevlex_compare(Monomial(Var{0, 0}, 3), a) > 0);
  CHECK(grevlex_compare(a, a) == 0);
  Polynomial p = x(1, 0) * x(1, 0) + x(0, 0) * x(1, 0) + x(0, 0) * x(0, 0);
  REQUIRE(p.size() == 3);
  CHECK(p.leading_term().monomial == a);
}

TEST_CASE("printing uses one-based variable names") {
  CHECK(to_string(Var{0, 4}) == "x_{1,5}");
  CHECK(to_string(c(0)) == "0");
}

TEST_CASE("degree and homogeneity") {
  Polynomial p = x(0, 0) * x(1, 0) + x(2, 0) * x(2, 0);
  CHECK(p.degree() == 2);
  CHECK(p.is_homogeneous());
  CHECK_FALSE((p + x(0, 0)).is_homogeneous());
}

TEST_CASE("Laurent monomials") {
  auto a = LaurentMonomial::from_factors({{Var{0, 0}, 2}, {Var{1, 0}, -1}});
  auto b = LaurentMonomial::from_factors({{Var{0, 0}, -1}, {Var{2, 0}, 3}});
  CHECK((a * a.inverse()).is_one());
  CHECK_FALSE(a.is_monomial());
  CHECK(LaurentMonomial::min(a, b).exponent(Var{0, 0}) == -1);
  CHECK(LaurentMonomial::max(a, b).exponent(Var{2, 0}) == 3);
  Assignment at{{Var{0, 0}, Rational(2)}, {Var{1, 0}, Rational(3)}, {Var{2, 0}, Rational(1, 2)}};
  CHECK(evaluate(a, at) == Rational(4, 3));
  CHECK(evaluate(a / b, at) == evaluate(a, at) / evaluate(b, at));
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    Polynomial p = random_polynomial(rng, 4, 5, 3);
    Polynomial q = random_polynomial(rng, 4, 4, 2);
    Assignment at = random_point(rng, 4);
    CHECK(evaluate(p + q, at) == evaluate(p, at) + evaluate(q, at));
    CHECK(evaluate(p - q, at) == evaluate(p, at) - evaluate(q, at));
    CHECK(evaluate(p * q, at) == evaluate(p, at) * evaluate(q, at));
    CHECK(evaluate(p.scaled(Rational(2, 3)), at) == Rational(2, 3) * evaluate(p, at));
  }
  CHECK_THROWS_AS(evaluate(x(5, 5), Assignment{}), InvalidInput);
}

TEST_CASE("ring axioms hold on random polynomials") {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    Polynomial p = random_polynomial(rng, 3, 4, 2);
    Polynomial q = random_polynomial(rng, 3, 4, 2);
    Polynomial r = random_polynomial(rng, 3, 3, 2);
    CHECK(p * (q + r) == p * q + p * r);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * q == q * p);
    CHECK((p - p).is_zero());
  }
}

TEST_CASE("monomial content recombines") {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    Polynomial p = random_polynomial(rng, 4, 4, 3);
    if (p.is_zero()) continue;
    Monomial shift = Monomial(Var{round % 4u, 0}, 1 + round % 3);
    p = p.times(shift);
    auto [content, cofactor] = factor_monomial(p);
    CHECK(cofactor.times(content) == p);
    CHECK(shift.divides(content));
    // The cofactor has trivial content.
    CHECK(factor_monomial(cofactor).content.is_one());
  }
  CHECK_THROWS_AS(factor_monomial(Polynomial{}), InvalidInput);
}

TEST_CASE("exact division") {
  std::mt19937 rng(5);
  for (int round = 0; round < 100; ++round) {
    Polynomial p = random_polynomial(rng, 3, 4, 2);
    Polynomial q = random_polynomial(rng, 3, 3, 2);
    if (q.is_zero()) continue;
    auto quotient = divide_exact(p * q, q);
    REQUIRE(quotient.has_value());
    CHECK(*quotient == p);
  }
  CHECK_FALSE(divide_exact(x(0, 0) + c(1), x(0, 0)).has_value());
  CHECK_FALSE(divide_exact(x(0, 0) * x(0, 0) + c(1), x(0, 0) + c(1)).has_value());
}

TEST_CASE("symbolic determinant matches the Leibniz formula") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> kind(0, 3);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int round = 0; round < 12; ++round) {
      PolynomialMatrix m(n, std::vector<Polynomial>(n));
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
          int k = kind(rng);
          m[i][j] = k == 0 ? Polynomial{} : k == 1 ? c(1) : x(i, j);
        }
      }
      CHECK(det_symbolic(m) == leibniz(m));
    }
  }
}

TEST_CASE("determinant of a generic 3x3 matrix has six terms") {
  PolynomialMatrix m(3, std::vector<Polynomial>(3));
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) m[i][j] = x(i, j);
  }
  Polynomial det = det_symbolic(m);
  CHECK(det.size() == 6);
  CHECK(det.is_homogeneous());
  CHECK(det.degree() == 3);
}
