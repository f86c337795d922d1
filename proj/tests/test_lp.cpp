#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lp_oracle.hpp"
#include "slackcert/error.hpp"
#include "slackcert/lp.hpp"

#include <sstream>

using namespace slackcert;

namespace {

SparseRationalMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::size_t cols = rows.begin()->size();
  SparseRationalMatrix m(rows.size(), cols);
  std::uint32_t r = 0;
  for (const auto& row : rows) {
    std::uint32_t c = 0;
    for (int v : row) m.set(r, c++, Rational(v));
    ++r;
  }
  return m;
}

void check_solution(const SparseRationalMatrix& m, const LpOutcome& out) {
  Rational total = 0;
  for (const auto& [c, w] : out.weights) {
    CHECK(w > 0);
    total += w;
  }
  CHECK(total == 1);
  for (const auto& v : m.multiply(out.weights)) CHECK(v == 0);
}

}  // namespace

TEST_CASE("sparse matrix storage") {
  SparseRationalMatrix m(3, 2);
  m.set(2, 1, Rational(5));
  m.set(0, 1, Rational(-1));
  m.set(1, 0, Rational(1, 2));
  CHECK(m.nonzeros() == 3);
  CHECK(m.at(2, 1) == 5);
  CHECK(m.at(1, 1) == 0);
  CHECK(m.column(1).front().first == 0);
  m.set(2, 1, Rational(0));
  CHECK(m.nonzeros() == 2);
  m.set_column(0, {{2, Rational(3)}, {0, Rational(0)}, {1, Rational(1)}});
  CHECK(m.column(0).size() == 2);
  CHECK(m.column(0).front().first == 1);
  CHECK_THROWS_AS(m.set(3, 0, Rational(1)), InvalidInput);
  CHECK_THROWS_AS(m.set_column(0, {{1, Rational(1)}, {1, Rational(2)}}), InvalidInput);
  auto y = m.multiply({{0, Rational(2)}, {1, Rational(1)}});
  CHECK(y == std::vector<Rational>{Rational(-1), Rational(2), Rational(6)});
}

TEST_CASE("two opposite columns give a certificate") {
  auto m = from_rows({{1, -1, 2}, {0, 0, 1}});
  auto out = solve_certificate_lp(m);
  REQUIRE(out.status == LpStatus::CertificateFound);
  CHECK(out.objective == 0);
  REQUIRE(out.weights.size() == 2);
  CHECK(out.weights[0] == std::make_pair(0u, Rational(1, 2)));
  CHECK(out.weights[1] == std::make_pair(1u, Rational(1, 2)));
  CHECK(extract_support(out).size() == 2);
}

TEST_CASE("single-signed rows rule columns out") {
  auto m = from_rows({{1, 2, 0}, {0, 1, 1}});
  LpOptions options;
  auto out = solve_certificate_lp(m, options);
  CHECK(out.status == LpStatus::NoCertificate);
  CHECK(out.active_cols == 0);
  CHECK_THROWS_AS(extract_support(out), InvalidInput);
  options.presolve = false;
  auto raw = solve_certificate_lp(m, options);
  CHECK(raw.status == LpStatus::NoCertificate);
  CHECK(raw.objective == 1);
}

TEST_CASE("empty matrices and zero columns") {
  CHECK(solve_certificate_lp(SparseRationalMatrix(3, 0)).status == LpStatus::NoCertificate);
  SparseRationalMatrix m(2, 2);
  m.set(0, 0, Rational(1));
  auto out = solve_certificate_lp(m);
  REQUIRE(out.status == LpStatus::CertificateFound);
  CHECK(out.weights == std::vector<std::pair<std::uint32_t, Rational>>{{1, Rational(1)}});
}

TEST_CASE("agrees with brute-force support enumeration") {
  std::mt19937_64 rng(4242);
  int found = 0;
  for (int round = 0; round < 400; ++round) {
    auto inst = lp_oracle::random_instance(rng);
    bool expected = lp_oracle::feasible(inst.dense, inst.sparse.cols());
    for (bool presolve : {true, false}) {
      LpOptions options;
      options.presolve = presolve;
      auto out = solve_certificate_lp(inst.sparse, options);
      CAPTURE(round);
      CHECK((out.status == LpStatus::CertificateFound) == expected);
      if (out.status == LpStatus::CertificateFound) check_solution(inst.sparse, out);
    }
    found += expected;
  }
  // The generator produces both outcomes.
  CHECK(found > 50);
  CHECK(found < 350);
}

TEST_CASE("degenerate instances terminate under Bland's rule") {
  // Many zero right-hand sides and ties in every ratio test.
  auto m = from_rows({{1, -1, 1, -1, 0, 0}, {1, 1, -1, -1, 1, -1}, {0, 1, 1, -2, -1, 1}, {2, 0, 0, -2, 0, 0}});
  auto out = solve_certificate_lp(m);
  REQUIRE(out.status == LpStatus::CertificateFound);
  check_solution(m, out);
}

TEST_CASE("tableau dump") {
  auto m = from_rows({{1, -1}});
  std::ostringstream dump;
  LpOptions options;
  options.dump = &dump;
  auto out = solve_certificate_lp(m, options);
  CHECK(out.status == LpStatus::CertificateFound);
  CHECK(dump.str().find("pivot 1:") != std::string::npos);
  CHECK(dump.str().find("tableau") != std::string::npos);
}

TEST_CASE("an expired deadline stops the solver") {
  auto m = from_rows({{1, -1}});
  LpOptions options;
  options.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(solve_certificate_lp(m, options), TimeLimitExceeded);
}
