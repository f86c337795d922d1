#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slackcert/certificate_io.hpp"
#include "slackcert/certify.hpp"
#include "slackcert/error.hpp"

#include <algorithm>
#include <set>
#include <string>

using namespace slackcert;

namespace {

const std::string kFixtures = SLACKCERT_FIXTURES;

SlackModel model_for(const std::string& name) {
  SphereFile file = load_sphere(kFixtures + "/" + name + ".json");
  return build_slack_model(file.sphere, model_options(file.overrides));
}

std::size_t multisets(std::size_t n, std::size_t k) {
  // sum over s = 1..k of C(n + s - 1, s)
  std::size_t total = 0;
  for (std::size_t s = 1; s <= k; ++s) {
    std::size_t c = 1;
    for (std::size_t t = 1; t <= s; ++t) c = c * (n + s - t) / t;
    total += c;
  }
  return total;
}

bool passes_filters(const ParametrizedSlackMatrix& s, const Factor& f, const HeuristicConfig& h) {
  VertexSet touched = s.facet_sets[f.col];
  touched.push_back(f.row);
  std::sort(touched.begin(), touched.end());
  for (auto v : h.avoid) {
    if (std::binary_search(touched.begin(), touched.end(), v)) return false;
  }
  for (auto v : h.fix) {
    if (!std::binary_search(touched.begin(), touched.end(), v)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("factor names") {
  CHECK(to_string(Factor{FactorKind::Entry, 8, 7}) == "S_{9,8}");
  CHECK(to_string(Factor{FactorKind::Cofactor, 0, 1}) == "C_{1,2}");
  CHECK(to_string(Factor{FactorKind::Variable, 4, 3}) == "x_{5,4}");
}

TEST_CASE("heuristic sets must not overlap") {
  HeuristicConfig h;
  h.avoid = {1, 2};
  h.fix = {2};
  CHECK_THROWS_AS(validate(h), InvalidInput);
  h.fix = {3};
  CHECK_NOTHROW(validate(h));
}

TEST_CASE("pool members respect degree, filters and deduplication") {
  SlackModel model = model_for("p3513_partial");
  auto vars = model.reduced.variables();
  for (int variant = 0; variant < 3; ++variant) {
    HeuristicConfig h;
    if (variant == 1) h.avoid = {1, 3, 6};
    if (variant == 2) h.fix = {7, 8, 10};
    ConstraintSet set = generate_constraints(model.matrix, vars, 1, 3, h);
    CHECK(set.variable_members == vars.size());
    CHECK(set.pool.size() == set.entry_members + set.variable_members);
    std::set<std::string> seen;
    for (std::size_t t = 0; t < set.entry_members; ++t) {
      const auto& member = set.pool[t];
      CHECK(member.factor.kind == FactorKind::Entry);
      CHECK(member.polynomial.degree() <= 3);
      CHECK(member.polynomial == factor_polynomial(member.factor, model.matrix));
      CHECK(passes_filters(model.matrix, member.factor, h));
      Rational lc = member.polynomial.leading_term().coefficient;
      CHECK(seen.insert(to_string(member.polynomial.scaled(1 / (lc < 0 ? Rational(-lc) : lc)))).second);
    }
    CHECK(set.items.size() == multisets(set.pool.size(), 1));
  }
}

TEST_CASE("products are all multisets up to size k") {
  SlackModel model = model_for("n10_partial");
  ConstraintSet set = generate_constraints(model.matrix, model.reduced.variables(), 2, 2, HeuristicConfig{});
  CHECK(set.items.size() == multisets(set.pool.size(), 2));
  for (const auto& item : set.items) {
    CHECK(std::is_sorted(item.provenance.begin(), item.provenance.end()));
    Polynomial p = Polynomial::constant(1);
    for (const auto& f : item.provenance) p *= factor_polynomial(f, model.matrix);
    CHECK(item.polynomial == p);
  }
}

TEST_CASE("linearization stores every coefficient") {
  SlackModel model = model_for("n10_partial");
  ConstraintSet set = generate_constraints(model.matrix, model.reduced.variables(), 2, 2, HeuristicConfig{});
  Linearization lin = linearize(set);
  REQUIRE(lin.matrix.cols() == set.items.size());
  CHECK(lin.matrix.rows() == lin.monomials.size());
  for (std::size_t r = 1; r < lin.monomials.size(); ++r) {
    CHECK(grevlex_compare(lin.monomials[r - 1], lin.monomials[r]) > 0);
  }
  for (std::uint32_t c = 0; c < lin.matrix.cols(); ++c) {
    std::vector<Term> terms;
    for (const auto& [r, v] : lin.matrix.column(c)) terms.push_back(Term{lin.monomials[r], v});
    CHECK(Polynomial::from_terms(terms) == set.items[c].polynomial);
  }
}

TEST_CASE("search finds and verifies a certificate") {
  SlackModel model = model_for("n10_partial");
  SearchResult result = search_certificate(model.matrix, model.reduced.variables(), 2, 2, HeuristicConfig{});
  REQUIRE(result.certificate.has_value());
  Certificate cert = *result.certificate;
  CHECK(cert.verified);
  CHECK(verify_certificate(cert, model.matrix).is_zero());
  for (const auto& t : cert.terms) {
    CHECK(t.weight > 0);
    CHECK(boost::multiprecision::denominator(t.weight) == 1);
  }
  rehomogenize(cert, model);
  REQUIRE(cert.homogeneous_multipliers.has_value());
  CHECK(homogeneous_residual(cert, model).is_zero());
  to_final_polynomial(cert, model);
  REQUIRE(cert.final_polynomial.has_value());
  CHECK(grassmann_numeric_check(*cert.final_polynomial, 20));
}

TEST_CASE("a perturbed certificate does not verify") {
  SlackModel model = model_for("n10_partial");
  Certificate cert = load_certificate(kFixtures + "/n10_partial.cert.json");
  CHECK(verify_certificate(cert, model.matrix).is_zero());
  cert.terms[0].weight = 2;
  CHECK_FALSE(verify_certificate(cert, model.matrix).is_zero());
  CHECK_FALSE(cert.verified);
}

TEST_CASE("realizable spheres have no low-degree certificate") {
  for (const char* name : {"prism", "simplex_3"}) {
    SlackModel model = model_for(name);
    auto result = search_certificate(model.matrix, model.reduced.variables(), 2, 2, HeuristicConfig{});
    CHECK_FALSE(result.certificate.has_value());
  }
}

TEST_CASE("Grassmann check on the three-term relation") {
  // p12 p34 - p13 p24 + p14 p23 vanishes on Gr(2, 4).
  FinalPolynomial fp;
  fp.dimension = 1;
  fp.num_vertices = 4;
  fp.terms = {PluckerTerm{Rational(1), {{0, 1}, {2, 3}}}, PluckerTerm{Rational(-1), {{0, 2}, {1, 3}}},
              PluckerTerm{Rational(1), {{0, 3}, {1, 2}}}};
  CHECK(grassmann_numeric_check(fp, 50));
  fp.terms[1].coefficient = 1;
  CHECK_FALSE(grassmann_numeric_check(fp, 50));
  CHECK(to_string(fp) == "p(1,2)*p(3,4) + p(1,3)*p(2,4) + p(1,4)*p(2,3)");
}

TEST_CASE("coplanar sets constrain the random matrices") {
  // p(1,2,3) vanishes only when vertices 1..3 share a line through the origin
  // in the rank-3 picture, i.e. when they are coplanar in the affine sense.
  FinalPolynomial fp;
  fp.dimension = 2;
  fp.num_vertices = 4;
  fp.terms = {PluckerTerm{Rational(1), {{0, 1, 2}}}};
  CHECK_FALSE(grassmann_numeric_check(fp, 10));
  fp.coplanar = {{0, 1, 2}};
  CHECK(grassmann_numeric_check(fp, 10));
}

TEST_CASE("certificate JSON round-trip") {
  SlackModel model = model_for("p3513_partial");
  Certificate cert = load_certificate(kFixtures + "/p3513_partial.cert.json");
  CHECK(verify_certificate(cert, model.matrix).is_zero());
  rehomogenize(cert, model);
  to_final_polynomial(cert, model);
  auto doc = nlohmann::json::parse(certificate_to_json(cert).dump());
  Certificate again = certificate_from_json(doc);
  REQUIRE(again.terms.size() == cert.terms.size());
  for (std::size_t t = 0; t < cert.terms.size(); ++t) {
    CHECK(again.terms[t].weight == cert.terms[t].weight);
    CHECK(again.terms[t].factors == cert.terms[t].factors);
  }
  CHECK(again.heuristics == cert.heuristics);
  FinalPolynomial fp = final_polynomial_from_json(doc);
  CHECK(fp.coplanar == cert.final_polynomial->coplanar);
  CHECK(to_string(fp) == to_string(*cert.final_polynomial));
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json::parse(R"({"terms": []})")), InvalidInput);
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json::parse(R"({"terms": [{"entries": [[0, 1]]}]})")),
                  InvalidInput);
}
