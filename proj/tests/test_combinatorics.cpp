#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slackcert/combinatorics.hpp"
#include "slackcert/error.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

using namespace slackcert;

namespace {

const std::string kFixtures = SLACKCERT_FIXTURES;

AbstractSphere fixture(const std::string& name) { return load_sphere(kFixtures + "/" + name + ".json").sphere; }

long binomial(long n, long k) {
  long r = 1;
  for (long t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Euler-Poincare for the boundary of a d-polytope: f_0 - f_1 + ... = 1 - (-1)^d.
long euler(const FacePoset& faces, std::uint32_t d) {
  long total = 0;
  for (int i = 0; i < static_cast<int>(d); ++i) total += (i % 2 == 0 ? 1 : -1) * static_cast<long>(faces.count(i));
  return total;
}

}  // namespace

TEST_CASE("sphere files round-trip") {
  for (const char* name : {"prism", "prism_oriented", "cube", "n10_partial", "p3513_partial"}) {
    SphereFile file = load_sphere(kFixtures + "/" + name + ".json");
    SphereFile again = parse_sphere(serialize_sphere(file));
    CHECK(again == file);
  }
}

TEST_CASE("random simplicial complexes round-trip through serialization") {
  std::mt19937 rng(17);
  for (int round = 0; round < 50; ++round) {
    SphereFile file;
    file.name = "r" + std::to_string(round);
    file.sphere.dimension = 3;
    file.sphere.num_vertices = 7;
    file.overrides.partial = true;
    std::set<VertexSet> seen;
    for (int f = 0; f < 5; ++f) {
      std::vector<std::uint32_t> all{0, 1, 2, 3, 4, 5, 6};
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(3);
      VertexSet key = all;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) file.sphere.facets.push_back(all);
    }
    CHECK(parse_sphere(serialize_sphere(file)) == file);
  }
}

TEST_CASE("malformed sphere files are rejected") {
  CHECK_THROWS_AS(parse_sphere("{"), InvalidInput);
  CHECK_THROWS_AS(parse_sphere(R"({"dimension": 2, "vertices": 3, "facets": [[1,2],[2,4],[3,1]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_sphere(R"({"dimension": 2, "vertices": 3, "facets": [[1,1],[2,3],[3,1]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_sphere(R"({"dimension": 2, "vertices": 3, "facets": [[0,1],[1,2],[2,0]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_sphere(R"({"dimension": 2, "vertices": 3})"), InvalidInput);
  CHECK_THROWS_AS(load_sphere(kFixtures + "/missing.json"), InvalidInput);
}

TEST_CASE("face counts satisfy Euler-Poincare and match known f-vectors") {
  auto cube = compute_faces(fixture("cube"));
  CHECK(cube.count(0) == 8);
  CHECK(cube.count(1) == 12);
  CHECK(cube.count(2) == 6);
  CHECK(cube.warnings().empty());

  auto cyclic = compute_faces(fixture("cyclic_6_3"));
  CHECK(cyclic.count(0) == 6);
  CHECK(cyclic.count(1) == 12);
  CHECK(cyclic.count(2) == 8);

  for (std::uint32_t d = 2; d <= 5; ++d) {
    auto sphere = fixture("simplex_" + std::to_string(d));
    auto faces = compute_faces(sphere);
    for (int i = 0; i < static_cast<int>(d); ++i) {
      CHECK(static_cast<long>(faces.count(i)) == binomial(d + 1, i + 1));
    }
    CHECK(euler(faces, d) == 1 - (d % 2 == 0 ? 1 : -1));
  }
  auto prism = compute_faces(fixture("prism"));
  CHECK(euler(prism, 3) == 2);
}

TEST_CASE("closure is the intersection of the facets containing a set") {
  auto sphere = fixture("cube");
  auto faces = compute_faces(sphere);
  // vertices 1 and 4 (0-based 0, 3) are opposite on the first square.
  auto c = faces.closure(VertexSet{0, 3});
  REQUIRE(c.has_value());
  CHECK(*c == VertexSet{0, 1, 2, 3});
  CHECK(faces.closure(VertexSet{0, 7}) == std::nullopt);
  CHECK(faces.dim(VertexSet{0, 1}) == 1);
  CHECK(faces.dim(VertexSet{}) == -1);
}

TEST_CASE("automatic flags drop one dimension per step") {
  for (const char* name : {"prism", "cube", "cyclic_6_3", "simplex_4"}) {
    auto sphere = fixture(name);
    auto faces = compute_faces(sphere);
    auto flag = find_facet_flag(sphere, faces);
    REQUIRE(flag.size() == sphere.dimension + 1);
    VertexSet current = sphere.facet_set(flag[0]);
    for (std::size_t t = 1; t < sphere.dimension; ++t) {
      current = intersect(current, sphere.facet_set(flag[t]));
      CHECK(faces.dim(current) == static_cast<int>(sphere.dimension) - 1 - static_cast<int>(t));
    }
    current = intersect(current, sphere.facet_set(flag.back()));
    CHECK(current.empty());
    CHECK_NOTHROW(check_flag(sphere, faces, flag));
  }
}

TEST_CASE("invalid flags are rejected") {
  auto sphere = fixture("cube");
  auto faces = compute_faces(sphere);
  // Two pairs of opposite squares: no three of them share a vertex.
  CHECK_THROWS_AS(check_flag(sphere, faces, {0, 1, 2, 3}), InvalidInput);
  CHECK_FALSE(order_flag(sphere, faces, {0, 1, 2, 3}, false).has_value());
  // Opposite squares are fine once they are not adjacent in the order.
  auto ordered = order_flag(sphere, faces, {0, 1, 2, 4}, false);
  REQUIRE(ordered.has_value());
  CHECK(ordered->back() == 1);
  auto flag = find_facet_flag(sphere, faces);
  std::reverse(flag.begin(), flag.end());
  CHECK(order_flag(sphere, faces, flag, false).has_value());
}

TEST_CASE("facet bases span their facet") {
  auto sphere = fixture("cube");
  auto faces = compute_faces(sphere);
  for (std::uint32_t j = 0; j < sphere.num_facets(); ++j) {
    auto basis = facet_basis(sphere, faces, j);
    CHECK(basis.size() == sphere.dimension);
    VertexSet sorted = basis;
    std::sort(sorted.begin(), sorted.end());
    CHECK(faces.closure(sorted) == sphere.facet_set(j));
    auto all = all_facet_bases(sphere, faces, j);
    // Every 3-subset of a square contains an edge.
    CHECK(all.size() == 4);
    CHECK(all.front() == basis);
  }
  auto simplex = fixture("simplex_3");
  auto sfaces = compute_faces(simplex);
  CHECK(facet_basis(simplex, sfaces, 0) == simplex.facets[0]);
}

TEST_CASE("pseudomanifold check") {
  for (const char* name : {"prism", "cube", "cyclic_6_3", "simplex_2", "simplex_5"}) {
    CHECK(validate_pseudomanifold(fixture(name)).ok());
  }
  auto broken = fixture("cyclic_6_3");
  broken.facets.pop_back();
  auto report = validate_pseudomanifold(broken);
  CHECK_FALSE(report.ok());
  CHECK(report.bad_ridges.size() == 3);
}
