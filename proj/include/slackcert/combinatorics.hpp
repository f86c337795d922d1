#pragma once

// Abstract spheres and the purely combinatorial data the slack model needs:
// the face poset, flags of facets and facet bases.
//
// Vertex labels and facet indices are 0-based here; all file I/O is 1-based.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slackcert {

using VertexSet = std::vector<std::uint32_t>;  // sorted, no duplicates

struct AbstractSphere {
  std::uint32_t dimension = 0;
  std::uint32_t num_vertices = 0;
  /// Facets in input order; vertex order inside a facet is preserved because
  /// it doubles as the basis order of simplicial facets.
  std::vector<std::vector<std::uint32_t>> facets;

  std::size_t num_facets() const { return facets.size(); }
  bool is_simplicial(std::uint32_t facet) const { return facets[facet].size() == dimension; }
  bool all_simplicial() const;
  VertexSet facet_set(std::uint32_t facet) const;
  bool contains(std::uint32_t facet, std::uint32_t vertex) const;

  friend bool operator==(const AbstractSphere&, const AbstractSphere&) = default;
};

/// Optional fields of a sphere file. They replace the automatic choices.
struct SphereOverrides {
  std::optional<std::vector<std::uint32_t>> flag;
  std::map<std::uint32_t, std::vector<std::uint32_t>> bases;
  std::map<std::uint32_t, int> orientation;
  /// (vertex, facet) entries of the reduced matrix fixed to one.
  std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> fixed;
  /// Alternative bases per facet, appended as extra columns.
  std::map<std::uint32_t, std::vector<std::vector<std::uint32_t>>> redundant;
  /// The facet list is an excerpt: only the listed facets are known, so
  /// lattice-level checks are relaxed.
  bool partial = false;

  friend bool operator==(const SphereOverrides&, const SphereOverrides&) = default;
};

struct SphereFile {
  std::string name;
  AbstractSphere sphere;
  SphereOverrides overrides;

  friend bool operator==(const SphereFile&, const SphereFile&) = default;
};

/// Throws InvalidInput on malformed or inconsistent input.
SphereFile parse_sphere(const std::string& text);
SphereFile load_sphere(const std::string& path);
std::string serialize_sphere(const SphereFile& file);
/// Checks the AbstractSphere invariants; throws InvalidInput.
void validate_sphere(const AbstractSphere& sphere, bool partial = false);

struct PseudomanifoldReport {
  bool simplicial = false;
  /// Ridges (or ridge-sized facet intersections) not in exactly two facets.
  std::vector<std::pair<VertexSet, std::size_t>> bad_ridges;
  std::size_t ridges_checked = 0;
  bool connected = true;
  std::size_t components = 1;

  bool ok() const { return bad_ridges.empty() && connected; }
};

PseudomanifoldReport validate_pseudomanifold(const AbstractSphere& sphere);

class FacePoset {
 public:
  /// Rank -1 for the empty face; std::nullopt for non-faces.
  std::optional<int> dim(const VertexSet& face) const;
  bool is_face(const VertexSet& face) const { return rank_.count(face) > 0; }
  const std::map<VertexSet, int>& faces() const { return rank_; }
  std::size_t count(int dim) const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Smallest face containing `set`: the intersection of all facets
  /// containing it, or nullopt when no facet does.
  std::optional<VertexSet> closure(const VertexSet& set) const;

 private:
  friend FacePoset compute_faces(const AbstractSphere& sphere);
  std::map<VertexSet, int> rank_;
  std::vector<VertexSet> facets_;
  std::vector<std::string> warnings_;
};

FacePoset compute_faces(const AbstractSphere& sphere);

VertexSet intersect(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);

/// Greedy lowest-index search with backtracking; throws SearchFailed
/// ("no facet flag") when none exists.
std::vector<std::uint32_t> find_facet_flag(const AbstractSphere& sphere, const FacePoset& faces);

/// Order of `flag` whose prefix intersections drop one dimension per step,
/// or nullopt. With `partial` only strict set containment is required.
std::optional<std::vector<std::uint32_t>> order_flag(const AbstractSphere& sphere, const FacePoset& faces,
                                                     const std::vector<std::uint32_t>& flag, bool partial);

/// Throws InvalidInput when the facets cannot be ordered into a flag.
void check_flag(const AbstractSphere& sphere, const FacePoset& faces, const std::vector<std::uint32_t>& flag,
                bool partial = false);

/// d vertices of the facet forming a flag of vertices. Simplicial facets
/// return their input order. Throws SearchFailed ("no facet basis").
std::vector<std::uint32_t> facet_basis(const AbstractSphere& sphere, const FacePoset& faces,
                                       std::uint32_t facet);

/// Every vertex-flag basis of the facet, one per distinct vertex set, in
/// discovery order (the first equals facet_basis).
std::vector<std::vector<std::uint32_t>> all_facet_bases(const AbstractSphere& sphere, const FacePoset& faces,
                                                        std::uint32_t facet, std::size_t limit = 64);

}  // namespace slackcert
