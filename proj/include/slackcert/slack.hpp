#pragma once

// Reduced and parametrized slack matrices.
//
// The reduced matrix has one column per flag facet (columns are named by
// flag position, so the variable x_{i,c} sits in row i, flag column c). A
// parametrized entry is the determinant det[u_{B(1)}; ...; u_{B(d)}; u_i] of
// reduced rows, multiplied by the column's orientation sign.

#include "slackcert/combinatorics.hpp"
#include "slackcert/polynomial.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slackcert {

enum class Cell : std::uint8_t { Zero, One, Var };

struct SlackColumn {
  std::uint32_t facet = 0;
  std::vector<std::uint32_t> basis;
  /// Extra column from an alternative basis of `facet`.
  bool redundant = false;

  friend bool operator==(const SlackColumn&, const SlackColumn&) = default;
};

struct ReducedSlackMatrix {
  std::uint32_t rows = 0;
  std::vector<SlackColumn> columns;
  std::vector<std::vector<Cell>> cells;  // [row][column]
  bool homogeneous = true;

  std::size_t cols() const { return columns.size(); }
  Polynomial entry(std::uint32_t row, std::uint32_t col) const;
  PolynomialMatrix polynomials() const;
  /// Var cells in row-major order.
  std::vector<Var> variables() const;
  std::size_t count(Cell kind) const;
};

/// Columns in flag order; `bases[c]` is the basis of flag facet c.
ReducedSlackMatrix build_reduced(const AbstractSphere& sphere, const std::vector<std::uint32_t>& flag,
                                 const std::vector<std::vector<std::uint32_t>>& bases);

/// Dehomogenized entries are D = diag(r) S^H diag(c): a free variable of
/// the dehomogenized matrix stands for x * r_i * c_j, a fixed one for 1.
/// Scales are Laurent monomials in the fixed variables only.
struct ScalingLedger {
  std::vector<LaurentMonomial> row_scale;
  std::vector<LaurentMonomial> col_scale;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fixed;  // (row, col)

  LaurentMonomial variable_scale(Var v) const { return row_scale.at(v.row) * col_scale.at(v.col); }
  /// Values of the dehomogenized variables at a homogeneous point.
  Assignment dehomogenize_point(const Assignment& homogeneous) const;
};

/// Fixes a breadth-first spanning forest of the nonzero entries to one, or
/// the user's `fixed` entries after checking them for cycles and zeros.
std::pair<ReducedSlackMatrix, ScalingLedger> dehomogenize(
    const ReducedSlackMatrix& homogeneous,
    const std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& fixed = std::nullopt);

struct ParametrizedSlackMatrix {
  std::uint32_t rows = 0;
  std::vector<SlackColumn> columns;
  /// Unsigned determinants, [row][column].
  std::vector<std::vector<Polynomial>> raw;
  /// +1, -1, or 0 while unknown.
  std::vector<int> signs;
  /// Vertex sets of the column facets, for incidence tests.
  std::vector<VertexSet> facet_sets;
  std::vector<std::string> warnings;

  std::size_t cols() const { return columns.size(); }
  bool incident(std::uint32_t row, std::uint32_t col) const;
  /// raw * sign; throws InternalError when the column is unsigned.
  Polynomial entry(std::uint32_t row, std::uint32_t col) const;
};

/// One column per entry of `columns`; entries are exact determinants.
/// Entries of non-simplicial facets outside the flag are not trusted to
/// vanish on incidences, and a warning says so.
ParametrizedSlackMatrix reconstruct(const ReducedSlackMatrix& reduced, const AbstractSphere& sphere,
                                    const std::vector<SlackColumn>& columns,
                                    const std::vector<std::uint32_t>& flag);

struct OrientationResult {
  std::vector<std::uint32_t> unsigned_columns;
  std::size_t rounds = 0;
};

/// Signs columns from known-positive polynomials, starting with the free
/// variables and any preset signs in S.signs. Leaves unresolved columns at 0.
OrientationResult infer_orientation(ParametrizedSlackMatrix& s, const std::vector<Var>& positive_variables);

/// lambda with S_{i,j}(x') = lambda * S^H_{i,j}(x) for raw entries.
LaurentMonomial entry_scale(const ScalingLedger& ledger, const SlackColumn& column, std::uint32_t row);

struct RehomogenizedEntry {
  Polynomial homogeneous;
  LaurentMonomial scale;  // lambda as in entry_scale
};

RehomogenizedEntry rehomogenize_entry(const ScalingLedger& ledger, const ParametrizedSlackMatrix& homogeneous,
                                      std::uint32_t row, std::uint32_t col);

struct ModelOptions {
  std::optional<std::vector<std::uint32_t>> flag;
  std::map<std::uint32_t, std::vector<std::uint32_t>> bases;
  std::map<std::uint32_t, int> orientation;
  std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> fixed;  // (vertex, facet)
  std::map<std::uint32_t, std::vector<std::vector<std::uint32_t>>> redundant;
  bool redundant_bases = false;
  bool partial = false;
  bool homogeneous = true;
};

ModelOptions model_options(const SphereOverrides& overrides);

/// Everything derived from a sphere and a flag.
struct SlackModel {
  AbstractSphere sphere;
  FacePoset faces;
  std::vector<std::uint32_t> flag;
  ReducedSlackMatrix homogeneous_reduced;
  ReducedSlackMatrix reduced;
  ScalingLedger ledger;
  /// Dehomogenized and oriented.
  ParametrizedSlackMatrix matrix;
  /// Same columns and signs, homogeneous entries (when requested).
  std::optional<ParametrizedSlackMatrix> homogeneous;
  std::vector<std::string> warnings;

  /// Column index of flag position c.
  std::uint32_t flag_column(std::uint32_t c) const { return flag.at(c); }
};

/// Throws SearchFailed ("orientation inference stalled") when a non-redundant
/// column cannot be signed; unsigned redundant columns are dropped.
SlackModel build_slack_model(const AbstractSphere& sphere, const ModelOptions& options);

/// Row-per-vertex text layout: 0, 1 or x for reduced matrices.
std::string render_reduced(const ReducedSlackMatrix& m);

}  // namespace slackcert
