#pragma once

// Certificate search: the pool of positive products, its linearization, the
// LP, symbolic verification, rehomogenization and the translation into a
// final polynomial in Plücker coordinates.

#include "slackcert/lp.hpp"
#include "slackcert/polynomial.hpp"
#include "slackcert/slack.hpp"

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slackcert {

struct HeuristicConfig {
  /// Vertex avoidance: drop entries touching these vertices.
  std::vector<std::uint32_t> avoid;
  /// Vertex fixing: keep entries (i, F) with fix ⊆ {i} ∪ F.
  std::vector<std::uint32_t> fix;
  /// Replace each entry by its cofactor after removing monomial content.
  bool monomial_simplify = false;
  /// Add columns for every alternative basis of non-simplicial facets.
  bool redundant_bases = false;

  friend bool operator==(const HeuristicConfig&, const HeuristicConfig&) = default;
};

/// Throws InvalidInput when avoid and fix overlap.
void validate(const HeuristicConfig& h);

enum class FactorKind : std::uint8_t { Entry, Cofactor, Variable };

/// Entry and Cofactor: row i, parametrized column j. Variable: x_{row,col}
/// of the reduced matrix.
struct Factor {
  FactorKind kind = FactorKind::Entry;
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend auto operator<=>(const Factor&, const Factor&) = default;
};

std::string to_string(const Factor& f);

/// Value of a factor in the dehomogenized oriented matrix.
Polynomial factor_polynomial(const Factor& f, const ParametrizedSlackMatrix& s);

struct PoolMember {
  Factor factor;
  Polynomial polynomial;
};

struct Constraint {
  std::vector<Factor> provenance;  // sorted multiset
  Polynomial polynomial;
};

struct ConstraintSet {
  std::uint32_t k = 1;
  std::uint32_t l = 1;
  HeuristicConfig heuristics;
  std::vector<PoolMember> pool;
  std::size_t entry_members = 0;
  std::size_t variable_members = 0;
  std::vector<Constraint> items;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// `variables` are the free variables of the reduced matrix; they join the
/// pool regardless of heuristics. Throws SearchFailed ("no constraints").
ConstraintSet generate_constraints(const ParametrizedSlackMatrix& s, const std::vector<Var>& variables,
                                   std::uint32_t k, std::uint32_t l, const HeuristicConfig& h,
                                   Deadline deadline = std::nullopt);

struct Linearization {
  SparseRationalMatrix matrix{0, 0};
  std::vector<Monomial> monomials;  // row labels, grevlex descending
};

Linearization linearize(const ConstraintSet& constraints);

struct CertificateTerm {
  Rational weight;
  std::vector<Factor> factors;
  Polynomial polynomial;  // filled by verification
};

struct PluckerTerm {
  Rational coefficient;
  std::vector<std::vector<std::uint32_t>> coordinates;  // each of size d+1, 0-based
};

struct FinalPolynomial {
  std::uint32_t dimension = 0;
  std::uint32_t num_vertices = 0;
  std::vector<PluckerTerm> terms;
  /// Vertex sets of non-simplicial facets; the polynomial only has to vanish
  /// where each of them spans a hyperplane.
  std::vector<std::vector<std::uint32_t>> coplanar;
};

struct Certificate {
  std::uint32_t k = 0;
  std::uint32_t l = 0;
  HeuristicConfig heuristics;
  std::vector<CertificateTerm> terms;
  bool verified = false;
  std::optional<std::vector<Monomial>> homogeneous_multipliers;
  std::optional<FinalPolynomial> final_polynomial;
  /// Why the final polynomial is missing, when it is.
  std::string translation_note;
};

struct SearchStats {
  std::size_t entry_constraints = 0;
  std::size_t variable_constraints = 0;
  std::size_t products = 0;
  std::size_t monomial_rows = 0;
  std::size_t active_rows = 0;
  std::size_t active_cols = 0;
  std::size_t pivots = 0;
};

struct SearchResult {
  std::optional<Certificate> certificate;
  SearchStats stats;
};

/// Generate, linearize, solve and verify. Weights are rescaled to coprime
/// integers. A certificate that fails verification is an InternalError.
SearchResult search_certificate(const ParametrizedSlackMatrix& s, const std::vector<Var>& variables,
                                std::uint32_t k, std::uint32_t l, const HeuristicConfig& h,
                                const LpOptions& lp = {});

/// Sum of weight * product over the terms.
Polynomial certificate_residual(const Certificate& cert, const ParametrizedSlackMatrix& s);

/// Fills term polynomials, sets `verified` and returns the residual.
Polynomial verify_certificate(Certificate& cert, const ParametrizedSlackMatrix& s);

/// Per-term multipliers beta making the certificate an identity among
/// homogeneous entries; asserts that identity. Throws InternalError.
void rehomogenize(Certificate& cert, const SlackModel& model);

/// Homogeneous identity sum weight * beta * product(h) as a polynomial.
Polynomial homogeneous_residual(const Certificate& cert, const SlackModel& model);

/// Translation to Plücker coordinates; leaves final_polynomial empty and
/// sets translation_note when unavailable. Requires rehomogenize first.
void to_final_polynomial(Certificate& cert, const SlackModel& model);

/// True iff the polynomial vanishes on the maximal minors of `trials` random
/// integer n x (d+1) matrices (coefficients in [-10, 10], fixed seed). Rows of
/// each coplanar set are drawn inside a common hyperplane.
bool grassmann_numeric_check(const FinalPolynomial& fp, std::size_t trials, std::uint64_t seed = 20240611);

std::string to_string(const FinalPolynomial& fp);

}  // namespace slackcert
