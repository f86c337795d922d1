#pragma once

// Exact feasibility LP for positive combinations:
//
//   find c >= 0 with M c = 0 and sum(c) = 1.
//
// Phase-1 primal simplex over GMP rationals with Bland's rule. The optimum of
// min 1 - sum(c) subject to M c = 0, sum(c) <= 1, c >= 0 is 0 exactly when
// this system is feasible and 1 otherwise.

#include "slackcert/polynomial.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace slackcert {

class SparseRationalMatrix {
 public:
  using Entry = std::pair<std::uint32_t, Rational>;

  SparseRationalMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  /// Replaces the entry; zero erases it.
  void set(std::uint32_t row, std::uint32_t col, const Rational& value);
  /// Replaces a whole column; entries need not be sorted, zeros are dropped.
  void set_column(std::uint32_t col, std::vector<Entry> entries);
  Rational at(std::uint32_t row, std::uint32_t col) const;
  /// Column `col` as (row, value) pairs sorted by row.
  const std::vector<Entry>& column(std::uint32_t col) const { return columns_.at(col); }
  std::size_t nonzeros() const;
  /// M * x for a sparse x given as (col, value) pairs.
  std::vector<Rational> multiply(const std::vector<Entry>& x) const;

 private:
  std::size_t rows_;
  std::vector<std::vector<Entry>> columns_;
};

enum class LpStatus { CertificateFound, NoCertificate };

struct LpOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Pivot log and final tableau, when set.
  std::ostream* dump = nullptr;
  /// Drop columns forced to zero by single-signed rows before pivoting.
  bool presolve = true;
};

struct LpOutcome {
  LpStatus status = LpStatus::NoCertificate;
  /// Positive weights by column, ascending, summing to 1.
  std::vector<std::pair<std::uint32_t, Rational>> weights;
  Rational objective = 1;
  std::size_t pivots = 0;
  std::size_t active_rows = 0;
  std::size_t active_cols = 0;
};

/// Throws TimeLimitExceeded past the deadline and InternalError when the
/// exact residual check fails.
LpOutcome solve_certificate_lp(const SparseRationalMatrix& m, const LpOptions& options = {});

/// Support of a found certificate; throws InvalidInput on NoCertificate.
std::vector<std::pair<std::uint32_t, Rational>> extract_support(const LpOutcome& outcome);

}  // namespace slackcert
