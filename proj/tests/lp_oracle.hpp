#pragma once

// Brute-force reference for the certificate LP: the system c >= 0, M c = 0,
// sum(c) = 1 is feasible iff some column support S gives a unique solution
// of [M_S; 1] c_S = (0, 1) that is nonnegative.

#include "slackcert/lp.hpp"

#include <optional>
#include <random>
#include <vector>

namespace lp_oracle {

using slackcert::Rational;
using Dense = std::vector<std::vector<Rational>>;

// Unique solution of a (possibly overdetermined) system, if any.
inline std::optional<std::vector<Rational>> solve_unique(Dense a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;  // free column: not unique
    std::swap(a[p], a[rank]);
    std::swap(b[p], b[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t t = c; t < cols; ++t) a[r][t] -= f * a[rank][t];
      b[r] -= f * b[rank];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (b[r] != 0) return std::nullopt;  // inconsistent
  }
  std::vector<Rational> x(cols);
  for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = b[r] / a[r][pivot_col[r]];
  return x;
}

inline bool feasible(const Dense& m, std::size_t cols) {
  const std::size_t rows = m.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << cols); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t c = 0; c < cols; ++c) {
      if (mask >> c & 1) support.push_back(c);
    }
    Dense a(rows + 1, std::vector<Rational>(support.size()));
    std::vector<Rational> b(rows + 1);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < support.size(); ++k) a[r][k] = m[r][support[k]];
    }
    for (std::size_t k = 0; k < support.size(); ++k) a[rows][k] = 1;
    b[rows] = 1;
    auto x = solve_unique(a, b);
    if (!x) continue;
    bool nonnegative = true;
    for (const auto& v : *x) nonnegative = nonnegative && v >= 0;
    if (nonnegative) return true;
  }
  return false;
}

struct Instance {
  Dense dense;
  slackcert::SparseRationalMatrix sparse{0, 0};
};

// Sparse random instance; about half are built around a planted solution.
inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_rows(1, 8);
  std::uniform_int_distribution<int> dim_cols(1, 6);
  std::uniform_int_distribution<int> value(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::bernoulli_distribution dense_entry(0.45);
  std::bernoulli_distribution plant(0.5);
  const std::size_t rows = dim_rows(rng);
  const std::size_t cols = dim_cols(rng);
  Dense m(rows, std::vector<Rational>(cols));
  for (auto& row : m) {
    for (auto& v : row) {
      if (dense_entry(rng)) v = Rational(value(rng), den(rng));
    }
  }
  if (plant(rng) && cols >= 2) {
    // Make the last column a negative combination of the others.
    std::uniform_int_distribution<int> weight(0, 3);
    std::vector<Rational> w(cols - 1);
    for (auto& x : w) x = weight(rng);
    for (auto& row : m) {
      Rational s = 0;
      for (std::size_t c = 0; c + 1 < cols; ++c) s += w[c] * row[c];
      row[cols - 1] = -s;
    }
  }
  Instance inst{m, slackcert::SparseRationalMatrix(rows, cols)};
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) inst.sparse.set(r, c, m[r][c]);
  }
  return inst;
}

}  // namespace lp_oracle
