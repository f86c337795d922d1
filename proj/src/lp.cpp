#include "slackcert/lp.hpp"

#include "slackcert/error.hpp"

#include <algorithm>
#include <ostream>

namespace slackcert {

SparseRationalMatrix::SparseRationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

void SparseRationalMatrix::set(std::uint32_t row, std::uint32_t col, const Rational& value) {
  if (row >= rows_ || col >= columns_.size()) throw InvalidInput("matrix index out of range");
  auto& c = columns_[col];
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, std::uint32_t r) { return e.first < r; });
  if (it != c.end() && it->first == row) {
    if (value == 0) {
      c.erase(it);
    } else {
      it->second = value;
    }
  } else if (value != 0) {
    c.insert(it, Entry{row, value});
  }
}

void SparseRationalMatrix::set_column(std::uint32_t col, std::vector<Entry> entries) {
  if (col >= columns_.size()) throw InvalidInput("matrix index out of range");
  std::erase_if(entries, [](const Entry& e) { return e.second == 0; });
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t t = 0; t < entries.size(); ++t) {
    if (entries[t].first >= rows_) throw InvalidInput("matrix index out of range");
    if (t > 0 && entries[t].first == entries[t - 1].first) throw InvalidInput("duplicate matrix entry");
  }
  columns_[col] = std::move(entries);
}

Rational SparseRationalMatrix::at(std::uint32_t row, std::uint32_t col) const {
  const auto& c = columns_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, std::uint32_t r) { return e.first < r; });
  return (it != c.end() && it->first == row) ? it->second : Rational(0);
}

std::size_t SparseRationalMatrix::nonzeros() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.size();
  return total;
}

std::vector<Rational> SparseRationalMatrix::multiply(const std::vector<Entry>& x) const {
  std::vector<Rational> out(rows_);
  for (const auto& [col, value] : x) {
    for (const auto& [row, a] : columns_.at(col)) out[row] += a * value;
  }
  return out;
}

namespace {

using Row = std::vector<std::pair<std::uint32_t, Rational>>;

const Rational* find_entry(const Row& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::uint32_t c) { return e.first < c; });
  return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

// target -= factor * source
void axpy(Row& target, const Rational& factor, const Row& source) {
  Row out;
  out.reserve(target.size() + source.size());
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() || b != source.end()) {
    if (b == source.end() || (a != target.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == target.end() || b->first < a->first) {
      out.emplace_back(b->first, -(factor * b->second));
      ++b;
    } else {
      Rational v = a->second - factor * b->second;
      if (v != 0) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  target = std::move(out);
}

class Tableau {
 public:
  Tableau(std::vector<Row> rows, std::vector<Rational> rhs, std::size_t cols)
      : rows_(std::move(rows)), rhs_(std::move(rhs)), cols_(cols), reduced_(cols) {
    // Phase-1 objective w = sum of artificials = z + sum_j d_j x_j.
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      basic_.push_back(static_cast<std::uint32_t>(cols_ + r));
      z_ += rhs_[r];
      for (const auto& [c, a] : rows_[r]) reduced_[c] -= a;
    }
  }

  // Returns false at optimality.
  bool step(std::ostream* dump, std::size_t pivot_number) {
    std::size_t enter = cols_;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (reduced_[c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter == cols_) return false;
    const auto e = static_cast<std::uint32_t>(enter);

    std::size_t leave = rows_.size();
    Rational best_ratio;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational* a = find_entry(rows_[r], e);
      if (a == nullptr || *a <= 0) continue;
      Rational ratio = rhs_[r] / *a;
      if (leave == rows_.size() || ratio < best_ratio || (ratio == best_ratio && basic_[r] < basic_[leave])) {
        leave = r;
        best_ratio = std::move(ratio);
      }
    }
    // Phase 1 is bounded below by zero, so a ratio row always exists.
    if (leave == rows_.size()) throw InternalError("unbounded phase-1 pivot");

    if (dump != nullptr) {
      *dump << "pivot " << pivot_number << ": enter c" << enter + 1 << " leave "
            << (basic_[leave] < cols_ ? "c" : "a") << (basic_[leave] < cols_ ? basic_[leave] : basic_[leave] - cols_) + 1
            << " ratio " << to_string(best_ratio) << " w " << to_string(z_) << "\n";
    }

    Rational pivot = *find_entry(rows_[leave], e);
    for (auto& entry : rows_[leave]) entry.second /= pivot;
    rhs_[leave] /= pivot;
    const Row& prow = rows_[leave];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == leave) continue;
      const Rational* a = find_entry(rows_[r], e);
      if (a == nullptr) continue;
      Rational factor = *a;
      axpy(rows_[r], factor, prow);
      rhs_[r] -= factor * rhs_[leave];
    }
    Rational de = reduced_[enter];
    for (const auto& [c, a] : prow) reduced_[c] -= de * a;
    z_ += de * rhs_[leave];
    basic_[leave] = e;
    return true;
  }

  const Rational& objective() const { return z_; }

  std::vector<std::pair<std::uint32_t, Rational>> solution() const {
    std::vector<std::pair<std::uint32_t, Rational>> out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basic_[r] < cols_ && rhs_[r] != 0) out.emplace_back(basic_[r], rhs_[r]);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  void print(std::ostream& out) const {
    out << "tableau " << rows_.size() << " rows x " << cols_ << " columns, w = " << to_string(z_) << "\n";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out << (basic_[r] < cols_ ? "c" : "a") << (basic_[r] < cols_ ? basic_[r] : basic_[r] - cols_) + 1 << " = "
          << to_string(rhs_[r]) << " |";
      for (const auto& [c, a] : rows_[r]) out << " c" << c + 1 << ":" << to_string(a);
      out << "\n";
    }
  }

 private:
  std::vector<Row> rows_;
  std::vector<Rational> rhs_;
  std::size_t cols_;
  std::vector<Rational> reduced_;
  std::vector<std::uint32_t> basic_;
  Rational z_ = 0;
};

}  // namespace

LpOutcome solve_certificate_lp(const SparseRationalMatrix& m, const LpOptions& options) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  LpOutcome outcome;
  if (cols == 0) return outcome;

  // Row-major view of the constraint rows.
  std::vector<Row> by_row(rows);
  for (std::uint32_t c = 0; c < cols; ++c) {
    for (const auto& [r, a] : m.column(c)) by_row[r].emplace_back(c, a);
  }

  // A row whose active coefficients share one sign forces them to zero.
  std::vector<bool> active(cols, true);
  if (options.presolve) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& row : by_row) {
        bool pos = false;
        bool neg = false;
        for (const auto& [c, a] : row) {
          if (!active[c]) continue;
          (a > 0 ? pos : neg) = true;
        }
        if (pos == neg) continue;
        for (const auto& [c, a] : row) {
          if (active[c]) {
            active[c] = false;
            changed = true;
          }
        }
      }
    }
  }
  std::vector<std::uint32_t> original;
  std::vector<std::uint32_t> local(cols, 0);
  for (std::uint32_t c = 0; c < cols; ++c) {
    if (active[c]) {
      local[c] = static_cast<std::uint32_t>(original.size());
      original.push_back(c);
    }
  }
  outcome.active_cols = original.size();
  if (original.empty()) return outcome;

  std::vector<Row> tableau_rows;
  std::vector<Rational> rhs;
  for (const auto& row : by_row) {
    Row t;
    for (const auto& [c, a] : row) {
      if (active[c]) t.emplace_back(local[c], a);
    }
    if (t.empty()) continue;
    tableau_rows.push_back(std::move(t));
    rhs.emplace_back(0);
  }
  outcome.active_rows = tableau_rows.size();
  Row normalization;
  for (std::uint32_t c = 0; c < original.size(); ++c) normalization.emplace_back(c, Rational(1));
  tableau_rows.push_back(std::move(normalization));
  rhs.emplace_back(1);

  Tableau tableau(std::move(tableau_rows), std::move(rhs), original.size());
  while (true) {
    if (options.deadline && outcome.pivots % 64 == 0 && std::chrono::steady_clock::now() > *options.deadline) {
      throw TimeLimitExceeded("time limit reached after " + std::to_string(outcome.pivots) + " LP pivots");
    }
    if (!tableau.step(options.dump, outcome.pivots + 1)) break;
    ++outcome.pivots;
  }
  if (options.dump != nullptr) tableau.print(*options.dump);

  if (tableau.objective() < 0) throw InternalError("negative phase-1 objective");
  if (tableau.objective() != 0) {
    outcome.objective = 1;
    return outcome;
  }

  outcome.status = LpStatus::CertificateFound;
  outcome.objective = 0;
  Rational total = 0;
  for (auto& [c, value] : tableau.solution()) {
    if (value < 0) throw InternalError("negative LP weight");
    total += value;
    outcome.weights.emplace_back(original[c], value);
  }
  if (total != 1) throw InternalError("LP weights do not sum to one");
  for (const auto& v : m.multiply(outcome.weights)) {
    if (v != 0) throw InternalError("LP solution leaves a nonzero residual");
  }
  return outcome;
}

std::vector<std::pair<std::uint32_t, Rational>> extract_support(const LpOutcome& outcome) {
  if (outcome.status != LpStatus::CertificateFound) throw InvalidInput("no certificate to extract");
  return outcome.weights;
}

}  // namespace slackcert
