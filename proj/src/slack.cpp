#include "slackcert/slack.hpp"

#include "slackcert/error.hpp"
#include "slackcert/parallel.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace slackcert {

// ----------------------------------------------------------- reduced matrix

Polynomial ReducedSlackMatrix::entry(std::uint32_t row, std::uint32_t col) const {
  switch (cells.at(row).at(col)) {
    case Cell::Zero:
      return Polynomial{};
    case Cell::One:
      return Polynomial::constant(1);
    case Cell::Var:
      break;
  }
  return Polynomial::variable(Var{row, col});
}

PolynomialMatrix ReducedSlackMatrix::polynomials() const {
  PolynomialMatrix out(rows);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t c = 0; c < cols(); ++c) out[i].push_back(entry(i, c));
  }
  return out;
}

std::vector<Var> ReducedSlackMatrix::variables() const {
  std::vector<Var> out;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t c = 0; c < cols(); ++c) {
      if (cells[i][c] == Cell::Var) out.push_back(Var{i, c});
    }
  }
  return out;
}

std::size_t ReducedSlackMatrix::count(Cell kind) const {
  std::size_t total = 0;
  for (const auto& row : cells) total += static_cast<std::size_t>(std::count(row.begin(), row.end(), kind));
  return total;
}

ReducedSlackMatrix build_reduced(const AbstractSphere& sphere, const std::vector<std::uint32_t>& flag,
                                 const std::vector<std::vector<std::uint32_t>>& bases) {
  if (flag.size() != sphere.dimension + 1 || bases.size() != flag.size()) {
    throw InvalidInput("flag must list " + std::to_string(sphere.dimension + 1) + " facets with bases");
  }
  ReducedSlackMatrix m;
  m.rows = sphere.num_vertices;
  for (std::size_t c = 0; c < flag.size(); ++c) m.columns.push_back(SlackColumn{flag[c], bases[c], false});
  m.cells.assign(m.rows, std::vector<Cell>(flag.size(), Cell::Var));
  for (std::uint32_t i = 0; i < m.rows; ++i) {
    for (std::size_t c = 0; c < flag.size(); ++c) {
      if (sphere.contains(flag[c], i)) m.cells[i][c] = Cell::Zero;
    }
  }
  return m;
}

// --------------------------------------------------------- dehomogenization

Assignment ScalingLedger::dehomogenize_point(const Assignment& homogeneous) const {
  Assignment out;
  for (const auto& [v, value] : homogeneous) {
    bool is_fixed = std::find(fixed.begin(), fixed.end(), std::make_pair(v.row, v.col)) != fixed.end();
    if (is_fixed) continue;
    out[v] = value * evaluate(variable_scale(v), homogeneous);
  }
  return out;
}

std::pair<ReducedSlackMatrix, ScalingLedger> dehomogenize(
    const ReducedSlackMatrix& homogeneous,
    const std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& fixed) {
  const std::uint32_t n = homogeneous.rows;
  const auto cols = static_cast<std::uint32_t>(homogeneous.cols());
  auto nonzero = [&](std::uint32_t i, std::uint32_t c) { return homogeneous.cells[i][c] != Cell::Zero; };

  // Node ids: rows 0..n-1, columns n..n+cols-1.
  std::vector<std::vector<std::uint32_t>> adjacency(n + cols);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  if (fixed) {
    std::vector<std::uint32_t> parent(n + cols);
    std::iota(parent.begin(), parent.end(), 0U);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& [i, c] : *fixed) {
      std::string where = "fixed entry (" + std::to_string(i + 1) + "," + std::to_string(c + 1) + ")";
      if (i >= n || c >= cols) throw InvalidInput(where + " is outside the reduced matrix");
      if (!nonzero(i, c)) throw InvalidInput(where + " is a structural zero");
      auto a = find(i);
      auto b = find(n + c);
      if (a == b) throw InvalidInput(where + " closes a cycle of fixed entries");
      parent[a] = b;
      edges.emplace_back(i, c);
    }
  } else {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        if (nonzero(i, c)) edges.emplace_back(i, c);
      }
    }
  }
  for (const auto& [i, c] : edges) {
    adjacency[i].push_back(n + c);
    adjacency[n + c].push_back(i);
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());

  ReducedSlackMatrix out = homogeneous;
  out.homogeneous = false;
  ScalingLedger ledger;
  ledger.row_scale.assign(n, LaurentMonomial{});
  ledger.col_scale.assign(cols, LaurentMonomial{});

  std::vector<bool> seen(n + cols, false);
  for (std::uint32_t root = 0; root < n + cols; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::deque<std::uint32_t> queue{root};
    while (!queue.empty()) {
      auto node = queue.front();
      queue.pop_front();
      for (auto next : adjacency[node]) {
        if (seen[next]) continue;
        seen[next] = true;
        queue.push_back(next);
        if (node < n) {
          std::uint32_t i = node;
          std::uint32_t c = next - n;
          LaurentMonomial x(Monomial(Var{i, c}));
          ledger.col_scale[c] = (x * ledger.row_scale[i]).inverse();
          ledger.fixed.emplace_back(i, c);
        } else {
          std::uint32_t i = next;
          std::uint32_t c = node - n;
          LaurentMonomial x(Monomial(Var{i, c}));
          ledger.row_scale[i] = (x * ledger.col_scale[c]).inverse();
          ledger.fixed.emplace_back(i, c);
        }
      }
    }
  }
  std::sort(ledger.fixed.begin(), ledger.fixed.end());
  for (const auto& [i, c] : ledger.fixed) out.cells[i][c] = Cell::One;
  return {std::move(out), std::move(ledger)};
}

// ---------------------------------------------------------- reconstruction

bool ParametrizedSlackMatrix::incident(std::uint32_t row, std::uint32_t col) const {
  const auto& s = facet_sets.at(col);
  return std::binary_search(s.begin(), s.end(), row);
}

Polynomial ParametrizedSlackMatrix::entry(std::uint32_t row, std::uint32_t col) const {
  int sign = signs.at(col);
  if (sign == 0) throw InternalError("column " + std::to_string(col + 1) + " has no orientation");
  const Polynomial& p = raw.at(row).at(col);
  return sign > 0 ? p : -p;
}

ParametrizedSlackMatrix reconstruct(const ReducedSlackMatrix& reduced, const AbstractSphere& sphere,
                                    const std::vector<SlackColumn>& columns,
                                    const std::vector<std::uint32_t>& flag) {
  const std::uint32_t d = sphere.dimension;
  if (reduced.cols() != d + 1) throw InvalidInput("reduced matrix must have d+1 columns");
  ParametrizedSlackMatrix s;
  s.rows = reduced.rows;
  s.columns = columns;
  s.signs.assign(columns.size(), 0);
  s.raw.assign(s.rows, std::vector<Polynomial>(columns.size()));
  for (const auto& col : columns) {
    if (col.basis.size() != d) {
      throw InvalidInput("missing basis for facet " + std::to_string(col.facet + 1));
    }
    s.facet_sets.push_back(sphere.facet_set(col.facet));
  }
  std::set<std::uint32_t> warned;
  for (const auto& col : columns) {
    bool in_flag = std::find(flag.begin(), flag.end(), col.facet) != flag.end();
    if (!sphere.is_simplicial(col.facet) && !in_flag && warned.insert(col.facet).second) {
      s.warnings.push_back("facet " + std::to_string(col.facet + 1) +
                           " is not simplicial and lies outside the flag; its incidence zeros are not enforced");
    }
  }

  const PolynomialMatrix u = reduced.polynomials();
  parallel_for(columns.size(), [&](std::size_t j) {
    // Laplace along the last row: S_{i,j} = sum_c u_i[c] * cofactor_c.
    std::vector<Polynomial> cofactor(d + 1);
    for (std::uint32_t c = 0; c <= d; ++c) {
      PolynomialMatrix minor;
      for (auto b : columns[j].basis) {
        std::vector<Polynomial> row;
        for (std::uint32_t t = 0; t <= d; ++t) {
          if (t != c) row.push_back(u[b][t]);
        }
        minor.push_back(std::move(row));
      }
      Polynomial det = det_symbolic(minor);
      cofactor[c] = ((d + c) % 2 == 0) ? det : -det;
    }
    for (std::uint32_t i = 0; i < s.rows; ++i) {
      Polynomial value;
      for (std::uint32_t c = 0; c <= d; ++c) {
        if (!u[i][c].is_zero() && !cofactor[c].is_zero()) value += u[i][c] * cofactor[c];
      }
      s.raw[i][j] = std::move(value);
    }
  });
  return s;
}

// ------------------------------------------------------------- orientation

namespace {

// Sign of `p` when it is a constant times a product of members of
// `positives`, up to monomial factors; 0 otherwise.
int sign_modulo(const Polynomial& p, const std::vector<Polynomial>& positives) {
  if (p.is_zero()) return 0;
  Polynomial rest = factor_monomial(p).cofactor;
  bool progress = true;
  while (!rest.is_constant() && progress) {
    progress = false;
    for (const auto& q : positives) {
      if (q.degree() > rest.degree()) continue;
      if (auto quotient = divide_exact(rest, q)) {
        rest = factor_monomial(*quotient).cofactor;
        progress = true;
        break;
      }
    }
  }
  if (!rest.is_constant()) return 0;
  return rest.constant_term() > 0 ? 1 : -1;
}

void learn_column(const ParametrizedSlackMatrix& s, std::uint32_t col, std::vector<Polynomial>& positives,
                  std::set<std::string>& known) {
  for (std::uint32_t i = 0; i < s.rows; ++i) {
    if (s.incident(i, col) || s.raw[i][col].is_zero()) continue;
    Polynomial cof = factor_monomial(s.entry(i, col)).cofactor;
    if (cof.is_constant()) continue;
    if (known.insert(to_string(cof)).second) positives.push_back(std::move(cof));
  }
}

}  // namespace

OrientationResult infer_orientation(ParametrizedSlackMatrix& s, const std::vector<Var>& positive_variables) {
  std::vector<Polynomial> positives;
  std::set<std::string> known;
  // Variables only matter as monomial factors, which factor_monomial strips;
  // they are kept so the known set mirrors its definition.
  for (auto v : positive_variables) {
    Polynomial p = Polynomial::variable(v);
    if (known.insert(to_string(p)).second) positives.push_back(std::move(p));
  }
  for (std::uint32_t j = 0; j < s.cols(); ++j) {
    if (s.signs[j] != 0) learn_column(s, j, positives, known);
  }

  OrientationResult result;
  bool progress = true;
  while (progress) {
    progress = false;
    ++result.rounds;
    for (std::uint32_t j = 0; j < s.cols(); ++j) {
      if (s.signs[j] != 0) continue;
      for (std::uint32_t i = 0; i < s.rows; ++i) {
        if (s.incident(i, j)) continue;
        int sign = sign_modulo(s.raw[i][j], positives);
        if (sign == 0) continue;
        s.signs[j] = sign;
        learn_column(s, j, positives, known);
        progress = true;
        break;
      }
    }
  }
  for (std::uint32_t j = 0; j < s.cols(); ++j) {
    if (s.signs[j] == 0) result.unsigned_columns.push_back(j);
  }
  return result;
}

// -------------------------------------------------------- rehomogenization

LaurentMonomial entry_scale(const ScalingLedger& ledger, const SlackColumn& column, std::uint32_t row) {
  LaurentMonomial scale = ledger.row_scale.at(row);
  for (auto b : column.basis) scale = scale * ledger.row_scale.at(b);
  for (const auto& c : ledger.col_scale) scale = scale * c;
  return scale;
}

RehomogenizedEntry rehomogenize_entry(const ScalingLedger& ledger, const ParametrizedSlackMatrix& homogeneous,
                                      std::uint32_t row, std::uint32_t col) {
  return RehomogenizedEntry{homogeneous.entry(row, col), entry_scale(ledger, homogeneous.columns.at(col), row)};
}

// ------------------------------------------------------------------- model

ModelOptions model_options(const SphereOverrides& overrides) {
  ModelOptions o;
  o.flag = overrides.flag;
  o.bases = overrides.bases;
  o.orientation = overrides.orientation;
  o.fixed = overrides.fixed;
  o.redundant = overrides.redundant;
  o.partial = overrides.partial;
  return o;
}

namespace {

std::string list_one_based(const std::vector<std::uint32_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x + 1);
  return out;
}

void drop_columns(ParametrizedSlackMatrix& s, const std::vector<std::uint32_t>& drop) {
  std::vector<bool> gone(s.cols(), false);
  for (auto j : drop) gone[j] = true;
  auto keep = [&](auto& vec) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (!gone[j]) vec[w++] = std::move(vec[j]);
    }
    vec.resize(w);
  };
  keep(s.columns);
  keep(s.signs);
  keep(s.facet_sets);
  for (auto& row : s.raw) keep(row);
}

}  // namespace

SlackModel build_slack_model(const AbstractSphere& sphere, const ModelOptions& options) {
  validate_sphere(sphere, options.partial);
  SlackModel model;
  model.sphere = sphere;
  model.faces = compute_faces(sphere);
  if (!options.partial) {
    for (const auto& w : model.faces.warnings()) model.warnings.push_back(w);
  }

  if (options.flag) {
    check_flag(sphere, model.faces, *options.flag, options.partial);
    model.flag = *options.flag;
  } else {
    model.flag = find_facet_flag(sphere, model.faces);
  }

  const auto m = static_cast<std::uint32_t>(sphere.num_facets());
  std::vector<SlackColumn> columns;
  for (std::uint32_t j = 0; j < m; ++j) {
    auto it = options.bases.find(j);
    columns.push_back(SlackColumn{j, it != options.bases.end() ? it->second : facet_basis(sphere, model.faces, j),
                                  false});
  }
  // Redundant columns: explicit ones first, then every other vertex-flag
  // basis of the non-simplicial facets when requested.
  std::set<std::pair<std::uint32_t, VertexSet>> used;
  for (const auto& col : columns) {
    VertexSet key = col.basis;
    std::sort(key.begin(), key.end());
    used.emplace(col.facet, key);
  }
  auto add_redundant = [&](std::uint32_t j, const std::vector<std::uint32_t>& basis) {
    VertexSet key = basis;
    std::sort(key.begin(), key.end());
    if (used.emplace(j, key).second) columns.push_back(SlackColumn{j, basis, true});
  };
  for (const auto& [j, list] : options.redundant) {
    for (const auto& b : list) add_redundant(j, b);
  }
  if (options.redundant_bases) {
    for (std::uint32_t j = 0; j < m; ++j) {
      if (sphere.is_simplicial(j)) continue;
      for (const auto& b : all_facet_bases(sphere, model.faces, j)) add_redundant(j, b);
    }
  }

  std::vector<std::vector<std::uint32_t>> flag_bases;
  for (auto j : model.flag) flag_bases.push_back(columns[j].basis);
  model.homogeneous_reduced = build_reduced(sphere, model.flag, flag_bases);

  std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> fixed;
  if (options.fixed) {
    fixed.emplace();
    for (const auto& [vertex, facet] : *options.fixed) {
      auto pos = std::find(model.flag.begin(), model.flag.end(), facet);
      if (pos == model.flag.end()) {
        throw InvalidInput("fixed entry (" + std::to_string(vertex + 1) + "," + std::to_string(facet + 1) +
                           ") is not in a flag column");
      }
      fixed->emplace_back(vertex, static_cast<std::uint32_t>(pos - model.flag.begin()));
    }
  }
  std::tie(model.reduced, model.ledger) = dehomogenize(model.homogeneous_reduced, fixed);

  model.matrix = reconstruct(model.reduced, sphere, columns, model.flag);
  for (const auto& w : model.matrix.warnings) model.warnings.push_back(w);
  for (const auto& [j, sign] : options.orientation) model.matrix.signs.at(j) = sign;

  auto orientation = infer_orientation(model.matrix, model.reduced.variables());
  std::vector<std::uint32_t> stalled;
  std::vector<std::uint32_t> dropped;
  for (auto j : orientation.unsigned_columns) {
    (model.matrix.columns[j].redundant ? dropped : stalled).push_back(j);
  }
  if (!stalled.empty()) {
    std::vector<std::uint32_t> facets;
    for (auto j : stalled) facets.push_back(model.matrix.columns[j].facet);
    throw SearchFailed("orientation inference stalled; unsigned facets: " + list_one_based(facets) +
                       " (supply --orientation)");
  }
  if (!dropped.empty()) {
    for (auto j : dropped) {
      model.warnings.push_back("dropped redundant column of facet " +
                               std::to_string(model.matrix.columns[j].facet + 1) + ": orientation unknown");
    }
    drop_columns(model.matrix, dropped);
    std::vector<SlackColumn> kept = model.matrix.columns;
    columns = kept;
  }

  if (options.homogeneous) {
    model.homogeneous = reconstruct(model.homogeneous_reduced, sphere, columns, model.flag);
    model.homogeneous->signs = model.matrix.signs;
  }
  return model;
}

std::string render_reduced(const ReducedSlackMatrix& m) {
  std::ostringstream out;
  for (std::uint32_t i = 0; i < m.rows; ++i) {
    for (std::uint32_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      switch (m.cells[i][c]) {
        case Cell::Zero:
          out << '0';
          break;
        case Cell::One:
          out << '1';
          break;
        case Cell::Var:
          out << 'x';
          break;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace slackcert
