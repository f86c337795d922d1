#include "slackcert/combinatorics.hpp"

#include "slackcert/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace slackcert {

using json = nlohmann::json;

bool AbstractSphere::all_simplicial() const {
  for (std::uint32_t j = 0; j < facets.size(); ++j) {
    if (!is_simplicial(j)) return false;
  }
  return true;
}

VertexSet AbstractSphere::facet_set(std::uint32_t facet) const {
  VertexSet s = facets.at(facet);
  std::sort(s.begin(), s.end());
  return s;
}

bool AbstractSphere::contains(std::uint32_t facet, std::uint32_t vertex) const {
  const auto& f = facets.at(facet);
  return std::find(f.begin(), f.end(), vertex) != f.end();
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ------------------------------------------------------------------- input

void validate_sphere(const AbstractSphere& sphere, bool partial) {
  const auto d = sphere.dimension;
  const auto n = sphere.num_vertices;
  if (d < 1) throw InvalidInput("dimension must be at least 1");
  if (n < 1) throw InvalidInput("vertex count must be positive");
  if (sphere.facets.empty()) throw InvalidInput("no facets");
  std::vector<bool> seen(n, false);
  std::vector<VertexSet> sets;
  for (std::size_t j = 0; j < sphere.facets.size(); ++j) {
    const auto& f = sphere.facets[j];
    for (auto v : f) {
      if (v >= n) {
        throw InvalidInput("facet " + std::to_string(j + 1) + " has unknown vertex " + std::to_string(v + 1));
      }
      seen[v] = true;
    }
    VertexSet s = sphere.facet_set(static_cast<std::uint32_t>(j));
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw InvalidInput("facet " + std::to_string(j + 1) + " repeats a vertex");
    }
    if (s.size() < d) {
      throw InvalidInput("facet " + std::to_string(j + 1) + " has fewer than " + std::to_string(d) + " vertices");
    }
    sets.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = 0; b < sets.size(); ++b) {
      if (a != b && is_subset(sets[a], sets[b])) {
        throw InvalidInput("facet " + std::to_string(a + 1) + " is contained in facet " + std::to_string(b + 1));
      }
    }
  }
  if (!partial) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!seen[v]) throw InvalidInput("vertex " + std::to_string(v + 1) + " lies on no facet");
    }
  }
}

namespace {

std::uint32_t label(const json& value, std::uint32_t limit, const char* what) {
  if (!value.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
  auto v = value.get<std::int64_t>();
  if (v < 1 || v > static_cast<std::int64_t>(limit)) {
    throw InvalidInput(std::string(what) + " " + std::to_string(v) + " out of range 1.." + std::to_string(limit));
  }
  return static_cast<std::uint32_t>(v - 1);
}

std::vector<std::uint32_t> labels(const json& value, std::uint32_t limit, const char* what) {
  if (!value.is_array()) throw InvalidInput(std::string(what) + " list must be an array");
  std::vector<std::uint32_t> out;
  for (const auto& v : value) out.push_back(label(v, limit, what));
  return out;
}

std::uint32_t facet_key(const std::string& key, std::size_t m) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(key, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("facet key '" + key + "' is not an integer");
  }
  if (pos != key.size() || v < 1 || v > static_cast<long long>(m)) {
    throw InvalidInput("facet key '" + key + "' out of range");
  }
  return static_cast<std::uint32_t>(v - 1);
}

void check_basis(const AbstractSphere& sphere, std::uint32_t facet, const std::vector<std::uint32_t>& basis) {
  std::string where = "basis of facet " + std::to_string(facet + 1);
  if (basis.size() != sphere.dimension) {
    throw InvalidInput(where + " needs exactly " + std::to_string(sphere.dimension) + " vertices");
  }
  auto sorted = basis;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InvalidInput(where + " repeats a vertex");
  for (auto v : basis) {
    if (!sphere.contains(facet, v)) throw InvalidInput(where + " uses vertex " + std::to_string(v + 1) + " off the facet");
  }
}

SphereFile from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("sphere file must be a JSON object");
  for (const char* key : {"dimension", "vertices", "facets"}) {
    if (!doc.contains(key)) throw InvalidInput(std::string("sphere file lacks \"") + key + "\"");
  }
  SphereFile file;
  auto& s = file.sphere;
  if (!doc["dimension"].is_number_integer() || doc["dimension"].get<std::int64_t>() < 1) {
    throw InvalidInput("dimension must be a positive integer");
  }
  if (!doc["vertices"].is_number_integer() || doc["vertices"].get<std::int64_t>() < 1) {
    throw InvalidInput("vertices must be a positive integer");
  }
  s.dimension = doc["dimension"].get<std::uint32_t>();
  s.num_vertices = doc["vertices"].get<std::uint32_t>();
  if (!doc["facets"].is_array()) throw InvalidInput("facets must be an array");
  for (const auto& f : doc["facets"]) s.facets.push_back(labels(f, s.num_vertices, "vertex"));
  if (doc.contains("name")) file.name = doc["name"].get<std::string>();

  auto& o = file.overrides;
  if (doc.contains("partial")) o.partial = doc["partial"].get<bool>();
  validate_sphere(s, o.partial);

  const auto m = static_cast<std::uint32_t>(s.facets.size());
  if (doc.contains("flag")) {
    o.flag = labels(doc["flag"], m, "flag facet");
    if (o.flag->size() != s.dimension + 1) {
      throw InvalidInput("flag needs exactly " + std::to_string(s.dimension + 1) + " facets");
    }
  }
  if (doc.contains("bases")) {
    for (const auto& [key, value] : doc["bases"].items()) {
      auto j = facet_key(key, m);
      auto basis = labels(value, s.num_vertices, "basis vertex");
      check_basis(s, j, basis);
      o.bases[j] = std::move(basis);
    }
  }
  if (doc.contains("orientation")) {
    for (const auto& [key, value] : doc["orientation"].items()) {
      auto j = facet_key(key, m);
      if (!value.is_number_integer() || (value.get<int>() != 1 && value.get<int>() != -1)) {
        throw InvalidInput("orientation of facet " + key + " must be +1 or -1");
      }
      o.orientation[j] = value.get<int>();
    }
  }
  if (doc.contains("fixed")) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> fixed;
    for (const auto& e : doc["fixed"]) {
      if (!e.is_array() || e.size() != 2) throw InvalidInput("fixed entries are [vertex, facet] pairs");
      fixed.emplace_back(label(e[0], s.num_vertices, "fixed vertex"), label(e[1], m, "fixed facet"));
    }
    o.fixed = std::move(fixed);
  }
  if (doc.contains("redundant")) {
    for (const auto& [key, value] : doc["redundant"].items()) {
      auto j = facet_key(key, m);
      if (!value.is_array()) throw InvalidInput("redundant bases of facet " + key + " must be a list");
      for (const auto& b : value) {
        auto basis = labels(b, s.num_vertices, "basis vertex");
        check_basis(s, j, basis);
        o.redundant[j].push_back(std::move(basis));
      }
    }
  }
  return file;
}

json one_based(const std::vector<std::uint32_t>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

}  // namespace

SphereFile parse_sphere(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed sphere file: ") + e.what());
  }
}

SphereFile load_sphere(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto file = parse_sphere(buffer.str());
  if (file.name.empty()) {
    auto slash = path.find_last_of('/');
    file.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
    auto dot = file.name.rfind(".json");
    if (dot != std::string::npos) file.name.erase(dot);
  }
  return file;
}

std::string serialize_sphere(const SphereFile& file) {
  json doc = json::object();
  if (!file.name.empty()) doc["name"] = file.name;
  doc["dimension"] = file.sphere.dimension;
  doc["vertices"] = file.sphere.num_vertices;
  doc["facets"] = json::array();
  for (const auto& f : file.sphere.facets) doc["facets"].push_back(one_based(f));
  const auto& o = file.overrides;
  if (o.partial) doc["partial"] = true;
  if (o.flag) doc["flag"] = one_based(*o.flag);
  if (!o.bases.empty()) {
    doc["bases"] = json::object();
    for (const auto& [j, b] : o.bases) doc["bases"][std::to_string(j + 1)] = one_based(b);
  }
  if (!o.orientation.empty()) {
    doc["orientation"] = json::object();
    for (const auto& [j, sign] : o.orientation) doc["orientation"][std::to_string(j + 1)] = sign;
  }
  if (o.fixed) {
    doc["fixed"] = json::array();
    for (const auto& [v, f] : *o.fixed) doc["fixed"].push_back({v + 1, f + 1});
  }
  if (!o.redundant.empty()) {
    doc["redundant"] = json::object();
    for (const auto& [j, list] : o.redundant) {
      auto& arr = doc["redundant"][std::to_string(j + 1)] = json::array();
      for (const auto& b : list) arr.push_back(one_based(b));
    }
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------- pseudomanifold

PseudomanifoldReport validate_pseudomanifold(const AbstractSphere& sphere) {
  PseudomanifoldReport report;
  report.simplicial = sphere.all_simplicial();
  const auto m = sphere.num_facets();
  const auto d = sphere.dimension;
  std::vector<VertexSet> sets;
  for (std::uint32_t j = 0; j < m; ++j) sets.push_back(sphere.facet_set(j));

  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };

  if (report.simplicial) {
    std::map<VertexSet, std::vector<std::size_t>> ridges;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t skip = 0; skip < sets[j].size(); ++skip) {
        VertexSet r;
        for (std::size_t t = 0; t < sets[j].size(); ++t) {
          if (t != skip) r.push_back(sets[j][t]);
        }
        ridges[r].push_back(j);
      }
    }
    for (const auto& [r, owners] : ridges) {
      ++report.ridges_checked;
      if (owners.size() != 2) report.bad_ridges.emplace_back(r, owners.size());
      for (std::size_t t = 1; t < owners.size(); ++t) parent[find(owners[t])] = find(owners[0]);
    }
  } else {
    std::set<VertexSet> checked;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        VertexSet r = intersect(sets[a], sets[b]);
        if (d == 0 || r.size() + 1 < d) continue;
        parent[find(b)] = find(a);
        if (!checked.insert(r).second) continue;
        ++report.ridges_checked;
        std::size_t owners = 0;
        for (const auto& f : sets) owners += is_subset(r, f) ? 1 : 0;
        if (owners != 2) report.bad_ridges.emplace_back(r, owners);
      }
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t j = 0; j < m; ++j) roots.insert(find(j));
  report.components = roots.size();
  report.connected = roots.size() <= 1;
  return report;
}

// -------------------------------------------------------------- face poset

std::optional<int> FacePoset::dim(const VertexSet& face) const {
  auto it = rank_.find(face);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

std::size_t FacePoset::count(int d) const {
  return static_cast<std::size_t>(
      std::count_if(rank_.begin(), rank_.end(), [d](const auto& entry) { return entry.second == d; }));
}

std::optional<VertexSet> FacePoset::closure(const VertexSet& set) const {
  std::optional<VertexSet> out;
  for (const auto& f : facets_) {
    if (!is_subset(set, f)) continue;
    out = out ? intersect(*out, f) : f;
  }
  return out;
}

FacePoset compute_faces(const AbstractSphere& sphere) {
  FacePoset poset;
  for (std::uint32_t j = 0; j < sphere.num_facets(); ++j) poset.facets_.push_back(sphere.facet_set(j));

  std::set<VertexSet> faces(poset.facets_.begin(), poset.facets_.end());
  faces.insert(VertexSet{});
  std::deque<VertexSet> queue(poset.facets_.begin(), poset.facets_.end());
  while (!queue.empty()) {
    VertexSet g = std::move(queue.front());
    queue.pop_front();
    for (const auto& f : poset.facets_) {
      VertexSet h = intersect(g, f);
      if (faces.insert(h).second) queue.push_back(std::move(h));
    }
  }

  // Longest chain below each face, visiting faces by increasing size.
  std::vector<const VertexSet*> order;
  for (const auto& g : faces) order.push_back(&g);
  std::stable_sort(order.begin(), order.end(),
                   [](const VertexSet* a, const VertexSet* b) { return a->size() < b->size(); });
  for (const VertexSet* g : order) {
    if (g->empty()) {
      poset.rank_[*g] = -1;
      continue;
    }
    int best = -1;
    for (const auto& f : poset.facets_) {
      if (is_subset(*g, f)) continue;
      best = std::max(best, poset.rank_.at(intersect(*g, f)));
    }
    poset.rank_[*g] = best + 1;
  }

  const int top = static_cast<int>(sphere.dimension) - 1;
  for (std::size_t j = 0; j < poset.facets_.size(); ++j) {
    int r = poset.rank_.at(poset.facets_[j]);
    if (r != top) {
      poset.warnings_.push_back("facet " + std::to_string(j + 1) + " has rank " + std::to_string(r) +
                                " instead of " + std::to_string(top) + "; the face lattice is not polytopal");
    }
  }
  return poset;
}

// ------------------------------------------------------------------- flags

namespace {

bool flag_step(const FacePoset& faces, const VertexSet& current, const VertexSet& next, bool partial) {
  if (partial) return next.size() < current.size();
  auto a = faces.dim(current);
  auto b = faces.dim(next);
  return a && b && *b == *a - 1;
}

// Depth-first extension of `prefix` using `candidates` in order.
bool extend_flag(const AbstractSphere& sphere, const FacePoset& faces, const std::vector<std::uint32_t>& candidates,
                 std::vector<std::uint32_t>& prefix, const VertexSet& current, bool partial) {
  if (prefix.size() == sphere.dimension + 1) return current.empty();
  for (auto j : candidates) {
    if (std::find(prefix.begin(), prefix.end(), j) != prefix.end()) continue;
    VertexSet next = intersect(current, sphere.facet_set(j));
    if (!flag_step(faces, current, next, partial)) continue;
    prefix.push_back(j);
    if (extend_flag(sphere, faces, candidates, prefix, next, partial)) return true;
    prefix.pop_back();
  }
  return false;
}

std::optional<std::vector<std::uint32_t>> search_flag(const AbstractSphere& sphere, const FacePoset& faces,
                                                      const std::vector<std::uint32_t>& candidates, bool partial) {
  const int top = static_cast<int>(sphere.dimension) - 1;
  for (auto first : candidates) {
    VertexSet start = sphere.facet_set(first);
    if (!partial && faces.dim(start) != top) continue;
    std::vector<std::uint32_t> prefix{first};
    if (extend_flag(sphere, faces, candidates, prefix, start, partial)) return prefix;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::uint32_t> find_facet_flag(const AbstractSphere& sphere, const FacePoset& faces) {
  std::vector<std::uint32_t> all(sphere.num_facets());
  std::iota(all.begin(), all.end(), 0U);
  auto flag = search_flag(sphere, faces, all, false);
  if (!flag) throw SearchFailed("no facet flag");
  return *flag;
}

std::optional<std::vector<std::uint32_t>> order_flag(const AbstractSphere& sphere, const FacePoset& faces,
                                                     const std::vector<std::uint32_t>& flag, bool partial) {
  if (flag.size() != sphere.dimension + 1) return std::nullopt;
  auto sorted = flag;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  return search_flag(sphere, faces, flag, partial);
}

void check_flag(const AbstractSphere& sphere, const FacePoset& faces, const std::vector<std::uint32_t>& flag,
                bool partial) {
  if (!order_flag(sphere, faces, flag, partial)) {
    std::string list;
    for (auto j : flag) list += (list.empty() ? "" : ",") + std::to_string(j + 1);
    throw InvalidInput("facets {" + list + "} do not form a flag");
  }
}

// ------------------------------------------------------------ facet bases

namespace {

// Enumerates vertex flags inside `facet`; `visit` returns false to stop.
void vertex_flags(const AbstractSphere& sphere, const FacePoset& faces, std::uint32_t facet,
                  const std::function<bool(const std::vector<std::uint32_t>&)>& visit) {
  const VertexSet vertices = sphere.facet_set(facet);
  const auto d = sphere.dimension;
  std::vector<std::uint32_t> chosen;
  bool stop = false;
  std::function<void(const VertexSet&, int)> go = [&](const VertexSet& current, int rank) {
    if (stop) return;
    if (chosen.size() == d) {
      if (!visit(chosen)) stop = true;
      return;
    }
    for (auto v : vertices) {
      if (std::binary_search(current.begin(), current.end(), v)) continue;
      VertexSet with = current;
      with.insert(std::upper_bound(with.begin(), with.end(), v), v);
      auto next = faces.closure(with);
      if (!next) continue;
      auto r = faces.dim(*next);
      if (!r || *r != rank + 1) continue;
      chosen.push_back(v);
      go(*next, rank + 1);
      chosen.pop_back();
      if (stop) return;
    }
  };
  go(VertexSet{}, -1);
}

}  // namespace

std::vector<std::uint32_t> facet_basis(const AbstractSphere& sphere, const FacePoset& faces, std::uint32_t facet) {
  if (sphere.is_simplicial(facet)) return sphere.facets.at(facet);
  std::optional<std::vector<std::uint32_t>> found;
  vertex_flags(sphere, faces, facet, [&](const std::vector<std::uint32_t>& b) {
    found = b;
    return false;
  });
  if (!found) throw SearchFailed("no facet basis for facet " + std::to_string(facet + 1));
  return *found;
}

std::vector<std::vector<std::uint32_t>> all_facet_bases(const AbstractSphere& sphere, const FacePoset& faces,
                                                        std::uint32_t facet, std::size_t limit) {
  if (sphere.is_simplicial(facet)) return {sphere.facets.at(facet)};
  std::vector<std::vector<std::uint32_t>> out;
  std::set<VertexSet> seen;
  vertex_flags(sphere, faces, facet, [&](const std::vector<std::uint32_t>& b) {
    VertexSet key = b;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.push_back(b);
    return out.size() < limit;
  });
  if (out.empty()) throw SearchFailed("no facet basis for facet " + std::to_string(facet + 1));
  return out;
}

}  // namespace slackcert
