#include "slackcert/certificate_io.hpp"

#include "slackcert/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace slackcert {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

ojson one_based(const std::vector<std::uint32_t>& v) {
  ojson out = ojson::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

std::vector<std::uint32_t> vertex_list(const json& value, const char* what) {
  if (!value.is_array()) throw InvalidInput(std::string(what) + " must be a list");
  std::vector<std::uint32_t> out;
  for (const auto& v : value) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      throw InvalidInput(std::string(what) + " entries must be positive integers");
    }
    out.push_back(v.get<std::uint32_t>() - 1);
  }
  return out;
}

std::vector<Factor> factor_list(const json& value, FactorKind kind) {
  std::vector<Factor> out;
  if (!value.is_array()) throw InvalidInput("certificate factors must be a list of [i, j] pairs");
  for (const auto& pair : value) {
    auto ij = vertex_list(pair, "factor index");
    if (ij.size() != 2) throw InvalidInput("certificate factors must be [i, j] pairs");
    out.push_back(Factor{kind, ij[0], ij[1]});
  }
  return out;
}

Rational weight_of(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  throw InvalidInput("weights must be integers or \"p/q\" strings");
}

}  // namespace

ojson heuristics_to_json(const HeuristicConfig& h) {
  ojson out = ojson::object();
  out["avoid"] = one_based(h.avoid);
  out["fix"] = one_based(h.fix);
  out["monomial_simplify"] = h.monomial_simplify;
  out["redundant_bases"] = h.redundant_bases;
  return out;
}

ojson final_polynomial_to_json(const FinalPolynomial& fp) {
  ojson terms = ojson::array();
  for (const auto& t : fp.terms) {
    ojson coords = ojson::array();
    for (const auto& index : t.coordinates) coords.push_back(one_based(index));
    terms.push_back(ojson::array({t.coefficient < 0 ? -1 : 1, coords}));
  }
  return terms;
}

ojson certificate_to_json(const Certificate& cert) {
  ojson out = ojson::object();
  out["status"] = "certificate";
  out["k"] = cert.k;
  out["l"] = cert.l;
  out["heuristics"] = heuristics_to_json(cert.heuristics);
  ojson terms = ojson::array();
  for (const auto& t : cert.terms) {
    ojson term = ojson::object();
    term["weight"] = to_string(t.weight);
    ojson entries = ojson::array();
    ojson cofactors = ojson::array();
    ojson variables = ojson::array();
    for (const auto& f : t.factors) {
      ojson pair = ojson::array({f.row + 1, f.col + 1});
      switch (f.kind) {
        case FactorKind::Entry:
          entries.push_back(pair);
          break;
        case FactorKind::Cofactor:
          cofactors.push_back(pair);
          break;
        case FactorKind::Variable:
          variables.push_back(pair);
          break;
      }
    }
    term["entries"] = entries;
    if (!cofactors.empty()) term["cofactors"] = cofactors;
    if (!variables.empty()) term["variables"] = variables;
    terms.push_back(term);
  }
  out["terms"] = terms;
  if (cert.homogeneous_multipliers) {
    ojson multipliers = ojson::array();
    for (const auto& m : *cert.homogeneous_multipliers) {
      ojson factors = ojson::array();
      for (const auto& [v, e] : m.factors()) {
        factors.push_back(ojson::array({std::to_string(v.row + 1) + "," + std::to_string(v.col + 1), e}));
      }
      multipliers.push_back(factors);
    }
    out["homogeneous_multipliers"] = multipliers;
  }
  if (cert.final_polynomial) {
    out["dimension"] = cert.final_polynomial->dimension;
    out["vertices"] = cert.final_polynomial->num_vertices;
    out["final_polynomial"] = final_polynomial_to_json(*cert.final_polynomial);
    ojson weights = ojson::array();
    for (const auto& t : cert.final_polynomial->terms) {
      Rational c = t.coefficient < 0 ? Rational(-t.coefficient) : t.coefficient;
      weights.push_back(to_string(c));
    }
    out["final_weights"] = weights;
    if (!cert.final_polynomial->coplanar.empty()) {
      ojson sets = ojson::array();
      for (const auto& set : cert.final_polynomial->coplanar) sets.push_back(one_based(set));
      out["coplanar"] = sets;
    }
  } else if (!cert.translation_note.empty()) {
    out["final_polynomial_note"] = cert.translation_note;
  }
  out["verified"] = cert.verified;
  return out;
}

Certificate certificate_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw InvalidInput("certificate must be a JSON object");
    if (doc.contains("status") && doc["status"] != "certificate") {
      throw InvalidInput("document does not hold a certificate (status " + doc["status"].dump() + ")");
    }
    Certificate cert;
    if (doc.contains("k")) cert.k = doc["k"].get<std::uint32_t>();
    if (doc.contains("l")) cert.l = doc["l"].get<std::uint32_t>();
    if (doc.contains("heuristics")) {
      const auto& h = doc["heuristics"];
      if (h.contains("avoid")) cert.heuristics.avoid = vertex_list(h["avoid"], "avoid");
      if (h.contains("fix")) cert.heuristics.fix = vertex_list(h["fix"], "fix");
      if (h.contains("monomial_simplify")) cert.heuristics.monomial_simplify = h["monomial_simplify"].get<bool>();
      if (h.contains("redundant_bases")) cert.heuristics.redundant_bases = h["redundant_bases"].get<bool>();
    }
    if (!doc.contains("terms") || !doc["terms"].is_array() || doc["terms"].empty()) {
      throw InvalidInput("certificate lists no terms");
    }
    for (const auto& t : doc["terms"]) {
      CertificateTerm term;
      term.weight = t.contains("weight") ? weight_of(t["weight"]) : Rational(1);
      if (t.contains("entries")) {
        for (auto& f : factor_list(t["entries"], FactorKind::Entry)) term.factors.push_back(f);
      }
      if (t.contains("cofactors")) {
        for (auto& f : factor_list(t["cofactors"], FactorKind::Cofactor)) term.factors.push_back(f);
      }
      if (t.contains("variables")) {
        for (auto& f : factor_list(t["variables"], FactorKind::Variable)) term.factors.push_back(f);
      }
      cert.terms.push_back(std::move(term));
    }
    return cert;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed certificate: ") + e.what());
  }
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return certificate_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InvalidInput("malformed certificate " + path + ": " + e.what());
  }
}

FinalPolynomial final_polynomial_from_json(const json& doc) {
  try {
    FinalPolynomial fp;
    if (!doc.contains("dimension") || !doc.contains("vertices") || !doc.contains("final_polynomial")) {
      throw InvalidInput("final polynomial needs \"dimension\", \"vertices\" and \"final_polynomial\"");
    }
    fp.dimension = doc["dimension"].get<std::uint32_t>();
    fp.num_vertices = doc["vertices"].get<std::uint32_t>();
    if (doc.contains("coplanar")) {
      for (const auto& set : doc["coplanar"]) {
        auto vs = vertex_list(set, "coplanar set");
        std::sort(vs.begin(), vs.end());
        for (auto v : vs) {
          if (v >= fp.num_vertices) throw InvalidInput("coplanar vertex out of range");
        }
        fp.coplanar.push_back(std::move(vs));
      }
    }
    const auto& terms = doc["final_polynomial"];
    std::vector<Rational> weights(terms.size(), Rational(1));
    if (doc.contains("final_weights")) {
      if (doc["final_weights"].size() != terms.size()) throw InvalidInput("final_weights length mismatch");
      for (std::size_t t = 0; t < terms.size(); ++t) weights[t] = weight_of(doc["final_weights"][t]);
    }
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& term = terms[t];
      if (!term.is_array() || term.size() != 2) throw InvalidInput("final polynomial terms are [sign, [J, ...]]");
      int sign = term[0].get<int>();
      if (sign != 1 && sign != -1) throw InvalidInput("final polynomial signs must be +1 or -1");
      PluckerTerm pt;
      pt.coefficient = sign > 0 ? weights[t] : Rational(-weights[t]);
      for (const auto& index : term[1]) {
        auto J = vertex_list(index, "Plucker index");
        if (J.size() != fp.dimension + 1) throw InvalidInput("Plucker indices need d+1 vertices");
        for (auto v : J) {
          if (v >= fp.num_vertices) throw InvalidInput("Plucker index vertex out of range");
        }
        pt.coordinates.push_back(std::move(J));
      }
      fp.terms.push_back(std::move(pt));
    }
    return fp;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed final polynomial: ") + e.what());
  }
}

}  // namespace slackcert
