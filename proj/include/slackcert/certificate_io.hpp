#pragma once

// JSON form of certificates. Indices are 1-based: an entry [i, j] is S_{i,j}
// with j a column of the parametrized matrix (facets in input order, then
// redundant columns); a variable [i, c] is x_{i,c} of the reduced matrix.

#include "slackcert/certify.hpp"

#include <json.hpp>

#include <string>

namespace slackcert {

nlohmann::ordered_json certificate_to_json(const Certificate& cert);
/// Throws InvalidInput.
Certificate certificate_from_json(const nlohmann::json& doc);
Certificate load_certificate(const std::string& path);

nlohmann::ordered_json final_polynomial_to_json(const FinalPolynomial& fp);
/// Reads "final_polynomial" (and optional "final_weights") of a certificate
/// document; "dimension" and "vertices" must be present.
FinalPolynomial final_polynomial_from_json(const nlohmann::json& doc);

nlohmann::ordered_json heuristics_to_json(const HeuristicConfig& h);

}  // namespace slackcert
