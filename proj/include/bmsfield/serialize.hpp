#pragma once

#include <string>

#include <json.hpp>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/dynamics.hpp"
#include "bmsfield/induced.hpp"
#include "bmsfield/sphere.hpp"

namespace bms {

using json = nlohmann::json;

/// A sampled field together with the orbit it lives on.
struct OrbitField {
    OrbitQuadrature orbit;
    InducedField field;
};

// Documents are plain objects recognized by their keys:
//   sphere function / supermomentum  {"L_max", "coeffs": [[l, m, value], ...]} (+ "dual": true)
//   BMS element                      {"lambda": [[re, im] x 4], "f": <sphere function>}
//   Hermite series                   {"N", "directions": [[l, m], ...], "k", "coeffs": [[[n_1..n_K], re, im], ...]}
//   field state                      {"psi", "v", "lambdas", "lambda_vs"}
//   orbit                            {"kind", "param", "chi_max", "n_chi", "n_sphere"}
//   induced field                    {"orbit", "values": [[re, im], ...]}
// Writers emit every coefficient (zeros included) so signed zeros survive a roundtrip.
// Readers throw SchemaError carrying the JSON path of the offending field ("$.psi.coeffs[3][1]").

json to_json(const SphereFunction& f);
json to_json(const Supermomentum& beta);
json to_json(const BMSElement& g);
json to_json(const HermiteSeries& psi);
json to_json(const FieldState& s);
json to_json(const OrbitQuadrature& orbit); // parametrization only
json to_json(const OrbitField& f);

SphereFunction sphere_function_from_json(const json& j, const std::string& path = "$");
Supermomentum supermomentum_from_json(const json& j, const std::string& path = "$");
BMSElement bms_element_from_json(const json& j, const std::string& path = "$");
HermiteSeries hermite_series_from_json(const json& j, const std::string& path = "$");
FieldState field_state_from_json(const json& j, const std::string& path = "$");
OrbitQuadrature orbit_from_json(const json& j, const std::string& path = "$");
OrbitField orbit_field_from_json(const json& j, const std::string& path = "$");

/// Parses text into a json value; syntax errors become SchemaError at "$".
json parse_document(const std::string& text);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

enum class DocumentKind { sphere_function, supermomentum, bms_element, hermite_series, field_state, orbit, induced_field };
/// Throws SchemaError when the keys match no document.
DocumentKind document_kind(const json& j);

/// parse -> typed value -> serialize -> parse; true iff both typed values agree bit for bit
/// and both serializations are identical. Throws SchemaError for malformed input.
bool roundtrip_text(const std::string& text);
bool roundtrip(const std::string& path);

} // namespace bms
