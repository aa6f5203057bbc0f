#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mgs/membership.hpp"
#include "mgs/quantum.hpp"
#include "mgs/witness.hpp"

namespace mgs::io {

using Json = nlohmann::json;

// Rationals are written as "p/q" strings everywhere.

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

/// {"scenario":..., "mode":"rational"|"real", "table":[...]} in cell order.
Json to_json(const Correlation& p);
Correlation correlation_from_json(const Json& j);

/// {"scenario":..., "resource":..., "k":..., "vertices":[[[X,A,"p/q"],...],...]}
Json to_json(const VertexSet& v);
VertexSet vertex_set_from_json(const Json& j);
/// One JSON document per line: a header without "vertices", then one
/// vertex ([[X,A,"p/q"],...]) per line.
void write_vertices_jsonl(std::ostream& out, const VertexSet& v);
VertexSet read_vertices_jsonl(std::istream& in);
/// Dispatches on the extension (.jsonl or anything else).
VertexSet load_vertex_file(const std::string& path);

/// {"scenario", "form", "terms", "bound", "resource", "k"} plus optional
/// "name", "symmetrize" and "lifts".
Json to_json(const BellExpression& e);
BellExpression expression_from_json(const Json& j);

/// {"builtin":"ghz","n":4}, {"builtin":"sec3c","v":0.2}, {"builtin":"sec3a"}
/// or {"matrix":{"re":[[...]],"im":[[...]]}}.
quantum::DensityMatrix state_from_json(const Json& j);
/// {"preset":"ineq10"|"svetlichny"|"sigma_xy"|"sigma_z","parties":n} or
/// {"bloch":[[[x,y,z],...],...]} (per party, per setting).
quantum::MeasurementSet measurements_from_json(const Json& j);

Json to_json(const MembershipResult& r, const VertexSet& vertices);
Json to_json(const CertificateCheck& c);
Json to_json(const MgsReport& r);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace mgs::io
