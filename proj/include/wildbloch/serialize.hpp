#pragma once

#include <string>

#include <json.hpp>

#include "wildbloch/bloch.hpp"
#include "wildbloch/universal.hpp"

namespace wildbloch {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Thrown for documents that do not match the expected layout.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex numbers are [re, im]; decoders also accept a bare real number.
// Doubles are written with round-trip precision, so decode(encode(x)) == x.

json encode(cplx z);
json encode(const Polynomial1D& p);
json encode(const PolynomialND& p);
json encode(const Domain& d);
json encode(const SampleGrid& g);
json encode(const ArcSet& a);
json encode(const SingularMeasureSpec& m);
json encode(const InnerSpec& s);
json encode(const FunctionExpr& f);
/// Throws SchemaError for callable targets.
json encode(const BoundaryFunction& f);
json encode(const WeightSpec& w);
json encode(const BlochReport& r);
json encode(const SeparablePolynomial& p);
json encode(const GoodSet& e);
json encode(const SimulReport& r);
json encode(const SimulApproxResult& r);
json encode(const Certificate& c);
json encode(const UniversalBlock& b);
json encode(const UniversalCandidate& c);
json encode(const PathSpec& p);

cplx decode_cplx(const json& j);
std::vector<cplx> decode_cplx_list(const json& j);
Polynomial1D decode_poly1d(const json& j);
PolynomialND decode_polynd(const json& j);
Domain decode_domain(const json& j);
SampleGrid decode_grid(const json& j);
ArcSet decode_arcs(const json& j);
SingularMeasureSpec decode_measure(const json& j);
/// Also accepts {"kind": "power", "base": ..., "n": k}.
InnerSpec decode_inner(const json& j);
/// Also accepts {"kind": "lacunary", "K": k}.
FunctionExpr decode_function(const json& j);
/// Also accepts {"kind": "constant", "dim": N, "value": c}.
BoundaryFunction decode_boundary(const json& j);
WeightSpec decode_weight(const json& j);
SeparablePolynomial decode_separable(const json& j);
GoodSet decode_goodset(const json& j);
SimulReport decode_simul_report(const json& j);
SimulApproxResult decode_simul(const json& j);
Certificate decode_certificate(const json& j);
UniversalBlock decode_block(const json& j);
UniversalCandidate decode_candidate(const json& j);
PathSpec decode_path(const json& j);

/// {"schema_version", "kind", "generated_at", "payload"}. `timestamp` false writes an empty
/// generated_at so documents can be compared byte for byte.
json make_document(const std::string& kind, json payload, bool timestamp = true);
/// Checks schema_version and kind, returns the payload.
const json& document_payload(const json& doc, const std::string& kind);
/// Copy of `doc` with generated_at removed.
json strip_timestamp(json doc);

/// target_id,n,r_n,d_sup,good_measure,block_norm
std::string certificates_csv(const std::vector<Certificate>& certs);
/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wildbloch
