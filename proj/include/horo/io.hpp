#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "horo/congruence.hpp"
#include "horo/diophantine.hpp"
#include "horo/symmetry.hpp"

namespace horo {

using json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings so nothing is rounded.
json to_json(const Rational& r);
json to_json(const Integer& z);
json to_json(const ExactPoint& z);
json to_json(const IntMatrix2& g);
json to_json(const Translate& x);
Rational rational_from_json(const json& j);
Integer integer_from_json(const json& j);
ExactPoint point_from_json(const json& j);
IntMatrix2 matrix_from_json(const json& j);
Translate translate_from_json(const json& j);

// Translate specs: "1/3", "0.25" (exact), "dec:0.41421356" (interval of
// one unit in the last digit), "golden", "sqrt2m1", "kappa:2",
// "cf:a0;p1,p2,...|r1,r2,..." (prefix then repeating period).
Translate parse_translate(std::string_view spec, const Rational& max_radius);

// Certificates: {"kind": "symmetry_witness" | "horoball_certificate" | "cusp_certificate", ...}.
json certificate_json(const SymmetryWitness& w);
json certificate_json(const HoroballCertificate& c);
json certificate_json(std::uint64_t n, const Cusp& c, const ExactPoint& z, const CuspCertificate& cert);

struct ClaimCheck {
    std::string claim;
    bool ok = false;
    std::string detail;
};
struct VerifyReport {
    std::string kind;
    bool pass = false;
    std::vector<ClaimCheck> claims;
};
// Re-derives every exact claim of a certificate from its inputs.
VerifyReport verify_certificate(const json& cert);
json to_json(const VerifyReport& r);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(std::ostream& os, const Table& t);

struct Quantity {
    std::string name;
    json value;
    std::string provenance;  // "exact", "quadrature±e", "mc±s"
};
std::string provenance_exact();
std::string provenance_quadrature(double err);
std::string provenance_mc(double stderr_);

struct ExperimentRecord {
    std::string id;
    std::string type;
    json parameters = json::object();
    std::vector<Quantity> values;
    std::vector<Quantity> references;
    std::vector<std::string> errors;
    std::uint64_t seed = 0;
    std::optional<double> runtime_seconds;
    std::optional<Table> table;
    std::optional<json> certificate;
    bool ok() const { return errors.empty(); }
};
json to_json(const ExperimentRecord& r);

// Git blob SHA-1 of the bytes, hex.
std::string content_hash(const std::string& bytes);
std::string format_double(double v);  // shortest round-trip form

}  // namespace horo
