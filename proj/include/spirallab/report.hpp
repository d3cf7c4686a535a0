#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spirallab/domains.hpp"
#include "spirallab/hull.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace report {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kReportSchema = "spirallab-report/1";

using nlohmann::json;

// JSON encodings of the shared value types.
json point_to_json(const PointCn& p);
PointCn point_from_json(const json& j);
PointCn parse_point(const std::string& text);  // "a+bi,c" one literal per coordinate

json domain_to_json(const domains::DomainSpec& d);
domains::DomainSpec domain_from_json(const json& j, const std::string& name = "spec");

json field_to_json(const fields::VectorFieldSpec& V);
fields::VectorFieldSpec field_from_json(const json& j);

json polynomial_to_json(const hull::Polynomial& p);
hull::Polynomial polynomial_from_json(const json& j);

json certificate_to_json(const hull::HullCertificate& c);

// Input spec file: {"domain": {...}, "field": {...}, "maps": {"f": [...], ...}}
struct SpecFile {
  std::optional<domains::DomainSpec> domain;
  std::optional<fields::VectorFieldSpec> field;
  std::map<std::string, expr::MapExpr> maps;
};

SpecFile load_spec_file(const std::string& path);

struct CheckResult {
  std::string name;
  bool pass = false;
  json details;
};

// One report per CLI invocation. Identical (version, argv, seeds) produce
// byte-identical JSON; wall clock is included only when timing was requested.
struct ReportDoc {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  std::vector<CheckResult> results;
  std::optional<double> wall_clock_ms;

  bool all_pass() const;
  json to_json() const;
};

void write_report(const ReportDoc& doc, const std::string& path);

// The published report schema (shipped at schemas/spirallab-report-1.schema.json).
const json& embedded_schema();

// Minimal structural JSON-schema check: type / required / properties /
// items / enum. Returns false and fills error on the first violation.
bool validate_against_schema(const json& value, const json& schema, std::string* error);

}  // namespace report
}  // namespace spirallab
