#include "spirallab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spirallab {
namespace report {

namespace {

std::string double_string(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double string_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

json point_to_json(const PointCn& p) {
  json out = json::array();
  for (int j = 0; j < p.size(); ++j) out.push_back({p[j].real(), p[j].imag()});
  return out;
}

PointCn point_from_json(const json& j) {
  PointCn p(static_cast<int>(j.size()));
  for (size_t k = 0; k < j.size(); ++k)
    p[static_cast<int>(k)] = Complex(j[k][0].get<double>(), j[k][1].get<double>());
  return p;
}

PointCn parse_point(const std::string& text) {
  std::vector<Complex> coords;
  std::istringstream is(text);
  std::string piece;
  while (std::getline(is, piece, ',')) {
    if (piece.empty()) continue;
    // Each coordinate is a constant expression: a, bi, a+bi, -(...), etc.
    auto e = expr::ScalarExpr::parse(piece, 0);
    coords.push_back(e.eval(PointCn(0)));
  }
  if (coords.empty()) throw ParseError("empty point literal: " + text);
  PointCn p(static_cast<int>(coords.size()));
  for (size_t k = 0; k < coords.size(); ++k) p[static_cast<int>(k)] = coords[k];
  return p;
}

json domain_to_json(const domains::DomainSpec& d) {
  json defining = json::array();
  for (const auto& s : d.sheets())
    defining.push_back(s.source().empty() ? s.to_string() : s.source());
  json singular;
  if (d.singular().empty())
    singular = nullptr;
  else
    singular = d.singular().to_string();
  return json{{"dim", d.dim()},
              {"defining", defining},
              {"bound", d.bounding_radius()},
              {"singular", singular}};
}

domains::DomainSpec domain_from_json(const json& j, const std::string& name) {
  int dim = j.at("dim").get<int>();
  std::vector<expr::ScalarExpr> sheets;
  for (const auto& s : j.at("defining"))
    sheets.push_back(expr::ScalarExpr::parse(s.get<std::string>(), dim));
  double bound = j.at("bound").get<double>();
  domains::SingularPredicate pred;
  if (j.contains("singular") && !j["singular"].is_null())
    pred = domains::SingularPredicate::parse(j["singular"].get<std::string>());
  bool origin = j.value("origin_containing", true);
  return domains::DomainSpec(std::move(sheets), dim, bound, std::move(pred), name, 0.0, origin);
}

json field_to_json(const fields::VectorFieldSpec& V) {
  json comps = json::array();
  for (const auto& c : V.components().sources()) comps.push_back(c);
  return json{{"components", comps}};
}

fields::VectorFieldSpec field_from_json(const json& j) {
  std::vector<std::string> comps;
  for (const auto& c : j.at("components")) comps.push_back(c.get<std::string>());
  return fields::VectorFieldSpec::parse(comps);
}

json polynomial_to_json(const hull::Polynomial& p) {
  json coeffs = json::array();
  for (int k = 0; k < p.coefficients.size(); ++k)
    coeffs.push_back({double_string(p.coefficients[k].real()),
                      double_string(p.coefficients[k].imag())});
  json shift = nullptr;
  if (p.shift.size() > 0) {
    shift = json::array();
    for (int k = 0; k < p.shift.size(); ++k)
      shift.push_back({double_string(p.shift[k].real()), double_string(p.shift[k].imag())});
  }
  return json{{"dim", p.dim},
              {"scale", double_string(p.scale)},
              {"shift", shift},
              {"exponents", p.exponents},
              {"coefficients", coeffs}};
}

hull::Polynomial polynomial_from_json(const json& j) {
  hull::Polynomial p;
  p.dim = j.at("dim").get<int>();
  p.scale = string_double(j.at("scale").get<std::string>());
  if (j.contains("shift") && !j["shift"].is_null()) {
    p.shift.resize(static_cast<int>(j["shift"].size()));
    for (size_t k = 0; k < j["shift"].size(); ++k)
      p.shift[static_cast<int>(k)] = Complex(string_double(j["shift"][k][0].get<std::string>()),
                                             string_double(j["shift"][k][1].get<std::string>()));
  }
  for (const auto& e : j.at("exponents")) p.exponents.push_back(e.get<std::vector<int>>());
  p.coefficients.resize(static_cast<int>(j.at("coefficients").size()));
  for (size_t k = 0; k < j["coefficients"].size(); ++k)
    p.coefficients[static_cast<int>(k)] =
        Complex(string_double(j["coefficients"][k][0].get<std::string>()),
                string_double(j["coefficients"][k][1].get<std::string>()));
  return p;
}

json certificate_to_json(const hull::HullCertificate& c) {
  json out{{"verdict", hull::to_string(c.verdict)},
           {"query", point_to_json(c.query)},
           {"degree_cap", c.degree_cap},
           {"note", "hull of the sampled set; Separated is sound, Inconclusive proves nothing"}};
  if (c.verdict == hull::HullVerdict::Separated) {
    out["gap"] = c.gap;
    out["witness"] = polynomial_to_json(c.witness);
  }
  return out;
}

SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file: " + path);
  json j = json::parse(in, nullptr, true, true);
  SpecFile spec;
  if (j.contains("domain")) spec.domain = domain_from_json(j["domain"], path);
  if (j.contains("field")) spec.field = field_from_json(j["field"]);
  if (j.contains("maps")) {
    int dim = spec.domain ? spec.domain->dim()
                          : (spec.field ? spec.field->dim() : 0);
    for (auto it = j["maps"].begin(); it != j["maps"].end(); ++it) {
      std::vector<std::string> comps;
      for (const auto& c : it.value()) comps.push_back(c.get<std::string>());
      int n = dim > 0 ? dim : static_cast<int>(comps.size());
      spec.maps.emplace(it.key(), expr::MapExpr::parse(comps, n));
    }
  }
  return spec;
}

bool ReportDoc::all_pass() const {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

json ReportDoc::to_json() const {
  json results_json = json::array();
  for (const auto& r : results)
    results_json.push_back({{"name", r.name}, {"pass", r.pass}, {"details", r.details}});
  json out{{"schema", kReportSchema}, {"version", kToolkitVersion}, {"command", command},
           {"config", config},        {"inputs", inputs},           {"results", results_json},
           {"pass", all_pass()}};
  if (wall_clock_ms) out["wall_clock_ms"] = *wall_clock_ms;
  return out;
}

void write_report(const ReportDoc& doc, const std::string& path) {
  json j = doc.to_json();
  std::string error;
  if (!validate_against_schema(j, embedded_schema(), &error))
    throw Error("internal: report does not validate against the shipped schema: " + error);
  std::ofstream out(path);
  if (!out) throw Error("cannot write report: " + path);
  out << j.dump(2) << "\n";
}

const json& embedded_schema() {
  static const json schema = json::parse(R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "spirallab report",
  "type": "object",
  "required": ["schema", "version", "command", "config", "inputs", "results", "pass"],
  "properties": {
    "schema": {"type": "string", "enum": ["spirallab-report/1"]},
    "version": {"type": "string"},
    "command": {
      "type": "string",
      "enum": ["stability", "flow", "spirallike", "hull", "loewner", "operators", "catalog"]
    },
    "config": {"type": "object"},
    "inputs": {"type": "object"},
    "pass": {"type": "boolean"},
    "wall_clock_ms": {"type": "number"},
    "results": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "pass", "details"],
        "properties": {
          "name": {"type": "string"},
          "pass": {"type": "boolean"},
          "details": {"type": "object"}
        }
      }
    }
  }
})");
  return schema;
}

namespace {

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

}  // namespace

bool validate_against_schema(const json& value, const json& schema, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };

  if (schema.contains("type")) {
    const auto& t = schema["type"];
    if (t.is_string()) {
      if (!type_matches(value, t.get<std::string>()))
        return fail("expected type " + t.get<std::string>());
    } else if (t.is_array()) {
      bool any = false;
      for (const auto& cand : t)
        if (type_matches(value, cand.get<std::string>())) any = true;
      if (!any) return fail("value matches none of the allowed types");
    }
  }
  if (schema.contains("enum")) {
    bool any = false;
    for (const auto& cand : schema["enum"])
      if (value == cand) any = true;
    if (!any) return fail("value not in enum");
  }
  if (value.is_object() && schema.contains("required")) {
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>()))
        return fail("missing required key " + key.get<std::string>());
  }
  if (value.is_object() && schema.contains("properties")) {
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
      if (!value.contains(it.key())) continue;
      std::string sub_error;
      if (!validate_against_schema(value[it.key()], it.value(), &sub_error))
        return fail(it.key() + ": " + sub_error);
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (size_t k = 0; k < value.size(); ++k) {
      std::string sub_error;
      if (!validate_against_schema(value[k], schema["items"], &sub_error))
        return fail("item " + std::to_string(k) + ": " + sub_error);
    }
  }
  return true;
}

}  // namespace report
}  // namespace spirallab
