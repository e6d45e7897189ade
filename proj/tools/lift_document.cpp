#include "lift_document.hpp"

#include "slin/system.hpp"

namespace slin::cli {

using nlohmann::json;

LiftDocument make_lift_document(const SuperLinearization& sl, const VariableSpace& x_space) {
  LiftDocument doc;
  doc.variables = x_space.names();
  doc.coordinates = sl.var_names;
  doc.a = sl.a;
  doc.d = sl.d;
  for (const auto& o : sl.observables) {
    doc.observables.push_back({o.name, o.definition.space()->names(), o.definition.str(), o.expansion.str()});
  }
  return doc;
}

json to_json(const LiftDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["variables"] = doc.variables;
  j["n"] = doc.n();
  j["m"] = doc.m();
  j["coordinates"] = doc.coordinates;
  json a = json::array();
  for (const auto& row : doc.a) {
    json r = json::array();
    for (const auto& c : row) r.push_back(c.str());
    a.push_back(std::move(r));
  }
  j["A"] = std::move(a);
  json d = json::array();
  for (const auto& c : doc.d) d.push_back(c.str());
  j["D"] = std::move(d);
  json obs = json::array();
  for (const auto& o : doc.observables) {
    obs.push_back({{"name", o.name},
                   {"definition_space", o.definition_space},
                   {"definition", o.definition},
                   {"expansion", o.expansion}});
  }
  j["observables"] = std::move(obs);
  return j;
}

std::string render_lift_document(const LiftDocument& doc) { return to_json(doc).dump(2) + "\n"; }

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("lift document: missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_array(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string("lift document: '") + what + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw SchemaError(std::string("lift document: '") + what + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Rational rational_field(const json& e) {
  if (!e.is_string()) throw SchemaError("lift document: rationals must be strings like \"1485/2\"");
  try {
    return Rational::parse(e.get<std::string>());
  } catch (const PreconditionError& err) {
    throw SchemaError(std::string("lift document: ") + err.what());
  }
}

}  // namespace

LiftDocument parse_lift_document(const json& j) {
  LiftDocument doc;
  const json& version = field(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != LiftDocument::kSchemaVersion) {
    throw SchemaError("lift document: unsupported schema_version");
  }
  doc.variables = string_array(field(j, "variables"), "variables");
  doc.coordinates = string_array(field(j, "coordinates"), "coordinates");

  const json& obs = field(j, "observables");
  if (!obs.is_array()) throw SchemaError("lift document: 'observables' must be an array");
  for (const auto& o : obs) {
    LiftDocument::ObservableEntry e;
    const json& name = field(o, "name");
    const json& def = field(o, "definition");
    const json& exp = field(o, "expansion");
    if (!name.is_string() || !def.is_string() || !exp.is_string()) {
      throw SchemaError("lift document: observable fields must be strings");
    }
    e.name = name.get<std::string>();
    e.definition = def.get<std::string>();
    e.expansion = exp.get<std::string>();
    e.definition_space = string_array(field(o, "definition_space"), "definition_space");
    doc.observables.push_back(std::move(e));
  }

  const std::size_t dim = doc.variables.size() + doc.observables.size();
  if (field(j, "n") != doc.variables.size() || field(j, "m") != doc.observables.size()) {
    throw SchemaError("lift document: n/m disagree with variables/observables");
  }
  if (doc.coordinates.size() != dim) throw SchemaError("lift document: coordinates must list n+m names");

  const json& a = field(j, "A");
  if (!a.is_array() || a.size() != dim) throw SchemaError("lift document: A must have n+m rows");
  for (const auto& row : a) {
    if (!row.is_array() || row.size() != dim) throw SchemaError("lift document: A must be square");
    std::vector<Rational> r;
    r.reserve(dim);
    for (const auto& e : row) r.push_back(rational_field(e));
    doc.a.push_back(std::move(r));
  }
  const json& d = field(j, "D");
  if (!d.is_array() || d.size() != dim) throw SchemaError("lift document: D must have n+m entries");
  for (const auto& e : d) doc.d.push_back(rational_field(e));
  return doc;
}

LiftDocument parse_lift_document_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("lift document is not valid JSON: ") + e.what());
  }
  return parse_lift_document(j);
}

SuperLinearization to_superlinearization(const LiftDocument& doc, const SpacePtr& x_space) {
  if (doc.variables != x_space->names()) {
    throw SchemaError("dimension mismatch: lift was made for variables (" + std::to_string(doc.n()) +
                      ") that do not match the system (" + std::to_string(x_space->size()) + ")");
  }
  SuperLinearization sl;
  sl.n = doc.n();
  sl.m = doc.m();
  sl.a = doc.a;
  sl.d = doc.d;
  sl.var_names = doc.coordinates;
  std::size_t index = 1;
  for (const auto& o : doc.observables) {
    try {
      const SpacePtr def_space = make_space(o.definition_space);
      sl.observables.push_back({index++, o.name, parse_polynomial(o.definition, def_space),
                                parse_polynomial(o.expansion, x_space)});
    } catch (const Error& e) {
      throw SchemaError("lift document: observable '" + o.name + "': " + e.what());
    }
  }
  return sl;
}

}  // namespace slin::cli
