#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "slin/lift.hpp"

namespace slin::cli {

/// Malformed or incompatible lift document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Serialized form of a super-linearization. Rationals and polynomials are
/// kept in their canonical text form so nothing passes through floating point.
struct LiftDocument {
  static constexpr int kSchemaVersion = 1;

  struct ObservableEntry {
    std::string name;
    /// Names of the stage coordinates `definition` is written in.
    std::vector<std::string> definition_space;
    std::string definition;
    std::string expansion;

    friend bool operator==(const ObservableEntry&, const ObservableEntry&) = default;
  };

  int schema_version = kSchemaVersion;
  std::vector<std::string> variables;
  std::vector<std::string> coordinates;
  RationalMatrix a;
  std::vector<Rational> d;
  std::vector<ObservableEntry> observables;

  std::size_t n() const { return variables.size(); }
  std::size_t m() const { return observables.size(); }

  friend bool operator==(const LiftDocument&, const LiftDocument&) = default;
};

LiftDocument make_lift_document(const SuperLinearization& sl, const VariableSpace& x_space);

nlohmann::json to_json(const LiftDocument& doc);
std::string render_lift_document(const LiftDocument& doc);

/// Throws SchemaError on any structural problem.
LiftDocument parse_lift_document(const nlohmann::json& j);
LiftDocument parse_lift_document_text(std::string_view text);

/// Rebuilds the lift against `x_space`. Throws SchemaError when the document
/// was made for different variables or its polynomials do not parse.
SuperLinearization to_superlinearization(const LiftDocument& doc, const SpacePtr& x_space);

}  // namespace slin::cli
