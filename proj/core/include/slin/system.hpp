#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slin/error.hpp"
#include "slin/polynomial.hpp"

namespace slin {

/// Polynomial ODE system x' = f(x): one right-hand side per declared variable.
struct PolySystem {
  SpacePtr vars;
  std::vector<Polynomial> rhs;

  PolySystem(SpacePtr vars, std::vector<Polynomial> rhs);

  std::size_t dimension() const { return rhs.size(); }
};

enum class ParseErrorKind {
  kSyntax,
  kUndeclaredVariable,
  kDuplicateVariable,
  kDuplicateEquation,
  kMissingEquation,
  kNonPolynomial,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string reason);

  ParseErrorKind kind() const { return kind_; }
  /// 1-based.
  std::size_t line() const { return line_; }
  /// 1-based.
  std::size_t column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

/// Parses the `vars:` / `name' = expr` format. Throws ParseError.
PolySystem parse_system(std::string_view text);

std::string render_system(const PolySystem& sys);

/// Parses a single polynomial expression over `space`. Throws ParseError
/// (line is always 1).
Polynomial parse_polynomial(std::string_view text, const SpacePtr& space);

/// Letter followed by letters, digits or underscores.
bool is_identifier(std::string_view name);

}  // namespace slin
