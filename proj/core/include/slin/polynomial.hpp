#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slin/rational.hpp"

namespace slin {

/// Ordered list of distinct variable names. The order fixes monomial exponent
/// positions for every polynomial built over the space.
class VariableSpace {
 public:
  explicit VariableSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const VariableSpace& a, const VariableSpace& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
};

using SpacePtr = std::shared_ptr<const VariableSpace>;

SpacePtr make_space(std::vector<std::string> names);

/// Pointer-equal or name-equal.
bool same_space(const SpacePtr& a, const SpacePtr& b);

/// Total degree of a polynomial; the zero polynomial has degree -infinity.
class Degree {
 public:
  constexpr Degree() = default;  // -infinity
  constexpr explicit Degree(std::uint32_t value) : finite_(true), value_(value) {}

  static constexpr Degree neg_infinity() { return Degree(); }

  constexpr bool is_neg_infinity() const { return !finite_; }
  constexpr std::uint32_t value() const { return value_; }

  friend constexpr Degree operator+(Degree a, Degree b) {
    if (!a.finite_ || !b.finite_) return Degree();
    return Degree(a.value_ + b.value_);
  }
  friend constexpr bool operator==(Degree a, Degree b) {
    return a.finite_ == b.finite_ && a.value_ == b.value_;
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
    if (a.finite_ != b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(Degree a, std::uint32_t b) { return a == Degree(b); }
  friend constexpr std::strong_ordering operator<=>(Degree a, std::uint32_t b) {
    return a <=> Degree(b);
  }

 private:
  bool finite_ = false;
  std::uint32_t value_ = 0;
};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then exponents compared from the first variable on.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps);

  static Monomial variable(std::size_t nvars, std::size_t index, std::uint32_t power = 1);

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }

  friend Monomial operator*(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::vector<std::uint32_t> exps_;
  std::uint32_t degree_ = 0;
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// stored leading (graded-lex greatest) first and no stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, std::greater<>>;

  explicit Polynomial(SpacePtr space);

  static Polynomial constant(SpacePtr space, const Rational& c);
  static Polynomial variable(SpacePtr space, std::size_t index);
  static Polynomial term(SpacePtr space, const Rational& c, Monomial m);

  const SpacePtr& space() const { return space_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  Degree degree() const;
  /// Degree <= 0.
  bool is_constant() const { return degree() <= 0u; }
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;
  /// Nonzero polynomials only.
  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;
  /// True if variable `index` occurs in some term.
  bool uses_variable(std::size_t index) const;

  /// this += c * other, in place.
  void add_scaled(const Polynomial& other, const Rational& c);
  /// this += c * m, in place.
  void add_term(const Rational& c, const Monomial& m);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);

  /// Term-level equality; spaces must agree by name.
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Canonical text: ascending graded-lex, explicit `*` and `^`, `num/den`.
  std::string str() const;

 private:
  void require_same_space(const Polynomial& o, const char* op) const;

  SpacePtr space_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial mul(const Polynomial& a, const Polynomial& b);
Polynomial pow(const Polynomial& p, std::uint32_t e);

/// Formal partial derivative with respect to variable `var_index`.
Polynomial differentiate(const Polynomial& p, std::size_t var_index);

/// Composition: every variable of `p` is replaced by its image. Images live
/// over `target`. Variables that do not occur in `p` need no image.
Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& assignment,
                      const SpacePtr& target);

/// Direct sum of term values with coefficients rounded to nearest double.
double evaluate(const Polynomial& p, std::span<const double> point);

Rational evaluate_exact(const Polynomial& p, std::span<const Rational> point);

/// sum_i dp/dx_i * field_i.
Polynomial lie_derivative(const Polynomial& p, std::span<const Polynomial> field);

}  // namespace slin
