#include "slin/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "slin/error.hpp"

namespace slin {

VariableSpace::VariableSpace(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw PreconditionError("empty variable name");
    if (!seen.insert(n).second) throw PreconditionError("duplicate variable name '" + n + "'");
  }
}

std::optional<std::size_t> VariableSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

SpacePtr make_space(std::vector<std::string> names) {
  return std::make_shared<const VariableSpace>(std::move(names));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------

Monomial::Monomial(std::vector<std::uint32_t> exps)
    : exps_(std::move(exps)), degree_(std::accumulate(exps_.begin(), exps_.end(), 0u)) {}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, std::uint32_t power) {
  if (index >= nvars) throw PreconditionError("variable index out of range");
  Monomial m(nvars);
  m.exps_[index] = power;
  m.degree_ = power;
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (std::size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] += b.exps_[i];
  r.degree_ += b.degree_;
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  return a.exps_ <=> b.exps_;
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw PreconditionError("polynomial without a variable space");
}

Polynomial Polynomial::constant(SpacePtr space, const Rational& c) {
  Polynomial p(std::move(space));
  if (!c.is_zero()) p.terms_.emplace(Monomial(p.space_->size()), c);
  return p;
}

Polynomial Polynomial::variable(SpacePtr space, std::size_t index) {
  Polynomial p(std::move(space));
  p.terms_.emplace(Monomial::variable(p.space_->size(), index), Rational(1));
  return p;
}

Polynomial Polynomial::term(SpacePtr space, const Rational& c, Monomial m) {
  Polynomial p(std::move(space));
  if (m.size() != p.space_->size()) throw PreconditionError("monomial length does not match space");
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

Degree Polynomial::degree() const {
  if (terms_.empty()) return Degree::neg_infinity();
  return Degree(terms_.begin()->first.degree());
}

Rational Polynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational() : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(Monomial(space_->size())); }

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw PreconditionError("zero polynomial has no leading monomial");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw PreconditionError("zero polynomial has no leading coefficient");
  return terms_.begin()->second;
}

bool Polynomial::uses_variable(std::size_t index) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [&](const auto& t) { return t.first[index] != 0; });
}

void Polynomial::require_same_space(const Polynomial& o, const char* op) const {
  if (!same_space(space_, o.space_)) {
    throw SpaceMismatchError(std::string(op) + ": operands live over different variable spaces");
  }
}

void Polynomial::add_term(const Rational& c, const Monomial& m) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::add_scaled(const Polynomial& other, const Rational& c) {
  require_same_space(other, "add");
  if (c.is_zero()) return;
  for (const auto& [m, coeff] : other.terms_) add_term(c.is_one() ? coeff : coeff * c, m);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  add_scaled(o, Rational(1));
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  add_scaled(o, Rational(-1));
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_space(b, "mul");
  Polynomial r(a.space_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ca * cb, ma * mb);
  }
  return r;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  Polynomial r(p.space_);
  if (c.is_zero()) return r;
  for (const auto& [m, coeff] : p.terms_) r.terms_.emplace_hint(r.terms_.end(), m, coeff * c);
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return same_space(a.space_, b.space_) && a.terms_ == b.terms_;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = c.sign() < 0;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const Rational mag = c.abs();
    if (m.is_one()) {
      os << mag.str();
      continue;
    }
    if (!mag.is_one()) os << mag.str() << '*';
    bool first_factor = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!first_factor) os << '*';
      first_factor = false;
      os << space_->name(i);
      if (m[i] > 1) os << '^' << m[i];
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

// ---------------------------------------------------------------------------

Polynomial add(const Polynomial& a, const Polynomial& b) { return a + b; }

Polynomial mul(const Polynomial& a, const Polynomial& b) { return a * b; }

Polynomial pow(const Polynomial& p, std::uint32_t e) {
  Polynomial result = Polynomial::constant(p.space(), Rational(1));
  Polynomial base = p;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial differentiate(const Polynomial& p, std::size_t var_index) {
  if (var_index >= p.space()->size()) {
    throw PreconditionError("differentiate: variable index " + std::to_string(var_index) +
                            " out of range");
  }
  Polynomial r(p.space());
  for (const auto& [m, c] : p.terms()) {
    const std::uint32_t e = m[var_index];
    if (e == 0) continue;
    std::vector<std::uint32_t> exps = m.exponents();
    exps[var_index] = e - 1;
    r.add_term(c * Rational(static_cast<std::int64_t>(e)), Monomial(std::move(exps)));
  }
  return r;
}

Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& assignment,
                      const SpacePtr& target) {
  for (const auto& [idx, image] : assignment) {
    if (!same_space(image.space(), target)) {
      throw SpaceMismatchError("substitute: image of variable " + std::to_string(idx) +
                               " is not over the target space");
    }
  }
  const std::size_t n = p.space()->size();
  // powers[i][k] = image_i^k, grown lazily
  std::vector<std::vector<Polynomial>> powers(n);
  auto power_of = [&](std::size_t i, std::uint32_t k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) {
      const auto it = assignment.find(i);
      if (it == assignment.end()) {
        throw PreconditionError("substitute: no image for variable '" + p.space()->name(i) + "'");
      }
      cache.push_back(Polynomial::constant(target, Rational(1)));
      cache.push_back(it->second);
    }
    while (cache.size() <= k) cache.push_back(cache.back() * cache[1]);
    return cache[k];
  };

  Polynomial result(target);
  for (const auto& [m, c] : p.terms()) {
    Polynomial t = Polynomial::constant(target, c);
    for (std::size_t i = 0; i < n && !t.is_zero(); ++i) {
      if (m[i] != 0) t = t * power_of(i, m[i]);
    }
    result += t;
  }
  return result;
}

double evaluate(const Polynomial& p, std::span<const double> point) {
  if (point.size() != p.space()->size()) {
    throw PreconditionError("evaluate: point has " + std::to_string(point.size()) +
                            " coordinates, space has " + std::to_string(p.space()->size()));
  }
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double v = c.to_double();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::uint32_t k = 0; k < m[i]; ++k) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

Rational evaluate_exact(const Polynomial& p, std::span<const Rational> point) {
  if (point.size() != p.space()->size()) {
    throw PreconditionError("evaluate_exact: point length does not match space");
  }
  Rational sum;
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::uint32_t k = 0; k < m[i]; ++k) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

Polynomial lie_derivative(const Polynomial& p, std::span<const Polynomial> field) {
  const std::size_t n = p.space()->size();
  if (field.size() != n) {
    throw PreconditionError("lie_derivative: field has " + std::to_string(field.size()) +
                            " components, space has " + std::to_string(n));
  }
  for (const auto& fi : field) {
    if (!same_space(fi.space(), p.space())) {
      throw SpaceMismatchError("lie_derivative: field and polynomial live over different spaces");
    }
  }
  Polynomial r(p.space());
  for (std::size_t i = 0; i < n; ++i) {
    if (field[i].is_zero() || !p.uses_variable(i)) continue;
    r += differentiate(p, i) * field[i];
  }
  return r;
}

}  // namespace slin
