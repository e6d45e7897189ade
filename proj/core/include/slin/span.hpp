#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "slin/polynomial.hpp"

namespace slin {

/// Incrementally grown set of generator polynomials with exact span
/// membership.
///
/// Elimination runs modulo a word-sized prime. A nonzero remainder there
/// proves the target is outside the rational span, because every generator
/// that looked dependent modulo the prime was confirmed dependent over Q
/// before it was accepted. A zero remainder is only a candidate: the
/// coefficients are rebuilt over Q from several primes (CRT plus rational
/// reconstruction, with an exact rational solve as the last resort) and are
/// returned only after the identity has been re-checked exactly.
class SpanBasis {
 public:
  explicit SpanBasis(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  std::size_t generator_count() const { return generators_.size(); }
  std::size_t rank() const { return rows_.size(); }
  const Polynomial& generator(std::size_t k) const { return generators_.at(k); }

  /// Appends a generator (dependent ones are kept with no pivot) and
  /// returns its index.
  std::size_t add(const Polynomial& p);

  /// Coefficients c (one per generator) with target = sum c_k * generator_k,
  /// or nullopt when target is outside the span. Dependent generators get 0.
  std::optional<std::vector<Rational>> express(const Polynomial& target) const;

 private:
  struct Row {
    std::vector<std::uint32_t> values;  // dense over columns, pivot entry is 1
    std::size_t pivot = 0;
    std::size_t generator = 0;
  };

  std::optional<std::vector<std::uint32_t>> to_residues(const Polynomial& p, bool register_columns);
  std::optional<std::vector<std::uint32_t>> to_residues(const Polynomial& p) const;
  /// Eliminates against the rows; returns true if something nonzero is left.
  bool reduce(std::vector<std::uint32_t>& v) const;
  void push_row(std::vector<std::uint32_t> v, std::size_t generator);
  /// Re-runs elimination with the first usable prime at or after `start`.
  void rebuild(std::size_t start);
  std::optional<std::vector<Rational>> recover(const Polynomial& target) const;

  SpacePtr space_;
  std::vector<Polynomial> generators_;
  std::vector<bool> independent_;
  std::size_t prime_index_ = 0;
  std::map<Monomial, std::size_t> column_of_;
  std::vector<Monomial> columns_;
  std::vector<Row> rows_;
};

/// One-shot span membership: target = sum c_k * basis_k exactly, or nullopt.
std::optional<std::vector<Rational>> express_in_span(const Polynomial& target,
                                                     std::span<const Polynomial> basis);

}  // namespace slin
