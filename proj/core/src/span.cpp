#include "slin/span.hpp"

#include <algorithm>
#include <utility>

#include "slin/error.hpp"

namespace slin {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

constexpr std::size_t kPrimeCount = 256;
// Coefficient recovery gives up on CRT after this many primes (~6000 bits)
// and falls back to an exact rational solve.
constexpr std::size_t kMaxRecoveryPrimes = 200;

/// Descending primes below 2^31, so products of residues fit in 64 bits.
const std::vector<u32>& primes() {
  static const std::vector<u32> list = [] {
    std::vector<u32> out;
    for (u64 c = (u64{1} << 31) - 1; out.size() < kPrimeCount; c -= 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= c; d += 2) {
        if (c % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(static_cast<u32>(c));
    }
    return out;
  }();
  return list;
}

u32 mul_mod(u32 a, u32 b, u32 p) { return static_cast<u32>(static_cast<u64>(a) * b % p); }

u32 sub_mod(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + (p - b); }

u32 inv_mod(u32 a, u32 p) {
  u32 result = 1, base = a;
  for (u32 e = p - 2; e; e >>= 1) {
    if (e & 1) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
  }
  return result;
}

std::optional<u32> residue(const Rational& r, u32 p) {
  const auto den = static_cast<u32>(mpz_fdiv_ui(r.value().get_den_mpz_t(), p));
  if (den == 0) return std::nullopt;
  const auto num = static_cast<u32>(mpz_fdiv_ui(r.value().get_num_mpz_t(), p));
  return mul_mod(num, inv_mod(den, p), p);
}

/// Solves the square system m * x = b modulo p; nullopt if singular.
/// Each row of `m` carries b as an extra trailing entry.
std::optional<std::vector<u32>> solve_mod(std::vector<std::vector<u32>> m, u32 p) {
  const std::size_t r = m.size();
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && m[piv][col] == 0) ++piv;
    if (piv == r) return std::nullopt;
    std::swap(m[piv], m[col]);
    const u32 inv = inv_mod(m[col][col], p);
    for (std::size_t k = col; k <= r; ++k) m[col][k] = mul_mod(m[col][k], inv, p);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || m[i][col] == 0) continue;
      const u32 f = m[i][col];
      for (std::size_t k = col; k <= r; ++k) m[i][k] = sub_mod(m[i][k], mul_mod(f, m[col][k], p), p);
    }
  }
  std::vector<u32> x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = m[i][r];
  return x;
}

/// n/d with |n|, d <= sqrt(modulus / 2) and n/d = a mod modulus, if one exists.
std::optional<Rational> reconstruct(const mpz_class& a, const mpz_class& modulus) {
  mpz_class bound = sqrt(mpz_class(modulus / 2));
  mpz_class r0 = modulus, r1 = a, t0 = 0, t1 = 1;
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    mpz_class tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  if (gcd(r1, t1) != 1) return std::nullopt;
  mpq_class q(r1, t1);
  q.canonicalize();
  return Rational(q);
}

/// Exact Gauss-Jordan over Q; nullopt if singular. Slow, last resort only.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> m) {
  const std::size_t r = m.size();
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && m[piv][col].is_zero()) ++piv;
    if (piv == r) return std::nullopt;
    std::swap(m[piv], m[col]);
    const Rational inv = Rational(1) / m[col][col];
    for (std::size_t k = col; k <= r; ++k) m[col][k] *= inv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || m[i][col].is_zero()) continue;
      const Rational f = m[i][col];
      for (std::size_t k = col; k <= r; ++k) m[i][k] -= f * m[col][k];
    }
  }
  std::vector<Rational> x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = m[i][r];
  return x;
}

}  // namespace

SpanBasis::SpanBasis(SpacePtr space) : space_(std::move(space)) {}

std::optional<std::vector<u32>> SpanBasis::to_residues(const Polynomial& p, bool register_columns) {
  if (register_columns) {
    for (const auto& [m, c] : p.terms()) {
      if (column_of_.emplace(m, columns_.size()).second) columns_.push_back(m);
    }
  }
  return std::as_const(*this).to_residues(p);
}

std::optional<std::vector<u32>> SpanBasis::to_residues(const Polynomial& p) const {
  const u32 prime = primes()[prime_index_];
  std::vector<u32> v(columns_.size(), 0);
  for (const auto& [m, c] : p.terms()) {
    const auto col = column_of_.find(m);
    if (col == column_of_.end()) return std::nullopt;
    const auto r = residue(c, prime);
    if (!r) return std::nullopt;
    v[col->second] = *r;
  }
  return v;
}

bool SpanBasis::reduce(std::vector<u32>& v) const {
  const u32 prime = primes()[prime_index_];
  for (const Row& row : rows_) {
    const u32 f = v[row.pivot];
    if (f == 0) continue;
    for (std::size_t k = 0; k < row.values.size(); ++k) {
      if (row.values[k] != 0) v[k] = sub_mod(v[k], mul_mod(f, row.values[k], prime), prime);
    }
  }
  return std::any_of(v.begin(), v.end(), [](u32 x) { return x != 0; });
}

void SpanBasis::push_row(std::vector<u32> v, std::size_t generator) {
  const u32 prime = primes()[prime_index_];
  const auto pivot = static_cast<std::size_t>(std::find_if(v.begin(), v.end(), [](u32 x) { return x != 0; }) - v.begin());
  const u32 inv = inv_mod(v[pivot], prime);
  for (auto& x : v) x = mul_mod(x, inv, prime);
  rows_.push_back({std::move(v), pivot, generator});
}

void SpanBasis::rebuild(std::size_t start) {
  for (prime_index_ = start; prime_index_ < primes().size(); ++prime_index_) {
    rows_.clear();
    bool usable = true;
    for (std::size_t k = 0; k < generators_.size() && usable; ++k) {
      if (!independent_[k]) continue;
      auto v = to_residues(generators_[k]);
      if (!v || !reduce(*v)) {
        usable = false;
        break;
      }
      push_row(std::move(*v), k);
    }
    if (usable) return;
  }
  throw InternalError("span basis: no usable prime");
}

std::size_t SpanBasis::add(const Polynomial& p) {
  if (!same_space(p.space(), space_)) throw SpaceMismatchError("span basis: generator over a foreign space");
  const std::size_t index = generators_.size();
  generators_.push_back(p);
  independent_.push_back(false);
  for (;;) {
    auto v = to_residues(p, true);
    if (!v) {
      // A denominator vanishes modulo the current prime.
      rebuild(prime_index_ + 1);
      continue;
    }
    if (reduce(*v)) {
      independent_[index] = true;
      push_row(std::move(*v), index);
      return index;
    }
    if (recover(p)) return index;
    // Dependent modulo the prime but not over Q: the prime is unlucky.
    independent_[index] = true;
    rebuild(prime_index_ + 1);
    return index;
  }
}

std::optional<std::vector<Rational>> SpanBasis::express(const Polynomial& target) const {
  if (!same_space(target.space(), space_)) throw SpaceMismatchError("span basis: target over a foreign space");
  for (const auto& [m, c] : target.terms()) {
    // No generator mentions this monomial.
    if (!column_of_.count(m)) return std::nullopt;
  }
  if (auto v = to_residues(target)) {
    if (reduce(*v)) return std::nullopt;
  }
  return recover(target);
}

std::optional<std::vector<Rational>> SpanBasis::recover(const Polynomial& target) const {
  std::vector<Rational> coeffs(generators_.size());
  const std::size_t r = rows_.size();
  if (target.is_zero()) return coeffs;
  if (r == 0) return std::nullopt;

  auto verified = [&](const std::vector<Rational>& sol) -> bool {
    Polynomial check = -target;
    for (std::size_t i = 0; i < r; ++i) {
      coeffs[rows_[i].generator] = sol[i];
      check.add_scaled(generators_[rows_[i].generator], sol[i]);
    }
    return check.is_zero();
  };

  // Independent generators restricted to the pivot columns form a square
  // system that is nonsingular over Q; its solution is the only candidate.
  std::vector<std::vector<Rational>> exact(r, std::vector<Rational>(r + 1));
  for (std::size_t j = 0; j < r; ++j) {
    const Monomial& m = columns_[rows_[j].pivot];
    for (std::size_t i = 0; i < r; ++i) exact[j][i] = generators_[rows_[i].generator].coefficient(m);
    exact[j][r] = target.coefficient(m);
  }

  std::vector<mpz_class> residues(r);
  mpz_class modulus = 1;
  std::size_t used = 0, next_attempt = 1;
  for (std::size_t pi = 0; pi < primes().size() && used < kMaxRecoveryPrimes; ++pi) {
    const u32 prime = primes()[pi];
    std::vector<std::vector<u32>> m(r, std::vector<u32>(r + 1));
    bool ok = true;
    for (std::size_t j = 0; j < r && ok; ++j) {
      for (std::size_t i = 0; i <= r && ok; ++i) {
        const auto x = residue(exact[j][i], prime);
        if (!x) ok = false;
        else m[j][i] = *x;
      }
    }
    if (!ok) continue;
    const auto sol = solve_mod(std::move(m), prime);
    if (!sol) continue;

    // Chinese remaindering: x = x_old + M * ((a - x_old) / M mod p).
    const u32 m_inv = inv_mod(static_cast<u32>(mpz_fdiv_ui(modulus.get_mpz_t(), prime)), prime);
    for (std::size_t i = 0; i < r; ++i) {
      const auto old = static_cast<u32>(mpz_fdiv_ui(residues[i].get_mpz_t(), prime));
      residues[i] += modulus * mul_mod(sub_mod((*sol)[i], old, prime), m_inv, prime);
    }
    modulus *= prime;
    ++used;

    if (used < next_attempt) continue;
    next_attempt = used + std::max<std::size_t>(1, used / 2);
    std::vector<Rational> candidate;
    candidate.reserve(r);
    for (std::size_t i = 0; i < r; ++i) {
      auto q = reconstruct(residues[i], modulus);
      if (!q) break;
      candidate.push_back(std::move(*q));
    }
    if (candidate.size() == r && verified(candidate)) return coeffs;
  }

  const auto sol = solve_exact(std::move(exact));
  if (!sol) throw InternalError("span basis: pivot system is singular over Q");
  if (verified(*sol)) return coeffs;
  return std::nullopt;
}

std::optional<std::vector<Rational>> express_in_span(const Polynomial& target,
                                                     std::span<const Polynomial> basis) {
  SpanBasis sb(target.space());
  for (const auto& b : basis) sb.add(b);
  return sb.express(target);
}

}  // namespace slin
