#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slin/depgraph.hpp"
#include "slin/polynomial.hpp"
#include "slin/system.hpp"

namespace slin {

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix zero_matrix(std::size_t rows, std::size_t cols);

/// z' = A z + D over the coordinates named by `space`.
struct AffineSystem {
  SpacePtr space;
  RationalMatrix a;
  std::vector<Rational> d;

  /// Empty system over an empty space.
  AffineSystem();
  AffineSystem(SpacePtr space, RationalMatrix a, std::vector<Rational> d);

  std::size_t dim() const { return d.size(); }
  /// Row i as the polynomial sum_j A_ij z_j + D_i.
  std::vector<Polynomial> field() const;
};

/// An observable adjoined by a lifting stage.
struct StageObservable {
  std::string name;
  /// Polynomial in the stage's input coordinates z'.
  Polynomial definition;
};

/// Per-seed bookkeeping of one Krylov chain.
struct ChainRecord {
  std::size_t stage = 0;
  /// Coordinate name of the row whose inhomogeneous part seeded the chain.
  std::string seed_row;
  /// Dimension n' of the stage's input coordinates.
  std::size_t lifted_dim = 0;
  /// Seed degree d over z' (0 for the zero seed).
  std::uint32_t seed_degree = 0;
  /// Observables this chain created.
  std::size_t created = 0;
  /// C(n' + d, d), saturated at UINT64_MAX.
  std::uint64_t bound = 0;
};

struct StageResult {
  /// Affine system over (z', x'', new observables).
  AffineSystem system;
  std::vector<StageObservable> observables;
  std::vector<ChainRecord> chains;
};

/// Lifts  z' = A' z' + D,  x'' = A'' x'' + g(z')  to one affine system.
/// Each seed g_i grows a chain q_0 = g_i, q_{k+1} = L(q_k) along the affine
/// field; a q_k outside span{1, z', observables so far} becomes a new
/// observable, and the first q_k inside the span closes the chain.
/// New observables are named `<prefix><first_index>`, `<prefix><first_index+1>`, ...
StageResult prop1_lift(const AffineSystem& affine, const RationalMatrix& linear_part,
                       std::span<const std::string> x2_names, std::span<const Polynomial> seeds,
                       const std::string& prefix = "p", std::size_t first_index = 1,
                       std::size_t stage = 0);

/// C(n + d, d), saturating.
std::uint64_t binomial_bound(std::size_t n, std::uint32_t d);

struct Observable {
  /// 1-based position among all observables.
  std::size_t index = 0;
  std::string name;
  Polynomial definition;
  /// The same observable written in the original variables.
  Polynomial expansion;
};

/// z' = A z + D on (x_1..x_n, p_1..p_m) reproducing x' = f(x) under z(0) = (x0, p(x0)).
struct SuperLinearization {
  std::size_t n = 0;
  std::size_t m = 0;
  RationalMatrix a;
  std::vector<Rational> d;
  std::vector<Observable> observables;
  std::vector<std::string> var_names;
  std::vector<ChainRecord> chains;

  std::size_t dim() const { return n + m; }
  /// x-expansion of every lifted coordinate: x_i for i < n, then observables.
  std::vector<Polynomial> expansions(const SpacePtr& x_space) const;
};

class ConditionFailedError : public Error {
 public:
  explicit ConditionFailedError(ConditionReport report);
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

/// A layer's dynamics are not affine in its own variables. Signals a bug
/// upstream of the lifter.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Full pipeline: condition check, depth layering per weak component, one
/// prop1_lift per layer, assembly, and a mandatory symbolic self-check.
SuperLinearization superlinearize(const PolySystem& sys);

/// Prefix for observable names that cannot collide with the system's variables.
std::string observable_prefix(const VariableSpace& vars);

struct XumamaCertificate {
  std::size_t order = 0;  // N
  std::vector<Rational> alpha;
};

/// Smallest N <= max_n with L_f^N f = sum_{k<N} alpha_k L_f^k f, where the
/// iterates are vector-valued and L_f^0 f = f.
std::optional<XumamaCertificate> xumama_check(const PolySystem& sys, std::size_t max_n);

/// The iterates L_f^0 f, ..., L_f^count f.
std::vector<std::vector<Polynomial>> lie_iterates(const PolySystem& sys, std::size_t count);

}  // namespace slin
