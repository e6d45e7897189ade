#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slin/lift.hpp"
#include "slin/system.hpp"

namespace slin {

struct SymbolicVerdict {
  bool ok = false;
  /// First failing lifted row (0-based), when !ok.
  std::optional<std::size_t> row;
  std::string row_name;
  /// Rendered nonzero residual L_f(q_row) - (A q + D)_row.
  std::string residual;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

/// Checks L_f(q_i) = sum_j A_ij q_j + D_i exactly for every lifted coordinate,
/// where q_i is the coordinate's x-expansion. Throws PreconditionError on
/// dimension mismatch.
SymbolicVerdict verify_symbolic(const PolySystem& sys, const SuperLinearization& sl);

/// Numerically evaluable vector field R^dim -> R^dim.
class VectorField {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;

  VectorField(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  /// Polynomial field; coefficients rounded to doubles once.
  static VectorField from_polynomials(std::span<const Polynomial> components);
  /// z -> A z + D.
  static VectorField affine(const RationalMatrix& a, std::span<const Rational> d);

  std::size_t dim() const { return dim_; }
  void operator()(std::span<const double> x, std::span<double> out) const { fn_(x, out); }

 private:
  std::size_t dim_;
  Fn fn_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double last_finite_time, const std::string& what);
  double last_finite_time() const { return last_finite_time_; }

 private:
  double last_finite_time_;
};

/// Classic fixed-step RK4 sampled at 0, h, 2h, ..., t_end (the last step is
/// shortened if t_end is not a multiple of h).
Trajectory simulate(const VectorField& field, std::span<const double> x0, double t_end, double step);

/// Integrates x' = f(x) from x0 and the lift from (x0, p(x0)) on the same
/// grid; returns the max over samples of |Pi(z(t)) - x(t)|_inf.
double verify_numeric(const PolySystem& sys, const SuperLinearization& sl, std::span<const double> x0,
                      double t_end, double step);

struct FlowComparison {
  Trajectory original;
  Trajectory lifted;
  double max_error = 0.0;
};

FlowComparison compare_flows(const PolySystem& sys, const SuperLinearization& sl,
                             std::span<const double> x0, double t_end, double step);

/// Header `t,<names...>`, shortest round-trip decimal rendering.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::span<const std::string> names);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace slin
