#include "slin/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace slin {

SymbolicVerdict verify_symbolic(const PolySystem& sys, const SuperLinearization& sl) {
  const std::size_t dim = sl.dim();
  if (sl.n != sys.dimension()) {
    throw PreconditionError("lift is for a " + std::to_string(sl.n) + "-dimensional system, system has " +
                            std::to_string(sys.dimension()) + " variables");
  }
  if (sl.observables.size() != sl.m || sl.a.size() != dim || sl.d.size() != dim) {
    throw PreconditionError("lift dimensions are inconsistent");
  }
  for (const auto& row : sl.a) {
    if (row.size() != dim) throw PreconditionError("lift matrix is not square");
  }
  const std::vector<Polynomial> q = sl.expansions(sys.vars);
  for (const auto& e : q) {
    if (!same_space(e.space(), sys.vars)) throw SpaceMismatchError("observable expansion is not over the system variables");
  }

  for (std::size_t i = 0; i < dim; ++i) {
    Polynomial residual = lie_derivative(q[i], sys.rhs);
    residual.add_scaled(Polynomial::constant(sys.vars, Rational(1)), -sl.d[i]);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!sl.a[i][j].is_zero()) residual.add_scaled(q[j], -sl.a[i][j]);
    }
    if (!residual.is_zero()) {
      SymbolicVerdict v;
      v.row = i;
      v.row_name = i < sl.var_names.size() ? sl.var_names[i] : "z" + std::to_string(i + 1);
      v.residual = residual.str();
      v.diagnostic = "row " + std::to_string(i + 1) + " (" + v.row_name + "'): residual " + v.residual;
      return v;
    }
  }
  SymbolicVerdict v;
  v.ok = true;
  return v;
}

// ---------------------------------------------------------------------------

namespace {

struct CompiledTerm {
  double coeff;
  std::vector<std::pair<std::size_t, std::uint32_t>> factors;
};

}  // namespace

VectorField VectorField::from_polynomials(std::span<const Polynomial> components) {
  std::vector<std::vector<CompiledTerm>> compiled;
  std::size_t nvars = components.empty() ? 0 : components.front().space()->size();
  for (const auto& p : components) {
    if (p.space()->size() != nvars) throw PreconditionError("vector field components over different spaces");
    std::vector<CompiledTerm> terms;
    for (const auto& [m, c] : p.terms()) {
      CompiledTerm t{c.to_double(), {}};
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != 0) t.factors.emplace_back(i, m[i]);
      }
      terms.push_back(std::move(t));
    }
    compiled.push_back(std::move(terms));
  }
  if (compiled.size() != nvars) throw PreconditionError("vector field must map R^n to R^n");
  return VectorField(nvars, [compiled = std::move(compiled)](std::span<const double> x, std::span<double> out) {
    for (std::size_t k = 0; k < compiled.size(); ++k) {
      double sum = 0.0;
      for (const auto& t : compiled[k]) {
        double v = t.coeff;
        for (const auto& [i, e] : t.factors) {
          for (std::uint32_t r = 0; r < e; ++r) v *= x[i];
        }
        sum += v;
      }
      out[k] = sum;
    }
  });
}

VectorField VectorField::affine(const RationalMatrix& a, std::span<const Rational> d) {
  const std::size_t dim = d.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(dim);
  std::vector<double> offset(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    offset[i] = d[i].to_double();
    for (std::size_t j = 0; j < dim; ++j) {
      if (!a.at(i).at(j).is_zero()) rows[i].emplace_back(j, a[i][j].to_double());
    }
  }
  return VectorField(dim, [rows = std::move(rows), offset = std::move(offset)](std::span<const double> z,
                                                                               std::span<double> out) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double sum = offset[i];
      for (const auto& [j, c] : rows[i]) sum += c * z[j];
      out[i] = sum;
    }
  });
}

DivergenceError::DivergenceError(double last_finite_time, const std::string& what)
    : Error(what), last_finite_time_(last_finite_time) {}

Trajectory simulate(const VectorField& field, std::span<const double> x0, double t_end, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw PreconditionError("simulate: step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw PreconditionError("simulate: t_end must be nonnegative");
  const std::size_t n = field.dim();
  if (x0.size() != n) throw PreconditionError("simulate: initial state has wrong dimension");
  for (double v : x0) {
    if (!std::isfinite(v)) throw PreconditionError("simulate: initial state is not finite");
  }

  Trajectory traj;
  std::vector<double> x(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  const double full_steps = std::floor(t_end / step + 1e-9);
  const auto count = static_cast<std::size_t>(full_steps);
  const bool partial = t_end - full_steps * step > 1e-12 * std::max(1.0, t_end);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto advance = [&](double h) {
    field(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  const std::size_t total = count + (partial ? 1 : 0);
  for (std::size_t k = 1; k <= total; ++k) {
    const double t = k <= count ? static_cast<double>(k) * step : t_end;
    advance(t - traj.times.back());
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
      const double last = traj.times.back();
      throw DivergenceError(last, "integration diverged after t = " + format_double(last));
    }
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

FlowComparison compare_flows(const PolySystem& sys, const SuperLinearization& sl, std::span<const double> x0,
                             double t_end, double step) {
  if (sl.n != sys.dimension()) throw PreconditionError("lift and system dimensions differ");
  if (x0.size() != sys.dimension()) throw PreconditionError("initial state has wrong dimension");
  FlowComparison cmp;
  cmp.original = simulate(VectorField::from_polynomials(sys.rhs), x0, t_end, step);

  std::vector<double> z0(x0.begin(), x0.end());
  for (const auto& o : sl.observables) z0.push_back(evaluate(o.expansion, x0));
  cmp.lifted = simulate(VectorField::affine(sl.a, sl.d), z0, t_end, step);

  for (std::size_t k = 0; k < cmp.original.times.size(); ++k) {
    for (std::size_t i = 0; i < sl.n; ++i) {
      cmp.max_error = std::max(cmp.max_error, std::abs(cmp.lifted.states[k][i] - cmp.original.states[k][i]));
    }
  }
  return cmp;
}

double verify_numeric(const PolySystem& sys, const SuperLinearization& sl, std::span<const double> x0,
                      double t_end, double step) {
  return compare_flows(sys, sl, x0, t_end, step).max_error;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::span<const std::string> names) {
  os << 't';
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    for (std::size_t i = 0; i < names.size() && i < traj.states[k].size(); ++i) {
      os << ',' << format_double(traj.states[k][i]);
    }
    os << '\n';
  }
}

}  // namespace slin
