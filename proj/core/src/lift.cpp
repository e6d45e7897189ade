#include "slin/lift.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "slin/span.hpp"
#include "slin/verify.hpp"

namespace slin {

RationalMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return RationalMatrix(rows, std::vector<Rational>(cols));
}

AffineSystem::AffineSystem() : space(make_space({})) {}

AffineSystem::AffineSystem(SpacePtr s, RationalMatrix a_, std::vector<Rational> d_)
    : space(std::move(s)), a(std::move(a_)), d(std::move(d_)) {
  if (!space || space->size() != d.size() || a.size() != d.size()) {
    throw PreconditionError("affine system: matrix, offset and space dimensions disagree");
  }
  for (const auto& row : a) {
    if (row.size() != d.size()) throw PreconditionError("affine system: matrix is not square");
  }
}

std::vector<Polynomial> AffineSystem::field() const {
  std::vector<Polynomial> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Polynomial row = Polynomial::constant(space, d[i]);
    for (std::size_t j = 0; j < dim(); ++j) {
      if (!a[i][j].is_zero()) row.add_term(a[i][j], Monomial::variable(dim(), j));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::uint64_t binomial_bound(std::size_t n, std::uint32_t d) {
  // C(n+d, d) = prod_{k=1..d} (n+k)/k, exact at every step.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t acc = 1;
  for (std::uint32_t k = 1; k <= d; ++k) {
    if (acc > kMax / (n + k)) return kMax;
    acc = acc * (n + k) / k;
  }
  return acc;
}

StageResult prop1_lift(const AffineSystem& affine, const RationalMatrix& linear_part,
                       std::span<const std::string> x2_names, std::span<const Polynomial> seeds,
                       const std::string& prefix, std::size_t first_index, std::size_t stage) {
  const std::size_t n1 = affine.dim();
  const std::size_t n2 = x2_names.size();
  if (seeds.size() != n2 || linear_part.size() != n2) {
    throw PreconditionError("prop1_lift: seeds, linear part and x'' names disagree in length");
  }
  for (const auto& row : linear_part) {
    if (row.size() != n2) throw PreconditionError("prop1_lift: linear part is not square");
  }
  for (const auto& g : seeds) {
    if (!same_space(g.space(), affine.space)) {
      throw PreconditionError("prop1_lift: seed is not a polynomial in the stage coordinates");
    }
  }

  const std::vector<Polynomial> field = affine.field();
  // Generators: 0 = constant, 1..n1 = coordinates, then observables.
  SpanBasis basis(affine.space);
  basis.add(Polynomial::constant(affine.space, Rational(1)));
  for (std::size_t j = 0; j < n1; ++j) basis.add(Polynomial::variable(affine.space, j));

  // Sparse rows, columns: [0, n1) z', [n1, n1+n2) x'', then observables.
  std::vector<std::map<std::size_t, Rational>> rows(n1 + n2);
  std::vector<Rational> offset(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      if (!affine.a[i][j].is_zero()) rows[i][j] = affine.a[i][j];
    }
    offset[i] = affine.d[i];
  }
  for (std::size_t i = 0; i < n2; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (!linear_part[i][j].is_zero()) rows[n1 + i][n1 + j] = linear_part[i][j];
    }
  }

  StageResult result;
  auto accumulate = [&](std::size_t row, const std::vector<Rational>& coeffs) {
    offset[row] += coeffs[0];
    for (std::size_t g = 1; g < coeffs.size(); ++g) {
      if (coeffs[g].is_zero()) continue;
      const std::size_t col = g <= n1 ? g - 1 : n1 + n2 + (g - n1 - 1);
      rows[row][col] += coeffs[g];
      if (rows[row][col].is_zero()) rows[row].erase(col);
    }
  };

  for (std::size_t i = 0; i < n2; ++i) {
    ChainRecord rec;
    rec.stage = stage;
    rec.seed_row = x2_names[i];
    rec.lifted_dim = n1;
    const Degree deg = seeds[i].degree();
    rec.seed_degree = deg.is_neg_infinity() ? 0 : deg.value();
    rec.bound = binomial_bound(n1, rec.seed_degree);

    std::size_t target_row = n1 + i;
    Polynomial q = seeds[i];
    for (;;) {
      if (auto coeffs = basis.express(q)) {
        accumulate(target_row, *coeffs);
        break;
      }
      if (rec.created >= rec.bound) {
        throw InternalError("Krylov chain for row '" + rec.seed_row + "' exceeded dim P_d = " +
                            std::to_string(rec.bound));
      }
      basis.add(q);
      const std::size_t col = n1 + n2 + result.observables.size();
      result.observables.push_back(
          {prefix + std::to_string(first_index + result.observables.size()), q});
      rows.emplace_back();
      offset.emplace_back();
      rows[target_row][col] += Rational(1);
      target_row = col;
      ++rec.created;
      Polynomial next = lie_derivative(q, field);
      q = std::move(next);
    }
    result.chains.push_back(rec);
  }

  std::vector<std::string> names = affine.space->names();
  names.insert(names.end(), x2_names.begin(), x2_names.end());
  for (const auto& o : result.observables) names.push_back(o.name);
  const std::size_t dim = names.size();
  RationalMatrix a = zero_matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (const auto& [j, c] : rows[i]) a[i][j] = c;
  }
  result.system = AffineSystem(make_space(std::move(names)), std::move(a), std::move(offset));
  return result;
}

// ---------------------------------------------------------------------------

std::vector<Polynomial> SuperLinearization::expansions(const SpacePtr& x_space) const {
  std::vector<Polynomial> out;
  out.reserve(dim());
  for (std::size_t i = 0; i < n; ++i) out.push_back(Polynomial::variable(x_space, i));
  for (const auto& o : observables) out.push_back(o.expansion);
  return out;
}

namespace {

std::string render_witnesses(const ConditionReport& report) {
  std::string s = "condition failed:";
  for (const auto& w : report.witnesses) {
    s += " gamma(" + std::to_string(w.from + 1) + "," + std::to_string(w.to + 1) + ") = " + w.weight + ";";
  }
  return s;
}

struct CoordRef {
  bool is_x;
  std::size_t index;  // variable index, or 0-based observable index
};

struct ComponentLift {
  AffineSystem system;
  std::vector<CoordRef> coords;
};

}  // namespace

ConditionFailedError::ConditionFailedError(ConditionReport report)
    : Error(render_witnesses(report)), report_(std::move(report)) {}

std::string observable_prefix(const VariableSpace& vars) {
  std::string prefix = "p";
  auto collides = [&](const std::string& p) {
    for (const auto& name : vars.names()) {
      if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
          std::all_of(name.begin() + static_cast<std::ptrdiff_t>(p.size()), name.end(),
                      [](char c) { return c >= '0' && c <= '9'; })) {
        return true;
      }
    }
    return false;
  };
  while (collides(prefix)) prefix += '_';
  return prefix;
}

SuperLinearization superlinearize(const PolySystem& sys) {
  const Wdg wdg = build_wdg(sys);
  const SccDecomposition scc = scc_decomposition(wdg);
  ConditionReport report = check_condition(wdg, scc);
  if (!report.pass) throw ConditionFailedError(std::move(report));
  const SkeletonGraph skeleton = build_skeleton(wdg, scc);

  const std::size_t n = sys.dimension();
  const std::string prefix = observable_prefix(*sys.vars);
  std::vector<Observable> observables;
  std::vector<ChainRecord> chains;
  std::vector<ComponentLift> parts;

  for (const auto& component : weak_components(wdg)) {
    std::map<std::size_t, std::vector<std::size_t>> layers;
    for (std::size_t v : component) layers[skeleton.depth[scc.component_of[v]]].push_back(v);

    AffineSystem affine;
    std::vector<CoordRef> coords;
    std::vector<Polynomial> expansions;
    std::map<std::size_t, std::size_t> coord_of_var;

    for (const auto& [depth, layer] : layers) {
      const std::size_t k = layer.size();
      std::map<std::size_t, std::size_t> pos_in_layer;
      for (std::size_t r = 0; r < k; ++r) pos_in_layer[layer[r]] = r;

      RationalMatrix linear_part = zero_matrix(k, k);
      std::vector<Polynomial> seeds;
      std::vector<std::string> x2_names;
      std::map<std::size_t, Polynomial> to_stage;
      for (const auto& [var, coord] : coord_of_var) to_stage.emplace(var, Polynomial::variable(affine.space, coord));

      for (std::size_t r = 0; r < k; ++r) {
        const std::size_t j = layer[r];
        x2_names.push_back(sys.vars->name(j));
        Polynomial inhomogeneous(sys.vars);
        for (const auto& [mono, c] : sys.rhs[j].terms()) {
          std::uint32_t own_degree = 0;
          std::size_t own_var = 0;
          for (const auto& [v, p] : pos_in_layer) {
            if (mono[v] != 0) {
              own_degree += mono[v];
              own_var = v;
            }
          }
          if (own_degree == 0) {
            for (std::size_t v = 0; v < n; ++v) {
              if (mono[v] != 0 && !coord_of_var.count(v)) {
                throw DecompositionError("dynamics of '" + sys.vars->name(j) + "' depend on '" +
                                         sys.vars->name(v) + "', which is not in a lower layer");
              }
            }
            inhomogeneous.add_term(c, mono);
          } else if (mono.degree() == 1) {
            linear_part[r][pos_in_layer[own_var]] += c;
          } else {
            throw DecompositionError("dynamics of '" + sys.vars->name(j) +
                                     "' are not affine in the variables of its layer");
          }
        }
        seeds.push_back(substitute(inhomogeneous, to_stage, affine.space));
      }

      StageResult stage = prop1_lift(affine, linear_part, x2_names, seeds, prefix,
                                     observables.size() + 1, depth);

      std::map<std::size_t, Polynomial> to_x;
      for (std::size_t c = 0; c < expansions.size(); ++c) to_x.emplace(c, expansions[c]);
      for (std::size_t r = 0; r < k; ++r) {
        coord_of_var[layer[r]] = coords.size();
        coords.push_back({true, layer[r]});
        expansions.push_back(Polynomial::variable(sys.vars, layer[r]));
      }
      for (auto& o : stage.observables) {
        Polynomial expansion = substitute(o.definition, to_x, sys.vars);
        coords.push_back({false, observables.size()});
        expansions.push_back(expansion);
        observables.push_back({observables.size() + 1, std::move(o.name), std::move(o.definition),
                               std::move(expansion)});
      }
      chains.insert(chains.end(), stage.chains.begin(), stage.chains.end());
      affine = std::move(stage.system);
    }
    parts.push_back({std::move(affine), std::move(coords)});
  }

  SuperLinearization sl;
  sl.n = n;
  sl.m = observables.size();
  sl.a = zero_matrix(sl.dim(), sl.dim());
  sl.d.assign(sl.dim(), Rational());
  for (const auto& part : parts) {
    auto global = [&](const CoordRef& c) { return c.is_x ? c.index : n + c.index; };
    for (std::size_t i = 0; i < part.coords.size(); ++i) {
      const std::size_t gi = global(part.coords[i]);
      sl.d[gi] = part.system.d[i];
      for (std::size_t j = 0; j < part.coords.size(); ++j) {
        sl.a[gi][global(part.coords[j])] = part.system.a[i][j];
      }
    }
  }
  sl.var_names = sys.vars->names();
  for (const auto& o : observables) sl.var_names.push_back(o.name);
  sl.observables = std::move(observables);
  sl.chains = std::move(chains);

  const SymbolicVerdict verdict = verify_symbolic(sys, sl);
  if (!verdict.ok) throw InternalError("constructed lift fails symbolic verification: " + verdict.diagnostic);
  return sl;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Polynomial>> lie_iterates(const PolySystem& sys, std::size_t count) {
  std::vector<std::vector<Polynomial>> out;
  out.push_back(sys.rhs);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Polynomial> next;
    next.reserve(sys.dimension());
    for (const auto& component : out.back()) next.push_back(lie_derivative(component, sys.rhs));
    out.push_back(std::move(next));
  }
  return out;
}

std::optional<XumamaCertificate> xumama_check(const PolySystem& sys, std::size_t max_n) {
  if (max_n < 1) throw PreconditionError("xumama_check: max_n must be at least 1");
  const std::size_t n = sys.dimension();
  // One marker variable per component turns a vector of polynomials into a
  // single polynomial, linear in the markers.
  std::vector<std::string> names = sys.vars->names();
  for (std::size_t i = 0; i < n; ++i) names.push_back("#e" + std::to_string(i + 1));
  const SpacePtr stacked_space = make_space(std::move(names));
  auto stack = [&](const std::vector<Polynomial>& v) {
    Polynomial out(stacked_space);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [mono, c] : v[i].terms()) {
        std::vector<std::uint32_t> exps = mono.exponents();
        exps.resize(2 * n, 0);
        exps[n + i] = 1;
        out.add_term(c, Monomial(std::move(exps)));
      }
    }
    return out;
  };

  SpanBasis basis(stacked_space);
  std::vector<Polynomial> current = sys.rhs;
  basis.add(stack(current));
  for (std::size_t order = 1; order <= max_n; ++order) {
    std::vector<Polynomial> next;
    next.reserve(n);
    for (const auto& component : current) next.push_back(lie_derivative(component, sys.rhs));
    const Polynomial stacked = stack(next);
    if (auto alpha = basis.express(stacked)) return XumamaCertificate{order, std::move(*alpha)};
    basis.add(stacked);
    current = std::move(next);
  }
  return std::nullopt;
}

}  // namespace slin
