#include "commands.hpp"

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lift_document.hpp"
#include "slin/depgraph.hpp"
#include "slin/lift.hpp"
#include "slin/system.hpp"
#include "slin/verify.hpp"

namespace slin::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

bool color_enabled() {
  if (const char* env = std::getenv("SLIN_COLOR")) {
    if (std::string_view(env) == "0") return false;
    if (std::string_view(env) == "1") return true;
  }
  return ::isatty(STDOUT_FILENO) != 0;
}

std::string paint(const std::string& text, const char* ansi) {
  if (!color_enabled()) return text;
  return std::string("\x1b[") + ansi + "m" + text + "\x1b[0m";
}

std::string pass_label() { return paint("PASS", "32"); }
std::string fail_label() { return paint("FAIL", "31"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << contents)) throw UsageError("cannot write '" + path + "'");
}

PolySystem load_system(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_system(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

std::string gamma_label(const ConditionWitness& w) {
  return "gamma(" + std::to_string(w.from + 1) + "," + std::to_string(w.to + 1) + ") = " + w.weight;
}

/// sum_j A_ij z_j + D_i in coordinate order, constant last.
std::string render_affine_row(const SuperLinearization& sl, std::size_t i) {
  std::string s;
  auto append = [&](const Rational& c, const std::string& name) {
    const bool neg = c.sign() < 0;
    if (s.empty()) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    const Rational mag = c.abs();
    if (name.empty()) {
      s += mag.str();
    } else {
      if (!mag.is_one()) s += mag.str() + "*";
      s += name;
    }
  };
  for (std::size_t j = 0; j < sl.dim(); ++j) {
    if (!sl.a[i][j].is_zero()) append(sl.a[i][j], sl.var_names[j]);
  }
  if (!sl.d[i].is_zero()) append(sl.d[i], "");
  return s.empty() ? "0" : s;
}

std::vector<double> parse_point(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--x0: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw UsageError("--x0: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& file, const std::string& dot_path, std::ostream& out) {
  const PolySystem sys = load_system(file);
  const Wdg wdg = build_wdg(sys);
  const SccDecomposition scc = scc_decomposition(wdg);
  const SkeletonGraph skel = build_skeleton(wdg, scc);
  const ConditionReport report = check_condition(wdg, scc);

  out << "system: " << sys.dimension() << " variables, " << wdg.edge_count() << " edges\n";
  out << "strong components: " << scc.size() << '\n';
  for (std::size_t u = 0; u < scc.size(); ++u) {
    out << "  u" << u + 1 << " = {";
    for (std::size_t k = 0; k < scc.components[u].size(); ++k) {
      out << (k ? ", " : "") << sys.vars->name(scc.components[u][k]);
    }
    out << "}  depth " << skel.depth[u] << '\n';
  }
  out << "depth layers:";
  for (std::size_t m = 0; m < skel.layers.size(); ++m) {
    out << " U" << m << "={";
    for (std::size_t k = 0; k < skel.layers[m].size(); ++k) out << (k ? "," : "") << 'u' << skel.layers[m][k] + 1;
    out << '}';
  }
  out << '\n';

  out << "intra-component weights:";
  bool any = false;
  for (const auto& [key, w] : wdg.weights()) {
    if (scc.component_of[key.first] != scc.component_of[key.second]) continue;
    out << (any ? ", " : " ") << "gamma(" << key.first + 1 << ',' << key.second + 1 << ") = " << w.str();
    any = true;
  }
  out << (any ? "\n" : " none\n");

  if (!dot_path.empty()) {
    write_file(dot_path, wdg_to_dot(wdg) + skeleton_to_dot(wdg, scc, skel));
    out << "wrote " << dot_path << '\n';
  }

  if (report.pass) {
    out << pass_label() << ": every cycle of the dependency graph has a constant weight product\n";
    return kExitOk;
  }
  out << fail_label() << ": " << report.witnesses.size()
      << " intra-component edge(s) with nonconstant weight (super-linearizability unknown)\n";
  for (const auto& w : report.witnesses) out << "  " << gamma_label(w) << "  [component u" << w.component + 1 << "]\n";
  return kExitNegative;
}

int cmd_lift(const std::string& file, const std::string& out_path, std::ostream& out) {
  const PolySystem sys = load_system(file);
  SuperLinearization sl;
  try {
    sl = superlinearize(sys);
  } catch (const ConditionFailedError& e) {
    out << fail_label() << ": condition does not hold, no lift constructed\n";
    for (const auto& w : e.report().witnesses) out << "  " << gamma_label(w) << '\n';
    return kExitNegative;
  }
  out << "n=" << sl.n << " m=" << sl.m << " dimension=" << sl.dim() << '\n';
  out << "lifted system:\n";
  for (std::size_t i = 0; i < sl.dim(); ++i) out << "  " << sl.var_names[i] << "' = " << render_affine_row(sl, i) << '\n';
  if (sl.m > 0) {
    out << "observables:\n";
    for (const auto& o : sl.observables) out << "  " << o.name << " = " << o.expansion.str() << '\n';
  }
  // superlinearize refuses to return a lift that fails this check.
  out << "symbolic verification: " << (verify_symbolic(sys, sl).ok ? pass_label() : fail_label()) << '\n';
  if (!out_path.empty()) {
    write_file(out_path, render_lift_document(make_lift_document(sl, *sys.vars)));
    out << "wrote " << out_path << '\n';
  }
  return kExitOk;
}

SuperLinearization load_lift(const std::string& path, const PolySystem& sys) {
  try {
    return to_superlinearization(parse_lift_document_text(read_file(path)), sys.vars);
  } catch (const SchemaError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_verify(const std::string& file, const std::string& lift_path, std::ostream& out) {
  const PolySystem sys = load_system(file);
  const SuperLinearization sl = load_lift(lift_path, sys);
  SymbolicVerdict verdict;
  try {
    verdict = verify_symbolic(sys, sl);
  } catch (const PreconditionError& e) {
    throw UsageError(lift_path + ": " + e.what());
  }
  if (verdict.ok) {
    out << pass_label() << ": lift of dimension " << sl.dim() << " (n=" << sl.n << ", m=" << sl.m
        << ") verified symbolically\n";
    return kExitOk;
  }
  out << fail_label() << ": " << verdict.diagnostic << '\n';
  return kExitNegative;
}

int cmd_simulate(const std::string& file, const std::string& lift_path, const std::string& x0_csv, double t_end,
                 double step, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const PolySystem sys = load_system(file);
  const std::vector<double> x0 = parse_point(x0_csv);
  if (x0.size() != sys.dimension()) {
    throw UsageError("--x0 has " + std::to_string(x0.size()) + " values, system has " +
                     std::to_string(sys.dimension()) + " variables");
  }
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  if (!(t_end >= 0.0)) throw UsageError("--t must be nonnegative");

  std::ostream& report = out_path.empty() ? err : out;
  Trajectory traj;
  try {
    if (lift_path.empty()) {
      traj = simulate(VectorField::from_polynomials(sys.rhs), x0, t_end, step);
    } else {
      const SuperLinearization sl = load_lift(lift_path, sys);
      FlowComparison cmp = compare_flows(sys, sl, x0, t_end, step);
      report << "max projection error: " << format_double(cmp.max_error) << '\n';
      traj = std::move(cmp.original);
    }
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kExitDiverged;
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, traj, sys.vars->names());
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_file(out_path, csv.str());
    out << "wrote " << traj.times.size() << " samples to " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_xumama(const std::string& file, std::size_t max_n, std::ostream& out) {
  if (max_n < 1) throw UsageError("--max-n must be at least 1");
  const PolySystem sys = load_system(file);
  const auto cert = xumama_check(sys, max_n);
  if (!cert) {
    out << "NOT FOUND up to " << max_n << '\n';
    return kExitNegative;
  }
  out << "N=" << cert->order << ", alpha=[";
  for (std::size_t k = 0; k < cert->alpha.size(); ++k) out << (k ? ", " : "") << cert->alpha[k].str();
  out << "]\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Super-linearization toolkit for polynomial ODE systems", "slin"};
  app.require_subcommand(1);

  std::string file, dot_path, out_path, lift_path, x0_csv;
  double t_end = 2.0, step = 1e-3;
  std::size_t max_n = 10;

  auto* check = app.add_subcommand("check", "Decide the cycle-weight condition on the dependency graph");
  check->add_option("file", file, "System file")->required();
  check->add_option("--dot", dot_path, "Write Graphviz DOT of the WDG and skeleton");

  auto* lift = app.add_subcommand("lift", "Construct and verify a super-linearization");
  lift->add_option("file", file, "System file")->required();
  lift->add_option("-o,--output", out_path, "Write the lift document (JSON)");

  auto* verify = app.add_subcommand("verify", "Symbolically verify a lift document against a system");
  verify->add_option("file", file, "System file")->required();
  verify->add_option("lift", lift_path, "Lift document (JSON)")->required();

  auto* sim = app.add_subcommand("simulate", "Integrate the system with fixed-step RK4");
  sim->add_option("file", file, "System file")->required();
  sim->add_option("--lift", lift_path, "Also integrate this lift and report the projection error");
  sim->add_option("--x0", x0_csv, "Initial state, comma separated")->required();
  sim->add_option("--t", t_end, "Time horizon")->capture_default_str();
  sim->add_option("--step", step, "RK4 step")->capture_default_str();
  sim->add_option("-o,--output", out_path, "Write the trajectory CSV here instead of stdout");

  auto* xumama = app.add_subcommand("xumama", "Search for a linear recurrence among iterated Lie derivatives of f");
  xumama->add_option("file", file, "System file")->required();
  xumama->add_option("--max-n", max_n, "Largest order to try")->capture_default_str();

  std::vector<const char*> argv{"slin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check(file, dot_path, out);
    if (*lift) return cmd_lift(file, out_path, out);
    if (*verify) return cmd_verify(file, lift_path, out);
    if (*sim) return cmd_simulate(file, lift_path, x0_csv, t_end, step, out_path, out, err);
    if (*xumama) return cmd_xumama(file, max_n, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace slin::cli
