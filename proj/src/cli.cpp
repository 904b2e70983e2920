#include "euler/cli.hpp"

#include "euler/convergence.hpp"
#include "euler/critpoints.hpp"
#include "euler/gkz.hpp"
#include "euler/integrate.hpp"
#include "euler/limits.hpp"
#include "euler/shiftops.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace euler {

using json = nlohmann::json;

namespace {

// Unreadable or malformed input; maps to kExitParse.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path, std::istream& in) {
  std::stringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    buf << f.rdbuf();
  }
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON in ") + (path == "-" ? "stdin" : path) + ": " + e.what());
  }
}

struct LoadedSpec {
  IntegralSpec spec;
  json canonical;
  // Optional column order for the Cayley matrix, one exponent list per polynomial.
  std::optional<std::vector<std::vector<Exponent>>> supports;
};

LoadedSpec load_spec(const std::string& path, std::istream& in) {
  json j = read_json(path, in);
  LoadedSpec out;
  try {
    out.spec = spec_from_json(j);
    if (j.contains("supports")) out.supports = j.at("supports").get<std::vector<std::vector<Exponent>>>();
  } catch (const PreconditionError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("cannot read spec: ") + e.what());
  }
  out.canonical = to_json(out.spec);
  if (out.supports) {
    if (out.supports->size() != out.spec.polys.size()) throw PreconditionError("supports: one list per polynomial");
    for (size_t i = 0; i < out.supports->size(); ++i) {
      auto sup = out.spec.polys[i].support();
      std::set<Exponent> a(sup.begin(), sup.end()), b((*out.supports)[i].begin(), (*out.supports)[i].end());
      if (a != b || b.size() != (*out.supports)[i].size())
        throw PreconditionError("supports: list " + std::to_string(i + 1) + " is not the support of f" +
                                std::to_string(i + 1));
    }
    out.canonical["supports"] = *out.supports;
  }
  return out;
}

uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("EULER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("EULER_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_parameter(json(item)).re);
    } catch (const std::exception& e) {
      throw InputError("cannot read number '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("empty number list");
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string fmt(cplx z) {
  if (z.imag() == 0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

void emit(Context& c, const std::string& command, const json& spec, const json& result,
          std::optional<uint64_t> seed = std::nullopt) {
  json j = {{"command", command}, {"spec", spec}, {"result", result}};
  if (seed) j["seed"] = *seed;
  c.out << j.dump(2) << "\n";
}

McOptions mc_options(long samples, uint64_t seed) {
  McOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  return opt;
}

int cmd_newton(Context& c, const std::string& path) {
  auto L = load_spec(path, c.in);
  json polys = json::array();
  auto P = L.spec.newton_polytopes();
  for (size_t i = 0; i < P.size(); ++i) {
    polys.push_back(to_json(P[i]));
    c.err << "Delta(f" << i + 1 << "): " << P[i].vertices().size() << " vertices, " << P[i].facets().size()
          << " facets, dim " << P[i].dim() << "\n";
  }
  json result = {{"newton_polytopes", polys}};
  bool positive_s = !L.spec.s.empty() && L.spec.s.size() == L.spec.polys.size();
  for (const auto& z : L.spec.s) positive_s = positive_s && z.re > 0;
  if (positive_s) {
    auto Ps = parametric_polytope(L.spec);
    result["parametric_polytope"] = to_json(Ps);
    c.err << "P(s): " << Ps.vertices().size() << " vertices, normalized volume " << to_string(normalized_volume(Ps))
          << "\n";
  }
  emit(c, "newton", L.canonical, result);
  return kExitOk;
}

int cmd_convergence(Context& c, const std::string& path, bool gamma) {
  auto L = load_spec(path, c.in);
  auto rep = check_convergence(L.spec);
  json result = to_json(rep);
  c.err << (rep.converges ? "converges" : "diverges");
  for (const auto& r : rep.reasons) c.err << " [" << r << "]";
  c.err << "\n";
  if (gamma) {
    auto g = gamma_skeleton(L.spec.polys);
    result["gamma_skeleton"] = to_json(g);
    result["gamma_text"] = gamma_text(g);
    c.err << gamma_text(g) << "\n";
  }
  emit(c, "convergence", L.canonical, result);
  return kExitOk;
}

int cmd_critical(Context& c, const std::string& path, bool positive, uint64_t seed) {
  auto L = load_spec(path, c.in);
  json result;
  if (positive) {
    auto p = positive_critical_point(L.spec);
    result = {{"a", p.a}, {"hessian", p.H}, {"log_L", p.log_L}, {"iterations", p.iterations}};
    c.err << "positive critical point, H = " << fmt(p.H) << "\n";
  } else {
    auto set = all_critical_points(L.spec, seed);
    result = to_json(set);
    c.err << set.count() << " critical points from " << set.paths << " paths\n";
    for (const auto& w : set.warnings) c.err << "warning: " << w << "\n";
  }
  emit(c, "critical", L.canonical, result, positive ? std::nullopt : std::optional<uint64_t>(seed));
  return kExitOk;
}

json sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"delta", to_string(r.delta)},
                   {"I", to_json(r.I)},
                   {"saddle_ratio", r.saddle_ratio},
                   {"saddle_ratio_error", r.saddle_ratio_error}});
  return out;
}

int cmd_limits(Context& c, const std::string& path, const std::string& sweep, long samples, uint64_t seed) {
  auto L = load_spec(path, c.in);
  LimitOptions opt;
  opt.seed = seed;
  auto rep = limits(L.spec, opt);
  json result = to_json(rep);
  if (rep.has_volume) c.err << "dual volume (normalized) " << to_string(rep.dual_volume_normalized) << "\n";
  c.err << "critical sum " << fmt(rep.critical_sum) << " over " << rep.critical_points << " points\n";
  for (const auto& w : rep.warnings) c.err << "warning: " << w << "\n";
  if (!sweep.empty()) result["sweep"] = sweep_json(limit_sweep(L.spec, parse_rationals(sweep), mc_options(samples, seed)));
  emit(c, "limits", L.canonical, result, seed);
  return kExitOk;
}

int cmd_integrate(Context& c, const std::string& path, long samples, uint64_t seed, const std::string& delta,
                  const std::string& backend, int nodes, bool emit_sectors) {
  auto L = load_spec(path, c.in);
  QuadratureResult q;
  const bool mc = backend != "gauss-laguerre";
  if (!mc) {
    if (!delta.empty()) throw PreconditionError("--delta is only available with the Monte Carlo backend");
    q = evaluate_gauss_laguerre(L.spec, nodes);
  } else if (!delta.empty()) {
    auto d = parse_rationals(delta);
    if (d.size() != 1) throw InputError("--delta takes one number");
    q = evaluate_Idelta(L.spec, d[0], mc_options(samples, seed));
  } else {
    q = evaluate(L.spec, mc_options(samples, seed));
  }
  json result = to_json(q);
  if (emit_sectors) {
    json secs = json::array();
    for (const auto& s : sector_decompose(L.spec)) secs.push_back(to_json(s));
    result["sector_list"] = secs;
  }
  c.err << "I = " << fmt(q.estimate) << " +- " << fmt(std::hypot(q.std_error, q.std_error_im)) << " (" << q.backend
        << ")\n";
  emit(c, "integrate", L.canonical, result, mc ? std::optional<uint64_t>(seed) : std::nullopt);
  return kExitOk;
}

int cmd_gkz(Context& c, const std::string& path, const std::string& recipe_path, int degree_bound) {
  auto L = load_spec(path, c.in);
  L.spec.validate();
  GkzSystem sys = L.supports ? gkz_system(cayley(*L.supports), degree_bound) : gkz_system(cayley(L.spec), degree_bound);
  std::vector<ExactComplex> beta;
  for (const auto& z : L.spec.s) beta.push_back(ExactComplex(-z.re, -z.im));
  for (const auto& z : L.spec.nu) beta.push_back(ExactComplex(-z.re, -z.im));
  sys.beta = beta;
  json result = to_json(sys);
  auto res = check_nonresonant(sys.A, beta);
  result["resonance"] = to_json(res);
  result["holonomic_rank_bound"] = to_string(gkz_volume(sys.A));
  auto names = sys.z_names();
  c.err << sys.A.rows() << "x" << sys.A.cols() << " Cayley matrix, " << sys.binomials.size() << " binomials\n";
  for (const auto& b : sys.binomials)
    c.err << "  " << to_string(binomial_operator(b, sys.params.size()), names, sys.params, true) << "\n";
  for (const auto& op : sys.euler_ops) c.err << "  " << to_string(op, names, sys.params, true) << "\n";
  c.err << (res.nonresonant ? "beta is nonresonant\n" : "beta is resonant\n");
  if (!recipe_path.empty()) {
    json rj = read_json(recipe_path, c.in);
    TorusRecipe recipe;
    try {
      recipe = recipe_from_json(rj);
    } catch (const std::exception& e) {
      throw InputError(std::string("cannot read recipe: ") + e.what());
    }
    auto sp = specialize(sys, recipe);
    result["specialized"] = to_json(sp);
    result["recipe"] = rj;
    c.err << "specialized to " << sp.vars.size() << " variables:\n";
    for (const auto& op : sp.all()) c.err << "  " << to_string(op, sp.vars, sp.params, false) << "\n";
  }
  emit(c, "gkz", L.canonical, result);
  return kExitOk;
}

int cmd_shift(Context& c, const std::string& path, bool verify, const std::vector<int>& beta_reduce, long samples,
              uint64_t seed) {
  json result;
  json spec_json;
  if (!beta_reduce.empty()) {
    int a = beta_reduce[0], b = beta_reduce[1];
    json br = {{"a", a}, {"b", b}, {"coefficient", to_string(beta_reduction(a, b), {"s", "nu"})}};
    c.err << "c^{" << a << "," << b << "} = " << br["coefficient"].get<std::string>() << "\n";
    result["beta_reduction"] = br;
  }
  if (!path.empty()) {
    auto L = load_spec(path, c.in);
    spec_json = L.canonical;
    auto gens = annihilator_generators(L.spec);
    json ops = json::array();
    for (const auto& g : gens) {
      ops.push_back(to_json(g));
      c.err << "  " << to_string(g) << "\n";
    }
    result["annihilators"] = ops;
    // For the chart f = 1 + y the unit-interval exponent is s = 1 + nu - s~.
    const bool beta_chart = L.spec.ell() == 1 && L.spec.n() == 1 &&
                            L.spec.polys[0] == parse("1 + " + L.spec.vars[0], L.spec.vars);
    if (!beta_reduce.empty() && beta_chart && L.spec.real_parameters()) {
      Rational s_unit = 1 + L.spec.nu[0].re - L.spec.s[0].re;
      Rational v = beta_reduction(beta_reduce[0], beta_reduce[1], s_unit, L.spec.nu[0].re);
      result["beta_reduction"]["s"] = to_string(s_unit);
      result["beta_reduction"]["nu"] = to_string(L.spec.nu[0].re);
      result["beta_reduction"]["value"] = to_string(v);
    }
    if (verify) {
      json reps = json::array();
      bool all = true;
      for (const auto& g : gens) {
        auto r = verify_shift(L.spec, g, mc_options(samples, seed));
        reps.push_back(to_json(r));
        all = all && r.passed;
        c.err << (r.passed ? "PASS " : "FAIL ") << "|S.I| = " << fmt(std::abs(r.estimate)) << " <= "
              << fmt(r.threshold) << "\n";
      }
      result["verification"] = reps;
      result["verified"] = all;
    }
  } else if (verify) {
    throw PreconditionError("--verify needs --spec");
  }
  emit(c, "shift", spec_json, result, verify ? std::optional<uint64_t>(seed) : std::nullopt);
  return kExitOk;
}

int cmd_symanzik(Context& c, const std::string& path, const std::string& kinematics) {
  json gj = read_json(path, c.in);
  Graph g;
  try {
    g = graph_from_json(gj);
  } catch (const std::exception& e) {
    throw InputError(std::string("cannot read graph: ") + e.what());
  }
  auto sym = symanzik(g);
  auto vars = default_vars(g.edges.size());
  json result = {{"vars", vars},
                 {"U", to_string(sym.U, vars)},
                 {"F", to_string(sym.F, vars)},
                 {"kinematic_symbols", sym.F.symbols()}};
  c.err << "U = " << to_string(sym.U, vars) << "\nF = " << to_string(sym.F, vars) << "\n";
  if (!kinematics.empty()) {
    std::map<std::string, Rational> values;
    std::stringstream ss(kinematics);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("--kinematics expects name=value pairs");
      values[item.substr(0, eq)] = parse_rationals(item.substr(eq + 1))[0];
    }
    result["F_substituted"] = to_string(sym.F.substitute(values), vars);
  }
  emit(c, "symanzik", gj, result);
  return kExitOk;
}

int cmd_moduli(Context& c, int m) {
  if (m < 4) throw PreconditionError("moduli needs m >= 4");
  auto polys = moduli_minors(m);
  auto vars = default_vars(static_cast<size_t>(m - 3));
  json f = json::array();
  for (const auto& p : polys) {
    f.push_back(to_string(p, vars));
    c.err << "  " << to_string(p, vars) << "\n";
  }
  emit(c, "moduli", json{{"m", m}}, {{"vars", vars}, {"f", f}});
  return kExitOk;
}

int cmd_sweep(Context& c, const std::string& path, const std::string& deltas, long samples, uint64_t seed) {
  auto L = load_spec(path, c.in);
  auto rows = limit_sweep(L.spec, parse_rationals(deltas), mc_options(samples, seed));
  c.out << "delta,estimate,std_error,saddle_ratio,saddle_ratio_error\n";
  c.out << std::setprecision(17);
  for (const auto& r : rows)
    c.out << to_double(r.delta) << "," << r.I.estimate.real() << "," << r.I.std_error << "," << r.saddle_ratio << ","
          << r.saddle_ratio_error << "\n";
  c.err << rows.size() << " sweep rows, seed " << seed << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Euler integrals: convergence, evaluation, limits, critical points and GKZ systems"};
  app.name("euler");
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  std::optional<uint64_t> seed_flag;
  app.add_option("--threads", threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  std::string spec, recipe, sweep, delta, graph, kinematics, backend = "monte-carlo";
  long samples = 1000000;
  int degree_bound = 0, nodes = 64, m = 0;
  bool gamma = false, positive = false, emit_sectors = false, verify = false;
  std::vector<int> beta_reduce;

  auto add_spec = [&](CLI::App* sub, bool required = true) {
    auto* o = sub->add_option("--spec", spec, "Problem spec JSON file, or - for stdin");
    if (required) o->required();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "Random seed (fallback: EULER_SEED, then 1)");
  };
  auto add_samples = [&](CLI::App* sub) {
    sub->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  };

  auto* newton = app.add_subcommand("newton", "Newton polytopes and P(s)");
  add_spec(newton);
  auto* conv = app.add_subcommand("convergence", "Convergence test and Gamma skeleton");
  add_spec(conv);
  conv->add_flag("--gamma", gamma, "Include the Gamma-factor product");
  auto* crit = app.add_subcommand("critical", "Critical points of log L");
  add_spec(crit);
  add_seed(crit);
  crit->add_flag("--positive", positive, "Only the positive critical point");
  auto* lim = app.add_subcommand("limits", "Field-theory and high-energy limits");
  add_spec(lim);
  add_seed(lim);
  add_samples(lim);
  lim->add_option("--sweep", sweep, "Comma-separated deltas for a sweep of I(delta)");
  auto* integ = app.add_subcommand("integrate", "Evaluate the integral");
  add_spec(integ);
  add_seed(integ);
  add_samples(integ);
  integ->add_option("--delta", delta, "Evaluate I(delta) instead");
  integ->add_option("--backend", backend, "monte-carlo or gauss-laguerre")
      ->check(CLI::IsMember({"monte-carlo", "gauss-laguerre"}));
  integ->add_option("--nodes", nodes, "Gauss-Laguerre nodes per axis")->check(CLI::PositiveNumber);
  integ->add_flag("--emit-sectors", emit_sectors, "Include the sector list");
  auto* gkz = app.add_subcommand("gkz", "GKZ system of the Cayley configuration");
  add_spec(gkz);
  gkz->add_option("--specialize", recipe, "Torus recipe JSON file");
  gkz->add_option("--degree-bound", degree_bound, "Binomial degree bound (0: default)")->check(CLI::NonNegativeNumber);
  auto* shift = app.add_subcommand("shift", "Shift annihilators and beta reduction");
  add_spec(shift, false);
  add_seed(shift);
  add_samples(shift);
  shift->add_flag("--verify", verify, "Verify each annihilator numerically");
  shift->add_option("--beta-reduce", beta_reduce, "Beta reduction coefficient for shifts a b")->expected(2);
  auto* sym = app.add_subcommand("symanzik", "Symanzik polynomials of a graph");
  sym->add_option("--graph", graph, "Graph JSON file, or - for stdin")->required();
  sym->add_option("--kinematics", kinematics, "Substitute kinematic symbols, e.g. t1=-1,t2=-2");
  auto* mod = app.add_subcommand("moduli", "Minors parametrising M_{0,m}");
  mod->add_option("--m", m, "Number of marked points")->required();
  auto* swp = app.add_subcommand("sweep", "CSV table of I(delta) for plotting");
  add_spec(swp);
  add_seed(swp);
  add_samples(swp);
  swp->add_option("--deltas", sweep, "Comma-separated deltas")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitPrecondition;
  }
  if (shift->parsed() && spec.empty() && beta_reduce.empty()) {
    err << "error: shift needs --spec or --beta-reduce\n";
    return kExitPrecondition;
  }
  if (threads > 0) omp_set_num_threads(threads);

  Context c{in, out, err};
  try {
    uint64_t seed = resolve_seed(seed_flag);
    if (newton->parsed()) return cmd_newton(c, spec);
    if (conv->parsed()) return cmd_convergence(c, spec, gamma);
    if (crit->parsed()) return cmd_critical(c, spec, positive, seed);
    if (lim->parsed()) return cmd_limits(c, spec, sweep, samples, seed);
    if (integ->parsed()) return cmd_integrate(c, spec, samples, seed, delta, backend, nodes, emit_sectors);
    if (gkz->parsed()) return cmd_gkz(c, spec, recipe, degree_bound);
    if (shift->parsed()) return cmd_shift(c, spec, verify, beta_reduce, samples, seed);
    if (sym->parsed()) return cmd_symanzik(c, graph, kinematics);
    if (mod->parsed()) return cmd_moduli(c, m);
    if (swp->parsed()) return cmd_sweep(c, spec, sweep, samples, seed);
  } catch (const InputError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitPrecondition;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace euler
