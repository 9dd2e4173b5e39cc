#include "dncone/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "dncone/errors.hpp"
#include "dncone/io.hpp"
#include "dncone/matrix_calculus.hpp"
#include "dncone/parallel.hpp"
#include "dncone/prober.hpp"
#include "json.hpp"

namespace dncone {

namespace {

struct RunConfig {
  std::string matrix_path;
  std::string kind = "power";
  double alpha = 1.0;
  double beta = 0.0;
  double u = 1.0;
  std::vector<double> tab_nodes;
  std::vector<double> tab_values;
  int n = 3;
  int n_max = 4;
  std::optional<std::uint64_t> seed;
  long budget = -1;
  double psd_tol = kDefaultPsdTol;
  std::optional<double> entry_tol;  // unset: per-subcommand default
  std::string out_path;
  std::string format = "json";
  int jobs = 0;
  std::vector<double> nodes;
  int order = 1;
  double x = 1.0;
  int p = -1;
  double q = 0.5;
  std::string solve_mode = "eigen";
  double resolution = 0.05;
  double upper = -1.0;
  double grid_lo = 0.0;
  double grid_hi = -1.0;
  int per_unit = 10;
  int samples = 200;
};

std::uint64_t resolve_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("DNCONE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw InputError("DNCONE_SEED must be a nonnegative integer");
    return v;
  }
  return 0;
}

ScalarFunc make_func(const RunConfig& c) {
  if (c.kind == "power") return ScalarFunc::power(c.alpha);
  if (c.kind == "power_shift") return ScalarFunc::power_shift(c.alpha, c.beta, c.u);
  if (c.kind == "exp") return ScalarFunc::exp();
  if (c.kind == "cosh") return ScalarFunc::cosh();
  if (c.kind == "tabulated") return ScalarFunc::tabulated(c.tab_nodes, c.tab_values);
  throw InputError("unknown function kind: " + c.kind);
}

Format make_format(const RunConfig& c) {
  if (c.format == "json") return Format::json;
  if (c.format == "csv") return Format::csv;
  throw InputError("format must be json or csv");
}

void check_order(int n) {
  if (n < kMinOrder || n > kMaxOrder) throw InputError("--n must lie in [2, 64]");
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw InputError("cannot write " + c.out_path);
  f << text;
}

SymMatrix load(const RunConfig& c, std::ostream& err) {
  if (c.matrix_path.empty()) throw InputError("--matrix is required");
  std::vector<std::string> warnings;
  SymMatrix a = read_matrix_file(c.matrix_path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return a;
}

ProbeOptions probe_options(const RunConfig& c) {
  ProbeOptions o;
  o.psd_tol = c.psd_tol;
  if (c.entry_tol) o.entry_tol = *c.entry_tol;
  return o;
}

int dispatch(const std::string& cmd, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Format fmt = make_format(c);
  const double entry_tol = c.entry_tol.value_or(kDefaultEntryTol);
  set_max_threads(c.jobs);

  if (cmd == "check-dn") {
    const DnVerdict v = check_dn(load(c, err), c.psd_tol, entry_tol);
    emit(c, render(v, fmt), out);
    if (!c.out_path.empty()) out << (v.is_dn ? "DN\n" : "not DN\n");
    return v.is_dn ? 0 : 1;
  }
  if (cmd == "power" || cmd == "hpower") {
    const SymMatrix a = load(c, err);
    const ScalarFunc f = make_func(c);
    const SymMatrix fa = cmd == "power" ? spectral_apply(a, f, c.psd_tol) : hadamard_apply(a, f);
    const DnVerdict v = check_dn(fa, c.psd_tol, entry_tol);
    emit(c, render(MatrixResult{cmd, f.describe(), fa, v}, fmt), out);
    return 0;
  }
  if (cmd == "resolvent") {
    const SymMatrix a = load(c, err);
    const int p = c.p >= 0 ? c.p : a.order() - 1;
    const SymMatrix r = resolvent_product(a, p, c.u, c.psd_tol);
    const DnVerdict v = check_dn(r, c.psd_tol, entry_tol);
    char desc[96];
    std::snprintf(desc, sizeof desc, "resolvent(p=%d;u=%.17g)", p, c.u);
    emit(c, render(MatrixResult{cmd, desc, r, v}, fmt), out);
    return 0;
  }
  if (cmd == "quadpower") {
    const SymMatrix a = load(c, err);
    QuadratureSpec spec = QuadratureSpec::for_exponent(c.q);
    if (c.solve_mode == "lu")
      spec.solve_mode = SolveMode::lu;
    else if (c.solve_mode != "eigen")
      throw InputError("--solve-mode must be eigen or lu");
    const SymMatrix r = quadrature_power(a, spec, c.psd_tol);
    const DnVerdict v = check_dn(r, c.psd_tol, entry_tol);
    char desc[64];
    std::snprintf(desc, sizeof desc, "quadrature_power(q=%.17g)", c.q);
    emit(c, render(MatrixResult{cmd, desc, r, v}, fmt), out);
    return 0;
  }
  if (cmd == "divdiff") {
    emit(c, render(divided_differences(make_func(c), c.nodes), fmt), out);
    return 0;
  }
  if (cmd == "lemma-deriv") {
    const double v = lemma_derivative(c.alpha, c.beta, c.u, c.order, c.x);
    std::string text;
    if (fmt == Format::json) {
      nlohmann::ordered_json j{{"alpha", c.alpha}, {"beta", c.beta}, {"u", c.u}, {"order", c.order}, {"x", c.x},
                               {"value", v},       {"terms", lemma_terms(c.alpha, c.beta, c.u, c.order, c.x)}};
      text = j.dump(2) + "\n";
    } else {
      char buf[256];
      std::snprintf(buf, sizeof buf, "alpha,beta,u,order,x,value\n%.17g,%.17g,%.17g,%d,%.17g,%.17g\n", c.alpha, c.beta,
                    c.u, c.order, c.x, v);
      text = buf;
    }
    emit(c, text, out);
    return 0;
  }
  if (cmd == "scan") {
    check_order(c.n);
    emit(c, render(derivative_sign_scan(make_func(c), c.n), fmt), out);
    return 0;
  }
  if (cmd == "mw") {
    check_order(c.n);
    const int budget = c.budget > 0 ? static_cast<int>(c.budget) : 1000;
    emit(c, render(mw_preserves(make_func(c), c.n, budget, resolve_seed(c)), fmt), out);
    return 0;
  }
  if (cmd == "exponent-scan") {
    check_order(c.n);
    const double hi = c.grid_hi >= 0.0 ? c.grid_hi : c.n + 1.0;
    const std::vector<double> alphas = alpha_grid(c.grid_lo, hi, c.per_unit);
    const ExponentScan s = c.kind == "power_shift" ? exceptional_set_scan(c.beta, c.u, c.n, alphas)
                                                   : family_exponent_scan(make_func(c), c.n, alphas);
    emit(c, render(s, fmt), out);
    return 0;
  }
  if (cmd == "find-violation") {
    check_order(c.n);
    const long budget = c.budget >= 0 ? c.budget : default_budget(c.n);
    emit(c, render(find_violation(c.n, make_func(c), budget, resolve_seed(c), probe_options(c)), fmt), out);
    return 0;
  }
  if (cmd == "bracket") {
    check_order(c.n);
    PowerFamily fam;
    if (c.kind == "power_shift")
      fam = {PowerFamily::Kind::power_shift, c.beta, c.u};
    else if (c.kind != "power")
      throw InputError("--family must be power or power_shift");
    const long budget = c.budget >= 0 ? c.budget : default_budget(c.n);
    emit(c, render(bracket_exponent(c.n, fam, c.resolution, budget, resolve_seed(c), probe_options(c), c.upper), fmt), out);
    return 0;
  }
  if (cmd == "verify") {
    SuiteOptions o;
    o.samples = c.samples;
    o.psd_tol = c.psd_tol;
    if (c.entry_tol) o.entry_tol = *c.entry_tol;
    if (c.budget >= 0) o.search_budget = c.budget;
    const SuiteReport r = verify_theorem_suite(c.n_max, resolve_seed(c), o);
    emit(c, render(r, fmt), out);
    for (const CheckResult& ck : r.checks)
      if (!ck.passed) err << "FAIL " << ck.name << " n=" << ck.n << " " << ck.detail << "\n";
    return r.all_passed() ? 0 : 1;
  }
  throw InputError("unknown subcommand: " + cmd);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for doubly nonnegative matrices", "dncone"};
  app.require_subcommand(1);
  RunConfig c;
  std::string seed_text;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", seed_text, "RNG seed (falls back to DNCONE_SEED, then 0)");
    s->add_option("--out", c.out_path, "output file (default: stdout)");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--jobs", c.jobs, "cap on concurrent worker threads")->check(CLI::NonNegativeNumber);
    s->add_option("--psd-tol", c.psd_tol, "additive tolerance on the smallest eigenvalue");
    s->add_option("--entry-tol", c.entry_tol, "additive tolerance on entries");
  };
  auto func = [&](CLI::App* s, const char* kind_flag) {
    s->add_option(kind_flag, c.kind, "power, power_shift, exp, cosh or tabulated");
    s->add_option("--alpha", c.alpha);
    s->add_option("--beta", c.beta);
    s->add_option("--u", c.u);
    s->add_option("--tab-nodes", c.tab_nodes, "tabulated function nodes")->delimiter(',');
    s->add_option("--tab-values", c.tab_values, "tabulated function values")->delimiter(',');
  };

  CLI::App* check = app.add_subcommand("check-dn", "DN membership verdict for a matrix");
  check->add_option("--matrix", c.matrix_path)->required();
  common(check);

  for (const char* name : {"power", "hpower"}) {
    CLI::App* s = app.add_subcommand(name, name == std::string("power") ? "spectral f(A)" : "entrywise f[A]");
    s->add_option("--matrix", c.matrix_path)->required();
    func(s, "--kind");
    common(s);
  }

  CLI::App* divdiff = app.add_subcommand("divdiff", "divided-difference table");
  divdiff->add_option("--nodes", c.nodes, "sorted nodes, comma separated")->delimiter(',')->required();
  func(divdiff, "--kind");
  common(divdiff);

  CLI::App* lemma = app.add_subcommand("lemma-deriv", "r-th derivative of x^alpha (x+u)^-beta");
  lemma->add_option("--alpha", c.alpha)->required();
  lemma->add_option("--beta", c.beta)->required();
  lemma->add_option("--u", c.u)->required();
  lemma->add_option("--order", c.order)->required();
  lemma->add_option("--x", c.x)->required();
  common(lemma);

  CLI::App* scan = app.add_subcommand("scan", "derivative sign scan");
  CLI::App* mw = app.add_subcommand("mw", "divided-difference preservation predicate");
  for (CLI::App* s : {scan, mw}) {
    s->add_option("--n", c.n)->required();
    func(s, "--kind");
    common(s);
  }
  mw->add_option("--budget", c.budget, "node tuples for tabulated functions");

  CLI::App* escan = app.add_subcommand("exponent-scan", "classify an alpha grid against the critical exponent");
  escan->add_option("--n", c.n)->required();
  escan->add_option("--lo", c.grid_lo);
  escan->add_option("--hi", c.grid_hi, "default n + 1");
  escan->add_option("--per-unit", c.per_unit, "grid points per unit of alpha");
  func(escan, "--kind");
  common(escan);

  CLI::App* resolvent = app.add_subcommand("resolvent", "A^p (A + uI)^-1");
  resolvent->add_option("--matrix", c.matrix_path)->required();
  resolvent->add_option("--p", c.p, "default n - 1");
  resolvent->add_option("--u", c.u);
  common(resolvent);

  CLI::App* quad = app.add_subcommand("quadpower", "A^q from the resolvent integral");
  quad->add_option("--matrix", c.matrix_path)->required();
  quad->add_option("--q", c.q)->required();
  quad->add_option("--solve-mode", c.solve_mode, "eigen or lu");
  common(quad);

  CLI::App* findv = app.add_subcommand("find-violation", "search for a DN matrix A with f(A) not DN");
  findv->add_option("--n", c.n)->required();
  findv->add_option("--budget", c.budget);
  func(findv, "--kind");
  common(findv);

  CLI::App* bracket = app.add_subcommand("bracket", "bisect the critical exponent");
  bracket->add_option("--n", c.n)->required();
  bracket->add_option("--family", c.kind, "power or power_shift");
  bracket->add_option("--beta", c.beta);
  bracket->add_option("--u", c.u);
  bracket->add_option("--resolution", c.resolution);
  bracket->add_option("--upper", c.upper, "right end of the search interval");
  bracket->add_option("--budget", c.budget, "search budget per alpha");
  common(bracket);

  CLI::App* verify = app.add_subcommand("verify", "run the full invariant battery");
  verify->add_option("--n-max", c.n_max)->required();
  verify->add_option("--samples", c.samples);
  verify->add_option("--budget", c.budget, "search budget of the witness check");
  common(verify);

  std::vector<const char*> argv{"dncone"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (!seed_text.empty()) {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(seed_text, &used);
      if (used != seed_text.size() || seed_text.front() == '-') throw InputError("--seed must be a nonnegative integer");
      c.seed = v;
    }
    return dispatch(app.get_subcommands().front()->get_name(), c, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument&) {
    err << "error: --seed must be a nonnegative integer\n";
    return 2;
  } catch (const std::out_of_range&) {
    err << "error: numeric argument out of range\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace dncone
