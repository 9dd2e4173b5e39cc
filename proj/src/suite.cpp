#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "dncone/errors.hpp"
#include "dncone/matrix_calculus.hpp"
#include "dncone/prober.hpp"
#include "dncone/rng.hpp"

namespace dncone {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// Margin bookkeeping for one named check: worst is the smallest
// (tolerance - error); the check passes iff worst >= 0.
class Check {
 public:
  Check(std::string name, int n) : name_(std::move(name)), n_(n) {}

  void margin(double m) {
    if (std::isnan(m)) m = -std::numeric_limits<double>::infinity();
    worst_ = std::min(worst_, m);
  }
  void detail(std::string d) {
    if (detail_.empty()) detail_ = std::move(d);
  }

  CheckResult finish() && {
    CheckResult r;
    r.name = std::move(name_);
    r.n = n_;
    if (worst_ == std::numeric_limits<double>::infinity()) worst_ = 0.0;
    r.passed = worst_ >= 0.0;
    r.worst_margin = worst_;
    r.detail = std::move(detail_);
    return r;
  }

 private:
  std::string name_;
  int n_;
  double worst_ = std::numeric_limits<double>::infinity();
  std::string detail_;
};

SymMatrix sample_any(int n, std::uint64_t seed, std::uint64_t k) {
  const auto s = static_cast<SamplerStrategy>(k % 3);
  const SamplerStrategy strategy =
      (s == SamplerStrategy::wishart_reject && n > kWishartMaxOrder) ? SamplerStrategy::gram_nonneg : s;
  return sample_dn({n, strategy, seed, 1.0}, k / 3);
}

double dn_margin(const DnVerdict& v) {
  return std::min(v.min_eigenvalue + v.psd_tol, v.min_entry + v.entry_tol);
}

// Central differences extrapolated twice (h, h/2, h/4).
double richardson_derivative(const std::function<double(double)>& g, double x, double h) {
  auto d = [&](double s) { return (g(x + s) - g(x - s)) / (2.0 * s); };
  const double d1 = d(h), d2 = d(h / 2), d3 = d(h / 4);
  const double e1 = (4 * d2 - d1) / 3, e2 = (4 * d3 - d2) / 3;
  return (16 * e2 - e1) / 15;
}

CheckResult eig_checks(int n, std::uint64_t seed, const SuiteOptions& o, bool orthogonality) {
  Check c(orthogonality ? "eig_orthogonality" : "eig_reconstruction", n);
  SplitMix64 rng = SplitMix64::stream(seed, 11);
  for (int s = 0; s < o.samples; ++s) {
    std::vector<double> v(static_cast<std::size_t>(n * n));
    for (double& x : v) x = rng.uniform(-10.0, 10.0);
    const SymMatrix a(n, v);
    const SpectralDecomp d = eig_sym(a);
    if (orthogonality) {
      const Matrix g = d.u.transpose() * d.u;
      c.margin(1e-12 - max_abs_diff(g, Matrix::identity(n)));
    } else {
      c.margin(1e-9 * std::max(1.0, a.max_abs()) - max_abs_diff(d.reconstruct(), a.dense()));
    }
  }
  return std::move(c).finish();
}

CheckResult sampler_validity(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("sampler_validity", n);
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed, static_cast<std::uint64_t>(s));
    c.margin(dn_margin(check_dn(a, o.psd_tol, 0.0)));
  }
  return std::move(c).finish();
}

CheckResult permutation_equivariance(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("permutation_equivariance", n);
  SplitMix64 rng = SplitMix64::stream(seed, 12);
  const ScalarFunc f = ScalarFunc::power(n - 0.5);
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x77, static_cast<std::uint64_t>(s));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);
    const SymMatrix lhs = spectral_apply(a.permuted(perm), f, o.psd_tol);
    const SymMatrix rhs = spectral_apply(a, f, o.psd_tol).permuted(perm);
    c.margin(1e-10 - max_abs_diff(lhs, rhs));
    c.margin(dn_margin(check_dn(a.permuted(perm), o.psd_tol, 0.0)));
  }
  return std::move(c).finish();
}

CheckResult resolvent_fact(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("resolvent_fact", n);
  constexpr std::array<double, 5> kShifts{0.01, 0.1, 1.0, 10.0, 100.0};
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x31, static_cast<std::uint64_t>(s));
    for (double u : kShifts) {
      const DnVerdict v = check_dn(resolvent_product(a, n - 1, u, o.psd_tol), o.psd_tol, o.entry_tol);
      c.margin(dn_margin(v));
      if (!v.is_dn) c.detail(fmt("u=%g min_entry=%.3e", u, v.min_entry));
    }
  }
  return std::move(c).finish();
}

CheckResult explicit_formula(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("explicit_formula", n);
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x41, static_cast<std::uint64_t>(s));
    for (double u : {0.1, 1.0, 10.0}) {
      const SymMatrix r = resolvent_product(a, n - 1, u, o.psd_tol);
      const double e = explicit_offdiag_entry(a, u);
      c.margin(1e-10 * std::max(std::abs(r(0, 1)), r.max_abs()) - std::abs(e - r(0, 1)));
    }
  }
  return std::move(c).finish();
}

CheckResult newton_summands(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("newton_summands", n);
  const std::array<ScalarFunc, 3> funcs{ScalarFunc::exp(), ScalarFunc::power(n - 0.5),
                                         ScalarFunc::power_shift(n - 1.0, 1.0, 1.0)};
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x51, static_cast<std::uint64_t>(s));
    const ScalarFunc& f = funcs[static_cast<std::size_t>(s) % funcs.size()];
    const NewtonExpansion ne = newton_matrix_polynomial(a, f, o.psd_tol);
    for (const SymMatrix& p : ne.products) c.margin(dn_margin(check_dn(p, o.psd_tol, o.entry_tol)));
    const SymMatrix ref = spectral_apply(a, f, o.psd_tol);
    c.margin(1e-8 * std::max(1.0, ref.max_abs()) - max_abs_diff(ne.value, ref));
  }
  return std::move(c).finish();
}

CheckResult upper_bound(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("upper_bound", n);
  SplitMix64 rng = SplitMix64::stream(seed, 13);
  for (int s = 0; s < o.samples; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x61, static_cast<std::uint64_t>(s));
    const bool integer = n > 2 && s % 4 == 3;
    const double alpha = integer ? static_cast<double>(rng.below(static_cast<std::uint64_t>(n - 2)))
                                 : rng.uniform(n - 2.0, n + 2.0);
    const SymMatrix fa = spectral_apply(a, ScalarFunc::power(alpha), o.psd_tol);
    c.margin(fa.min_entry() + o.entry_tol);
    if (fa.min_entry() < -o.entry_tol) c.detail(fmt("alpha=%.17g min_entry=%.3e", alpha, fa.min_entry()));
  }
  return std::move(c).finish();
}

CheckResult threshold_sharpness(int n) {
  Check c("threshold_sharpness", n);
  const SignScanResult at = derivative_sign_scan(ScalarFunc::power(n - 2.0), n);
  c.margin(at.all_nonneg ? 0.0 : -1.0);
  if (n >= 3) {
    const SignScanResult below = derivative_sign_scan(ScalarFunc::power(n - 2.0 - 1e-3), n);
    c.margin(below.all_nonneg ? -1.0 : 0.0);
    if (below.all_nonneg) c.detail("alpha = n-2-1e-3 scanned as preserving");
  }
  return std::move(c).finish();
}

CheckResult strong_form_scan(int n, const SuiteOptions& o) {
  Check c("exceptional_set_scan", n);
  const std::vector<double> alphas = alpha_grid(0.0, n + 1.0, 10);
  for (double beta : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    const ExponentScan s = exceptional_set_scan(beta, 1.0, n, alphas, {}, o.exec);
    c.margin(s.consistent() ? 0.0 : -1.0);
    if (!s.consistent()) c.detail(fmt("beta=%g inconsistent", beta));
  }
  return std::move(c).finish();
}

CheckResult family_scan(int n, const SuiteOptions& o) {
  Check c("exp_family_scan", n);
  const std::vector<double> alphas = alpha_grid(0.0, n + 1.0, 10);
  for (const ScalarFunc& f : {ScalarFunc::exp(), ScalarFunc::cosh()}) {
    const ExponentScan s = family_exponent_scan(f, n, alphas, {}, o.exec);
    c.margin(s.consistent() ? 0.0 : -1.0);
    for (const AlphaVerdict& v : s.verdicts) {
      const bool expected = v.alpha >= n - 2.0 - kGridSnap || std::abs(v.alpha - std::round(v.alpha)) < kGridSnap;
      if (v.preserving != expected) {
        c.margin(-1.0);
        c.detail(f.describe() + fmt(" alpha=%g", v.alpha));
      }
    }
  }
  return std::move(c).finish();
}

CheckResult lemma_recurrence(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("lemma_recurrence", n);
  SplitMix64 rng = SplitMix64::stream(seed, 14);
  for (int s = 0; s < o.samples; ++s) {
    const double alpha = rng.uniform(-3.0, 6.0), beta = rng.uniform(-3.0, 6.0);
    const double u = std::exp(rng.uniform(-2.0, 2.0)), x = std::exp(rng.uniform(-1.5, 1.5));
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    auto g = [&](double t) { return lemma_derivative(alpha, beta, u, r, t); };
    const double fd = richardson_derivative(g, x, 1e-2 * x);
    const double exact = lemma_derivative(alpha, beta, u, r + 1, x);
    double scale = 0.0;
    for (double t : lemma_terms(alpha, beta, u, r + 1, x)) scale = std::max(scale, std::abs(t));
    scale *= std::pow(x, alpha - (r + 1)) * std::pow(x + u, -(beta + r + 1));
    c.margin(1e-6 * std::max({std::abs(exact), scale, 1e-300}) - std::abs(fd - exact));
  }
  return std::move(c).finish();
}

CheckResult quadrature_identity(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("quadrature_identity", n);
  constexpr std::array<double, 4> kExponents{0.5, 1.5, 2.7, 3.3};
  const int count = std::max(1, o.samples / 20);
  for (int s = 0; s < count; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x71, static_cast<std::uint64_t>(s)) + 0.05 * SymMatrix::identity(n);
    for (double q : kExponents) {
      const SymMatrix ref = spectral_apply(a, ScalarFunc::power(q), o.psd_tol);
      const SymMatrix quad = quadrature_power(a, QuadratureSpec::for_exponent(q), o.psd_tol, o.exec);
      c.margin(1e-6 * ref.max_abs() - max_abs_diff(quad, ref));
    }
  }
  c.margin(1e-8 - std::abs(quadrature_power_scalar(1.0, QuadratureSpec::for_exponent(0.5)) - 1.0));
  return std::move(c).finish();
}

CheckResult singular_limit(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("singular_limit", n);
  const int count = std::max(1, o.samples / 20);
  const double q = n - 0.5;
  for (int s = 0; s < count; ++s) {
    const SymMatrix a = sample_any(n, seed ^ 0x81, static_cast<std::uint64_t>(s));
    const SymMatrix ref = spectral_apply(a, ScalarFunc::power(q), o.psd_tol);
    double prev = std::numeric_limits<double>::infinity();
    for (double u : {1e-2, 1e-4, 1e-6}) {
      const double err = max_abs_diff(spectral_apply(a + u * SymMatrix::identity(n), ScalarFunc::power(q)), ref);
      c.margin(prev + 1e-12 - err);
      prev = err;
    }
    c.margin(1e-4 - prev);
  }
  return std::move(c).finish();
}

CheckResult violation_witness(int n, std::uint64_t seed, const SuiteOptions& o) {
  Check c("violation_witness", n);
  ProbeOptions po;
  po.entry_tol = o.entry_tol;
  po.psd_tol = o.psd_tol;
  po.exec = o.exec;
  const ScalarFunc f = ScalarFunc::power(n - 2.25);
  const ProbeReport r = find_violation(n, f, o.search_budget, seed, po);
  if (r.verdict != ProbeVerdict::violation_found) {
    c.margin(-1.0);
    c.detail(fmt("no witness for alpha=%g within %g trials", n - 2.25, static_cast<double>(o.search_budget)));
  } else {
    const auto again = reverify_witness(*r.witness, f, po);
    c.margin(again ? 1e-12 - std::abs(*again - r.witness->value) : -1.0);
  }
  return std::move(c).finish();
}

CheckResult run_guarded(const char* name, int n, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = name;
    r.n = n;
    r.passed = false;
    r.worst_margin = -std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + e.what();
    return r;
  }
}

}  // namespace

SuiteReport verify_theorem_suite(int n_max, std::uint64_t seed, const SuiteOptions& opts) {
  if (n_max < 2 || n_max > 8) throw InputError("n_max must lie in [2, 8]");
  if (opts.samples < 1) throw InputError("samples must be >= 1");
  SuiteReport rep;
  rep.n_max = n_max;
  rep.seed = seed;
  auto add = [&](const char* name, int n, const std::function<CheckResult()>& body) {
    rep.checks.push_back(run_guarded(name, n, body));
  };
  for (int n = 2; n <= n_max; ++n) {
    const std::uint64_t s = seed ^ (0x100000001b3ULL * static_cast<std::uint64_t>(n));
    add("eig_reconstruction", n, [&] { return eig_checks(n, s, opts, false); });
    add("eig_orthogonality", n, [&] { return eig_checks(n, s, opts, true); });
    add("sampler_validity", n, [&] { return sampler_validity(n, s, opts); });
    add("permutation_equivariance", n, [&] { return permutation_equivariance(n, s, opts); });
    add("resolvent_fact", n, [&] { return resolvent_fact(n, s, opts); });
    if (n <= 3) add("explicit_formula", n, [&] { return explicit_formula(n, s, opts); });
    add("newton_summands", n, [&] { return newton_summands(n, s, opts); });
    add("upper_bound", n, [&] { return upper_bound(n, s, opts); });
    add("threshold_sharpness", n, [&] { return threshold_sharpness(n); });
    add("exceptional_set_scan", n, [&] { return strong_form_scan(n, opts); });
    add("exp_family_scan", n, [&] { return family_scan(n, opts); });
    add("lemma_recurrence", n, [&] { return lemma_recurrence(n, s, opts); });
    add("quadrature_identity", n, [&] { return quadrature_identity(n, s, opts); });
    add("singular_limit", n, [&] { return singular_limit(n, s, opts); });
    if (n >= 3) add("violation_witness", n, [&] { return violation_witness(n, s, opts); });
  }
  return rep;
}

}  // namespace dncone
