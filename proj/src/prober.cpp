#include "dncone/prober.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dncone/errors.hpp"
#include "dncone/matrix_calculus.hpp"
#include "dncone/rng.hpp"

namespace dncone {

std::string_view to_string(ProbeVerdict v) noexcept {
  return v == ProbeVerdict::violation_found ? "violation_found" : "preserved_on_sample";
}

std::string_view to_string(AlphaOutcome o) noexcept {
  switch (o) {
    case AlphaOutcome::violation: return "violation";
    case AlphaOutcome::survived: return "survived";
    case AlphaOutcome::unresolved: return "unresolved";
  }
  return "unknown";
}

long default_budget(int n) noexcept { return n <= 5 ? 10000 : 100000; }

std::string_view trial_source_name(int source) noexcept {
  switch (source) {
    case 0: return "gram_nonneg";
    case 1: return "wishart_reject";
    case 2: return "dykstra_project";
    case 3: return "path_seed";
  }
  return "unknown";
}

namespace {

constexpr std::uint64_t kPathSalt = 0x5bd1e9955bd1e995ULL;
constexpr std::uint64_t kDescentSalt = 0xc2b2ae3d27d4eb4fULL;
constexpr std::uint64_t kScaleSalt = 0x165667b19e3779f9ULL;

// Odd draws are rescaled to a spectral radius in [1e-3, 1e3]. Homogeneous
// functions do not care; for x^alpha (x+u)^{-beta} the sign pattern of the
// derivatives depends on x/u, so the search has to visit both regimes.
double trial_scale(std::uint64_t seed, std::uint64_t draw) {
  if (draw % 2 == 0) return 1.0;
  SplitMix64 rng = SplitMix64::stream(seed ^ kScaleSalt, draw);
  return std::pow(10.0, rng.uniform(-3.0, 3.0));
}

// Shift onto the PSD cone along the identity, scale to the given spectral
// radius and certify; nullopt for the zero matrix or a failed certificate.
std::optional<SymMatrix> normalize_certified(Matrix m, double scale = 1.0) {
  const int n = m.order();
  const double lmin = eig_sym(SymMatrix(m)).min_eigenvalue();
  if (lmin < 0.0)
    for (int i = 0; i < n; ++i) m(i, i) -= lmin;
  SymMatrix a(m);
  const double lmax = eig_sym(a).max_eigenvalue();
  if (!(lmax > 0.0)) return std::nullopt;
  SymMatrix scaled = (scale / lmax) * a;
  if (!check_dn(scaled, kDefaultPsdTol * scale, 0.0).is_dn) return std::nullopt;
  return scaled;
}

// Tridiagonal nonnegative block on k vertices (a weighted path), diagonal
// at or slightly above the row sums of its off-diagonal part, embedded in a
// random diagonal remainder and conjugated by a random permutation.
SymMatrix path_seed(int n, SplitMix64& rng) {
  for (;;) {
    const int k = n < 3 ? n : rng.between(3, n);
    const bool on_boundary = rng.uniform() < 0.4;
    Matrix m(n);
    std::vector<double> w(static_cast<std::size_t>(std::max(k - 1, 0)));
    for (double& x : w) x = rng.uniform(0.2, 1.0);
    for (int i = 0; i + 1 < k; ++i) {
      m(i, i + 1) = w[static_cast<std::size_t>(i)];
      m(i + 1, i) = w[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < k; ++i) {
      double row = 0.0;
      if (i > 0) row += w[static_cast<std::size_t>(i - 1)];
      if (i + 1 < k) row += w[static_cast<std::size_t>(i)];
      m(i, i) = row * (on_boundary ? 1.0 : 1.0 + rng.uniform(0.0, 0.3));
    }
    for (int i = k; i < n; ++i) m(i, i) = rng.uniform(0.2, 1.0);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);
    Matrix p(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) = m(perm[i], perm[j]);
    if (auto a = normalize_certified(p)) return *a;
  }
}

bool violates(double value, double max_entry, const ProbeOptions& opts) {
  return value < -opts.entry_tol && value < -opts.noise_rel * max_entry;
}

TrialOutcome summarize(const SymMatrix& fa) {
  TrialOutcome o;
  const int n = fa.order();
  o.min_entry = fa(0, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      o.max_entry = std::max(o.max_entry, std::abs(fa(i, j)));
      if (j > i && fa(i, j) < o.min_entry) {
        o.min_entry = fa(i, j);
        o.i = i;
        o.j = j;
      }
    }
  return o;
}

std::string search_description(const ProbeOptions& opts) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "round_robin(gram_nonneg,wishart_reject,dykstra_project,path_seed)+descent(steps=%d,near_miss=%g)",
                opts.descent_steps, opts.near_miss);
  return buf;
}

struct DescentResult {
  long steps = 0;
  std::optional<Witness> witness;
};

// Coordinate descent on the smallest off-diagonal entry of f(A), staying
// inside the cone through project_dn.
DescentResult descend(const SymMatrix& start, double start_min, const ScalarFunc& f, SplitMix64 rng, long steps,
                      const ProbeOptions& opts) {
  DescentResult res;
  const int n = start.order();
  const double scale = eig_sym(start).max_eigenvalue();
  SymMatrix current = start;
  double best = start_min;
  double h = 0.1;
  for (long s = 0; s < steps; ++s) {
    ++res.steps;
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double delta = h * rng.normal();
    Matrix m = current.dense();
    m(i, j) += delta * scale;
    if (i != j) m(j, i) += delta * scale;

    std::optional<SymMatrix> cand;
    try {
      cand = normalize_certified(project_dn(SymMatrix(m), 1e-10, 2000).dense(), scale);
    } catch (const ProjectionStall&) {
      cand.reset();
    }
    if (!cand) {
      h *= 0.7;
      continue;
    }
    const TrialOutcome o = summarize(spectral_apply(*cand, f, opts.psd_tol));
    if (violates(o.min_entry, o.max_entry, opts)) {
      Witness w{*cand, o.i, o.j, o.min_entry};
      if (auto v = reverify_witness(w, f, opts)) {
        w.value = *v;
        res.witness = std::move(w);
        return res;
      }
    }
    if (o.min_entry < best) {
      best = o.min_entry;
      current = *cand;
      h = std::min(h * 1.5, 0.5);
    } else {
      h *= 0.7;
    }
    if (h < 1e-8) break;
  }
  return res;
}

}  // namespace

SymMatrix probe_candidate(int n, std::uint64_t seed, long trial) {
  const int source = static_cast<int>(trial % kTrialSources);
  const auto draw = static_cast<std::uint64_t>(trial / kTrialSources);
  const double scale = trial_scale(seed, draw);
  switch (source) {
    case 0: return sample_dn({n, SamplerStrategy::gram_nonneg, seed, scale}, draw);
    case 1:
      if (n <= kWishartMaxOrder) return sample_dn({n, SamplerStrategy::wishart_reject, seed, scale}, draw);
      return sample_dn({n, SamplerStrategy::gram_nonneg, seed ^ 1ULL, scale}, draw);
    case 2: return sample_dn({n, SamplerStrategy::dykstra_project, seed, scale}, draw);
    default: {
      SplitMix64 rng = SplitMix64::stream(seed ^ kPathSalt, draw);
      const SymMatrix a = path_seed(n, rng);
      return scale == 1.0 ? a : scale * a;
    }
  }
}

std::vector<TrialOutcome> evaluate_trials(int n, const ScalarFunc& f, std::uint64_t seed, long first, long count,
                                          const ProbeOptions& opts) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(std::max(count, 0L)));
  for_each_index(out.size(), [&](std::size_t k) {
    const SymMatrix a = probe_candidate(n, seed, first + static_cast<long>(k));
    out[k] = summarize(spectral_apply(a, f, opts.psd_tol));
  }, opts.exec);
  return out;
}

std::optional<double> reverify_witness(const Witness& w, const ScalarFunc& f, const ProbeOptions& opts) {
  EigOptions tight;
  tight.threshold_rel = 1e-14;
  if (!check_dn(w.matrix, opts.psd_tol, 0.0, tight).is_dn) return std::nullopt;
  const SymMatrix fa = spectral_apply(w.matrix, f, opts.psd_tol, tight);
  const double v = fa(w.i, w.j);
  if (!violates(v, fa.max_abs(), opts)) return std::nullopt;
  return v;
}

ProbeReport find_violation(int n, const ScalarFunc& f, long budget, std::uint64_t seed, const ProbeOptions& opts) {
  if (n < kMinOrder || n > kMaxOrder) throw InputError("order must lie in [2, 64]");
  if (budget < 0) throw InputError("budget must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  ProbeReport report;
  report.n = n;
  report.func = f.describe();
  report.seed = seed;
  report.strategy = search_description(opts);

  auto finish = [&](long used) {
    report.trials = used;
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  const long batch = std::max(1, opts.batch);
  long used = 0;
  long next_trial = 0;
  while (used < budget) {
    const long count = std::min(batch, budget - used);
    const std::vector<TrialOutcome> outcomes = evaluate_trials(n, f, seed, next_trial, count, opts);
    for (long k = 0; k < count && used < budget; ++k) {
      ++used;
      const long trial = next_trial + k;
      const TrialOutcome& o = outcomes[static_cast<std::size_t>(k)];
      if (violates(o.min_entry, o.max_entry, opts)) {
        Witness w{probe_candidate(n, seed, trial), o.i, o.j, o.min_entry};
        if (auto v = reverify_witness(w, f, opts)) {
          w.value = *v;
          report.verdict = ProbeVerdict::violation_found;
          report.witness = std::move(w);
          return finish(used);
        }
      } else if (o.max_entry > 0.0 && o.min_entry < opts.near_miss * o.max_entry && opts.descent_steps > 0) {
        const DescentResult d = descend(probe_candidate(n, seed, trial), o.min_entry, f,
                                        SplitMix64::stream(seed ^ kDescentSalt, static_cast<std::uint64_t>(trial)),
                                        std::min<long>(opts.descent_steps, budget - used), opts);
        used += d.steps;
        if (d.witness) {
          report.verdict = ProbeVerdict::violation_found;
          report.witness = d.witness;
          return finish(used);
        }
      }
    }
    next_trial += count;
  }
  return finish(used);
}

ScalarFunc PowerFamily::at(double alpha) const {
  return kind == Kind::power ? ScalarFunc::power(alpha) : ScalarFunc::power_shift(alpha, beta, u);
}

std::string PowerFamily::describe() const {
  if (kind == Kind::power) return "power";
  char buf[96];
  std::snprintf(buf, sizeof buf, "power_shift(beta=%.17g;u=%.17g)", beta, u);
  return buf;
}

ExponentEstimate bracket_exponent(int n, const PowerFamily& family, double resolution, long budget_per_alpha,
                                  std::uint64_t seed, const ProbeOptions& opts, double upper) {
  if (!(resolution > 0.0)) throw InputError("resolution must be positive");
  if (upper <= 0.0) upper = n + (family.kind == PowerFamily::Kind::power_shift ? std::max(family.beta, 0.0) : 0.0);

  ExponentEstimate est;
  est.n = n;
  est.family = family.describe();
  est.resolution = resolution;

  auto probe = [&](double alpha) -> const AlphaProbe& {
    AlphaProbe p;
    p.alpha = alpha;
    const ScalarFunc f = family.at(alpha);
    p.report = find_violation(n, f, budget_per_alpha, seed, opts);
    p.scan = derivative_sign_scan(f, n);
    if (p.report.verdict == ProbeVerdict::violation_found)
      p.outcome = AlphaOutcome::violation;
    else
      p.outcome = p.scan.all_nonneg ? AlphaOutcome::survived : AlphaOutcome::unresolved;
    est.probes.push_back(std::move(p));
    return est.probes.back();
  };

  double lo = 0.0;
  double hi = upper;
  if (probe(hi).outcome == AlphaOutcome::violation)
    throw InconsistentBracket("violation found at the upper end of the bracket; check entry_tol");

  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    if (std::abs(mid - std::round(mid)) < 1e-9) mid -= resolution / 4.0;
    if (probe(mid).outcome == AlphaOutcome::violation) {
      lo = mid;
      est.lo_confirmed = true;
    } else {
      hi = mid;
    }
  }
  est.alpha_lo = lo;
  est.alpha_hi = hi;
  return est;
}

bool SuiteReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace dncone
