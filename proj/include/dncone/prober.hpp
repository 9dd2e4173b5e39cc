#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dncone/dn_cone.hpp"
#include "dncone/matrix.hpp"
#include "dncone/parallel.hpp"
#include "dncone/scalar_calculus.hpp"
#include "dncone/scalar_func.hpp"

namespace dncone {

enum class ProbeVerdict { preserved_on_sample, violation_found };

std::string_view to_string(ProbeVerdict v) noexcept;

struct Witness {
  SymMatrix matrix;
  int i = 0;
  int j = 1;
  double value = 0.0;  // entry (i, j) of f(matrix)
};

// violation_found => witness present, witness DN, f(witness)(i,j) < -entry_tol.
// (and below the rounding floor, see ProbeOptions).
struct ProbeReport {
  int n = 0;
  std::string func;
  ProbeVerdict verdict = ProbeVerdict::preserved_on_sample;
  std::optional<Witness> witness;
  long trials = 0;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;  // not part of the canonical serialization
  std::string strategy;
};

struct ProbeOptions {
  // A violation is an entry of f(A) below -entry_tol (absolute) that also
  // clears the rounding floor noise_rel * max|f(A)|. The floor only matters
  // for samples with a large spectral radius.
  double entry_tol = 1e-8;
  double noise_rel = 1e-12;
  double psd_tol = kDefaultPsdTol;
  // Samples whose min entry of f(A), relative to its largest entry, falls
  // below this start a local descent.
  double near_miss = 1e-3;
  int descent_steps = 40;
  int batch = 256;
  Execution exec = Execution::parallel;
};

// Default search budgets per exponent: 1e4 for n <= 5, 1e5 for n in 6..8.
long default_budget(int n) noexcept;

// Trial sources in round-robin order. The first three are the sampler
// strategies; the fourth draws sparse tridiagonal (path-graph) blocks
// sitting on or near the cone boundary.
inline constexpr int kTrialSources = 4;
std::string_view trial_source_name(int source) noexcept;

// The DN matrix examined at a given trial index. Deterministic per
// (n, seed, trial).
SymMatrix probe_candidate(int n, std::uint64_t seed, long trial);

struct TrialOutcome {
  double min_entry = 0.0;  // smallest off-diagonal entry of f(A)
  double max_entry = 0.0;  // largest |entry| of f(A)
  int i = 0;
  int j = 1;
};

// f(A) summary for trials [first, first + count). Results are stored by
// trial index, so serial and parallel runs agree exactly.
std::vector<TrialOutcome> evaluate_trials(int n, const ScalarFunc& f, std::uint64_t seed, long first,
                                          long count, const ProbeOptions& opts);

ProbeReport find_violation(int n, const ScalarFunc& f, long budget, std::uint64_t seed,
                           const ProbeOptions& opts = {});

// Re-derives the violated entry of a witness from the matrix alone;
// nullopt when the witness is not DN or the entry is no longer a violation.
std::optional<double> reverify_witness(const Witness& w, const ScalarFunc& f, const ProbeOptions& opts);

struct PowerFamily {
  enum class Kind { power, power_shift };
  Kind kind = Kind::power;
  double beta = 0.0;
  double u = 1.0;

  ScalarFunc at(double alpha) const;
  std::string describe() const;
};

enum class AlphaOutcome { violation, survived, unresolved };

std::string_view to_string(AlphaOutcome o) noexcept;

struct AlphaProbe {
  double alpha = 0.0;
  AlphaOutcome outcome = AlphaOutcome::survived;
  ProbeReport report;
  SignScanResult scan;
};

// alpha_lo: largest alpha with a confirmed violation (0 with
// lo_confirmed = false when none was found); alpha_hi: smallest alpha that
// survived. alpha_hi - alpha_lo <= resolution.
struct ExponentEstimate {
  int n = 0;
  std::string family;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  bool lo_confirmed = false;
  double resolution = 0.0;
  std::vector<AlphaProbe> probes;  // in evaluation order
};

// Bisection over [0, upper]; upper defaults to n, plus max(beta, 0) for the
// shifted family so that its threshold stays inside the interval. Integer midpoints are
// shifted down by resolution/4 because integer exponents preserve the cone
// and would break monotonicity. A midpoint moves alpha_hi down unless the
// search witnesses a violation there; if the derivative scan reports a
// violation the search missed, the point is recorded as unresolved.
// Throws InconsistentBracket when the upper end itself shows a violation.
ExponentEstimate bracket_exponent(int n, const PowerFamily& family, double resolution, long budget_per_alpha,
                                  std::uint64_t seed, const ProbeOptions& opts = {}, double upper = -1.0);

struct SuiteOptions {
  int samples = 200;  // per check and order
  double psd_tol = kDefaultPsdTol;
  double entry_tol = 1e-8;
  long search_budget = 2000;
  Execution exec = Execution::parallel;
};

struct CheckResult {
  std::string name;
  int n = 0;
  bool passed = false;
  double worst_margin = 0.0;  // >= 0 when passed; how far inside the tolerance
  std::string detail;
};

struct SuiteReport {
  int n_max = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept;
};

SuiteReport verify_theorem_suite(int n_max, std::uint64_t seed, const SuiteOptions& opts = {});

}  // namespace dncone
