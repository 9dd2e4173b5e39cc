#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dncone/parallel.hpp"
#include "dncone/scalar_func.hpp"

namespace dncone {

// dd[i][j] = f[x_i, ..., x_{i+j}], 0 <= j <= k, 0 <= i <= k - j.
struct DividedDiffTable {
  std::vector<double> nodes;
  std::vector<std::vector<double>> table;

  double at(std::size_t i, std::size_t j) const { return table[i][j]; }
  // Leading coefficients f[x_0, ..., x_j] of the Newton form.
  double newton_coefficient(std::size_t j) const { return table[0][j]; }
  std::size_t max_order() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

struct DividedDiffOptions {
  // Nodes closer than coincide_rel * scale are merged and handled through
  // f^(j)/j! at their mean.
  double coincide_rel = 1e-10;
  // 0 means max |node|.
  double scale = 0.0;
};

DividedDiffTable divided_differences(const ScalarFunc& f, std::span<const double> nodes,
                                     const DividedDiffOptions& opts = {});

inline constexpr int kLemmaMaxOrder = 32;

// d^r/dx^r x^alpha (x+u)^{-beta} for x, u > 0 by the finite-product
// expansion
//   x^{alpha-r} (x+u)^{-(beta+r)} sum_i C(r,i) u^i x^{r-i}
//     prod_{j<i} (alpha-j) prod_{i<=j<r} (alpha-beta-j).
// Exact at the integer degeneracies where a Gamma-ratio form has poles.
double lemma_derivative(double alpha, double beta, double u, int r, double x);

// The summands of the bracketed sum above, in order i = 0..r.
std::vector<double> lemma_terms(double alpha, double beta, double u, int r, double x);

// Default scan grid: log-spaced points covering the small-x and large-x
// regimes plus a uniform block in the middle.
struct GridSpec {
  int log_points = 400;
  double log_min = 1e-8;
  double log_max = 1e8;
  int lin_points = 100;
  double lin_min = 0.1;
  double lin_max = 10.0;

  std::vector<double> points() const;  // sorted, deduplicated
  std::string describe() const;
};

struct SignViolation {
  int order = 0;
  double x = 0.0;
  double value = 0.0;
};

// all_nonneg <=> !first_violation. The grid string records exactly what was
// scanned; a positive verdict is a statement about that grid only.
struct SignScanResult {
  bool all_nonneg = true;
  std::optional<SignViolation> first_violation;
  int max_order_checked = 0;
  std::string grid;
};

inline constexpr double kDefaultSignTol = 1e-12;

// Scans f^(i), i = 0..n-1, over the grid. A value counts as negative when
// the derivative sum falls below -sign_tol times the magnitude of its
// largest contributions. Violations are reported lowest order first, then
// smallest x.
SignScanResult derivative_sign_scan(const ScalarFunc& f, int n, const GridSpec& grid = {},
                                    double sign_tol = kDefaultSignTol);

// Same scan for g(x) = x^alpha f(x) with the product-rule expansion
//   g^(i)(x) = sum_l C(i,l) prod_{j<l}(alpha-j) x^{alpha-l} f^{(i-l)}(x).
SignScanResult power_times_sign_scan(double alpha, const ScalarFunc& f, int n,
                                     const GridSpec& grid = {}, double sign_tol = kDefaultSignTol);

// Divided-difference preservation predicate. Differentiable functions are
// reduced to derivative_sign_scan; tabulated functions are probed with
// node_budget random node tuples of sizes 2..n (a necessary condition only).
SignScanResult mw_preserves(const ScalarFunc& f, int n, int node_budget = 1000,
                            std::uint64_t seed = 0);

struct AlphaVerdict {
  double alpha = 0.0;
  SignScanResult scan;
  bool preserving = false;
  bool below_threshold = false;
  bool in_exceptional_set = false;
};

struct ExponentScan {
  int n = 0;
  double threshold = 0.0;              // critical exponent under test
  std::vector<double> exceptional_set;  // candidates below the threshold
  std::vector<AlphaVerdict> verdicts;   // sorted by alpha
  // Every alpha >= threshold preserves.
  bool above_threshold_all_preserve = true;
  // Every preserving alpha < threshold lies in exceptional_set.
  bool below_threshold_in_set = true;

  bool consistent() const noexcept { return above_threshold_all_preserve && below_threshold_in_set; }
};

inline constexpr double kGridSnap = 1e-9;

// {m + max(beta, 0) : m = 0..n-3}; empty for n = 2.
std::vector<double> exceptional_set(double beta, int n);

// alpha grid lo, lo + 1/per_unit, ..., hi built as integer ratios so that
// integers and half-integers are represented exactly.
std::vector<double> alpha_grid(double lo, double hi, int per_unit);

ExponentScan exceptional_set_scan(double beta, double u, int n, std::span<const double> alphas,
                                  const GridSpec& grid = {}, Execution exec = Execution::parallel);

// Checks f(x) > 0, f^(i)(x) >= 0 (0 < i < n) on the grid and finite,
// positive one-sided limits at 0. Throws ConditionViolation.
void check_positive_family(const ScalarFunc& f, int n, const GridSpec& grid = {});

// Scan of x^alpha f(x) for an ExpFamily f; expected preserving set is
// N u [n-2, inf), recorded with threshold n-2 and the integers below it as
// the exceptional set.
ExponentScan family_exponent_scan(const ScalarFunc& f, int n, std::span<const double> alphas,
                                  const GridSpec& grid = {}, Execution exec = Execution::parallel);

}  // namespace dncone
