#include "dncone/scalar_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <type_traits>

#include "dncone/errors.hpp"
#include "dncone/parallel.hpp"
#include "dncone/rng.hpp"

namespace dncone {

namespace {

double factorial(int j) {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

double falling(double alpha, int count) {
  double p = 1.0;
  for (int j = 0; j < count; ++j) p *= alpha - j;
  return p;
}

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Sum of terms and the magnitude used to judge its sign.
struct SignedSum {
  double sum = 0.0;
  double scale = 0.0;
};

SignedSum accumulate(const std::vector<double>& terms) {
  SignedSum s;
  for (double t : terms) {
    s.sum += t;
    s.scale = std::max(s.scale, std::abs(t));
  }
  return s;
}

bool is_negative(const SignedSum& s, double sign_tol) { return s.sum < -sign_tol * s.scale; }

}  // namespace

DividedDiffTable divided_differences(const ScalarFunc& f, std::span<const double> nodes,
                                     const DividedDiffOptions& opts) {
  if (nodes.empty()) throw InputError("divided differences need at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] >= 0.0)) throw DomainError("divided-difference nodes must be >= 0");
    if (i > 0 && nodes[i] < nodes[i - 1]) throw InputError("divided-difference nodes must be sorted");
  }
  double scale = opts.scale;
  if (!(scale > 0.0)) scale = *std::max_element(nodes.begin(), nodes.end());
  const double merge_gap = opts.coincide_rel * scale;

  const std::size_t k = nodes.size();
  DividedDiffTable t;
  t.nodes.assign(nodes.begin(), nodes.end());
  t.table.assign(k, {});
  for (std::size_t i = 0; i < k; ++i) {
    t.table[i].assign(k - i, 0.0);
    t.table[i][0] = f.value(nodes[i]);
  }
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t i = 0; i + j < k; ++i) {
      const double gap = nodes[i + j] - nodes[i];
      double v;
      if (gap <= merge_gap) {
        if (!f.has_derivatives()) {
          if (gap == 0.0) throw DerivativeUnavailable("repeated node on a function without derivatives");
          throw IllConditioned("nearly coincident nodes on a function without derivatives");
        }
        double at = nodes[i];
        if (gap > 0.0) {
          at = 0.0;
          for (std::size_t l = i; l <= i + j; ++l) at += nodes[l];
          at /= static_cast<double>(j + 1);
        }
        v = f.derivative(static_cast<int>(j), at) / factorial(static_cast<int>(j));
      } else {
        v = (t.table[i + 1][j - 1] - t.table[i][j - 1]) / gap;
      }
      if (!std::isfinite(v)) throw DomainError("divided difference is not finite");
      t.table[i][j] = v;
    }
  }
  return t;
}

std::vector<double> lemma_terms(double alpha, double beta, double u, int r, double x) {
  std::vector<double> terms(static_cast<std::size_t>(r) + 1);
  double binom = 1.0;
  for (int i = 0; i <= r; ++i) {
    const double p = falling(alpha, i) * falling(alpha - beta - i, r - i);
    terms[static_cast<std::size_t>(i)] = p == 0.0 ? 0.0 : binom * std::pow(u, i) * std::pow(x, r - i) * p;
    binom = binom * (r - i) / (i + 1);
  }
  return terms;
}

double lemma_derivative(double alpha, double beta, double u, int r, double x) {
  if (r < 0 || r > kLemmaMaxOrder) throw InputError("derivative order must lie in [0, 32]");
  if (!(x > 0.0) || !(u > 0.0)) throw DomainError("lemma_derivative needs x > 0 and u > 0");
  const std::vector<double> terms = lemma_terms(alpha, beta, u, r, x);
  const double sum = std::accumulate(terms.begin(), terms.end(), 0.0);
  if (sum == 0.0) return 0.0;
  double prefactor = std::pow(x, alpha - r) * std::pow(x + u, -(beta + r));
  if (!std::isfinite(prefactor) || prefactor == 0.0)
    prefactor = std::exp((alpha - r) * std::log(x) - (beta + r) * std::log(x + u));
  const double value = prefactor * sum;
  if (!std::isfinite(value)) throw OverflowError("lemma_derivative overflows at this input");
  return value;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(log_points + lin_points));
  if (log_points == 1) pts.push_back(log_min);
  if (log_points > 1) {
    const double a = std::log10(log_min);
    const double b = std::log10(log_max);
    for (int i = 0; i < log_points; ++i) pts.push_back(std::pow(10.0, a + (b - a) * i / (log_points - 1)));
  }
  if (lin_points == 1) pts.push_back(lin_min);
  if (lin_points > 1)
    for (int i = 0; i < lin_points; ++i) pts.push_back(lin_min + (lin_max - lin_min) * i / (lin_points - 1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::string GridSpec::describe() const {
  return "log:" + std::to_string(log_points) + "[" + fmt_num(log_min) + "," + fmt_num(log_max) +
         "]+lin:" + std::to_string(lin_points) + "[" + fmt_num(lin_min) + "," + fmt_num(lin_max) + "]";
}

namespace {

// Derivative sums of g^(i) at x with the positive prefactor stripped.
// Returns false when the function cannot be evaluated finitely at x.
template <class TermsFn>
SignScanResult scan_orders(int n, const GridSpec& grid, double sign_tol, TermsFn&& terms_at) {
  if (n < 1) throw InputError("scan order must be >= 1");
  SignScanResult res;
  res.max_order_checked = n - 1;
  const std::vector<double> xs = grid.points();
  std::size_t skipped = 0;
  for (int order = 0; order < n && !res.first_violation; ++order) {
    for (double x : xs) {
      double value = 0.0;
      std::vector<double> terms;
      if (!terms_at(order, x, terms, value)) {
        if (order == 0) ++skipped;
        continue;
      }
      if (is_negative(accumulate(terms), sign_tol)) {
        res.all_nonneg = false;
        res.first_violation = SignViolation{order, x, value};
        break;
      }
    }
  }
  res.grid = grid.describe();
  if (skipped > 0) res.grid += ";skipped_nonfinite=" + std::to_string(skipped);
  return res;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return std::isfinite(t); });
}

}  // namespace

SignScanResult derivative_sign_scan(const ScalarFunc& f, int n, const GridSpec& grid, double sign_tol) {
  return std::visit(
      [&](const auto& g) -> SignScanResult {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, PurePower>) {
          return scan_orders(n, grid, sign_tol,
                             [&](int r, double x, std::vector<double>& terms, double& value) {
                               const double c = falling(g.alpha, r);
                               terms.assign(1, c);
                               value = c == 0.0 ? 0.0 : c * std::pow(x, g.alpha - r);
                               return true;
                             });
        } else if constexpr (std::is_same_v<T, PowerShift>) {
          return scan_orders(n, grid, sign_tol,
                             [&](int r, double x, std::vector<double>& terms, double& value) {
                               terms = lemma_terms(g.alpha, g.beta, g.u, r, x);
                               if (!all_finite(terms)) return false;
                               const double s = std::accumulate(terms.begin(), terms.end(), 0.0);
                               value = s == 0.0 ? 0.0
                                                : s * std::exp((g.alpha - r) * std::log(x) -
                                                               (g.beta + r) * std::log(x + g.u));
                               return true;
                             });
        } else if constexpr (std::is_same_v<T, ExpFamily>) {
          return power_times_sign_scan(0.0, f, n, grid, sign_tol);
        } else {
          throw DerivativeUnavailable("derivative scan needs a differentiable function");
        }
      },
      f.variant());
}

SignScanResult power_times_sign_scan(double alpha, const ScalarFunc& f, int n, const GridSpec& grid,
                                     double sign_tol) {
  const auto* fam = std::get_if<ExpFamily>(&f.variant());
  if (!fam) throw InputError("power_times_sign_scan needs a family function with a derivative oracle");
  std::vector<double> derivs(static_cast<std::size_t>(n));
  double cached_x = -1.0;
  return scan_orders(n, grid, sign_tol, [&](int i, double x, std::vector<double>& terms, double& value) {
    if (x != cached_x) {
      fam->derivatives(x, derivs);
      cached_x = x;
    }
    terms.assign(static_cast<std::size_t>(i) + 1, 0.0);
    double binom = 1.0;
    for (int l = 0; l <= i; ++l) {
      const double c = falling(alpha, l);
      const double fd = derivs[static_cast<std::size_t>(i - l)];
      terms[static_cast<std::size_t>(l)] = c == 0.0 ? 0.0 : binom * c * std::pow(x, i - l) * fd;
      binom = binom * (i - l) / (l + 1);
    }
    if (!all_finite(terms)) return false;
    const double s = std::accumulate(terms.begin(), terms.end(), 0.0);
    value = s == 0.0 ? 0.0 : s * std::pow(x, alpha - i);
    return true;
  });
}

SignScanResult mw_preserves(const ScalarFunc& f, int n, int node_budget, std::uint64_t seed) {
  if (n < 2) throw InputError("order must be >= 2");
  const auto* tab = std::get_if<Tabulated>(&f.variant());
  if (!tab) {
    SignScanResult res = derivative_sign_scan(f, n);
    if (res.first_violation && res.first_violation->order == 0)
      throw DomainError("function is negative at a probed point");
    return res;
  }

  for (double v : tab->values)
    if (v < 0.0) throw DomainError("tabulated function takes a negative value");

  SignScanResult res;
  res.max_order_checked = n - 1;
  const int k = static_cast<int>(tab->nodes.size());
  const int max_size = std::min(n, k);
  res.grid = "tabulated_tuples:" + std::to_string(node_budget) + "[size 2.." + std::to_string(max_size) +
             "];necessary_condition_only";
  if (max_size < 2) return res;

  SplitMix64 rng(seed);
  std::vector<int> idx(k);
  for (int trial = 0; trial < node_budget; ++trial) {
    const int size = rng.between(2, max_size);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < size; ++i) std::swap(idx[i], idx[i + static_cast<int>(rng.below(k - i))]);
    std::vector<int> pick(idx.begin(), idx.begin() + size);
    std::sort(pick.begin(), pick.end());
    std::vector<double> xs(size);
    for (int i = 0; i < size; ++i) xs[i] = tab->nodes[pick[i]];
    const DividedDiffTable t = divided_differences(f, xs);
    for (int j = 1; j < size; ++j)
      for (int i = 0; i + j < size; ++i) {
        const double gap = xs[i + j] - xs[i];
        const double tol = kDefaultSignTol * (std::abs(t.at(i + 1, j - 1)) + std::abs(t.at(i, j - 1))) / gap;
        if (t.at(i, j) < -tol) {
          res.all_nonneg = false;
          res.first_violation = SignViolation{j, xs[i], t.at(i, j)};
          return res;
        }
      }
  }
  return res;
}

std::vector<double> exceptional_set(double beta, int n) {
  std::vector<double> s;
  for (int m = 0; m <= n - 3; ++m) s.push_back(m + std::max(beta, 0.0));
  return s;
}

std::vector<double> alpha_grid(double lo, double hi, int per_unit) {
  if (per_unit < 1) throw InputError("grid density must be >= 1");
  const long first = std::lround(std::ceil(lo * per_unit - 1e-9));
  const long last = std::lround(std::floor(hi * per_unit + 1e-9));
  std::vector<double> g;
  for (long k = first; k <= last; ++k) g.push_back(static_cast<double>(k) / per_unit);
  return g;
}

namespace {

bool in_set(double alpha, const std::vector<double>& set) {
  return std::any_of(set.begin(), set.end(), [&](double s) { return std::abs(alpha - s) <= kGridSnap; });
}

void classify(ExponentScan& scan) {
  for (AlphaVerdict& v : scan.verdicts) {
    v.preserving = v.scan.all_nonneg;
    v.below_threshold = v.alpha < scan.threshold - kGridSnap;
    v.in_exceptional_set = in_set(v.alpha, scan.exceptional_set);
    if (!v.below_threshold && !v.preserving) scan.above_threshold_all_preserve = false;
    if (v.below_threshold && v.preserving && !v.in_exceptional_set) scan.below_threshold_in_set = false;
  }
}

}  // namespace

ExponentScan exceptional_set_scan(double beta, double u, int n, std::span<const double> alphas,
                                  const GridSpec& grid, Execution exec) {
  if (n < 2) throw InputError("order must be >= 2");
  ExponentScan scan;
  scan.n = n;
  scan.threshold = n - 2 + std::max(beta, 0.0);
  scan.exceptional_set = exceptional_set(beta, n);
  scan.verdicts.resize(alphas.size());
  for_each_index(alphas.size(), [&](std::size_t i) {
    scan.verdicts[i].alpha = alphas[i];
    scan.verdicts[i].scan = derivative_sign_scan(ScalarFunc::power_shift(alphas[i], beta, u), n, grid);
  }, exec);
  std::stable_sort(scan.verdicts.begin(), scan.verdicts.end(),
                   [](const AlphaVerdict& a, const AlphaVerdict& b) { return a.alpha < b.alpha; });
  classify(scan);
  return scan;
}

void check_positive_family(const ScalarFunc& f, int n, const GridSpec& grid) {
  const auto* fam = std::get_if<ExpFamily>(&f.variant());
  if (!fam) throw InputError("positivity conditions apply to family functions only");
  std::vector<double> d(static_cast<std::size_t>(n));
  fam->derivatives(0.0, d);
  if (!(d[0] > 0.0)) throw ConditionViolation("limit of f at 0+ must be positive");
  for (double v : d)
    if (!std::isfinite(v) || v < 0.0) throw ConditionViolation("derivative limits at 0+ must be finite and >= 0");
  for (double x : grid.points()) {
    fam->derivatives(x, d);
    if (!std::all_of(d.begin(), d.end(), [](double v) { return std::isfinite(v); })) continue;
    if (!(d[0] > 0.0)) throw ConditionViolation("f must be positive at x = " + fmt_num(x));
    for (int i = 1; i < n; ++i)
      if (d[static_cast<std::size_t>(i)] < 0.0)
        throw ConditionViolation("derivative " + std::to_string(i) + " negative at x = " + fmt_num(x));
  }
}

ExponentScan family_exponent_scan(const ScalarFunc& f, int n, std::span<const double> alphas,
                                  const GridSpec& grid, Execution exec) {
  if (n < 2) throw InputError("order must be >= 2");
  check_positive_family(f, n, grid);
  ExponentScan scan;
  scan.n = n;
  scan.threshold = n - 2;
  for (int m = 0; m < n - 2; ++m) scan.exceptional_set.push_back(m);
  scan.verdicts.resize(alphas.size());
  for_each_index(alphas.size(), [&](std::size_t i) {
    if (!(alphas[i] >= 0.0)) throw InputError("alpha must be >= 0");
    scan.verdicts[i].alpha = alphas[i];
    scan.verdicts[i].scan = power_times_sign_scan(alphas[i], f, n, grid);
  }, exec);
  std::stable_sort(scan.verdicts.begin(), scan.verdicts.end(),
                   [](const AlphaVerdict& a, const AlphaVerdict& b) { return a.alpha < b.alpha; });
  classify(scan);
  return scan;
}

}  // namespace dncone
