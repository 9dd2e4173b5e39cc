#include "dncone/dn_cone.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dncone/errors.hpp"
#include "dncone/rng.hpp"

namespace dncone {

DnVerdict check_dn(const SymMatrix& a, double psd_tol, double entry_tol, const EigOptions& eig) {
  DnVerdict v;
  v.psd_tol = psd_tol;
  v.entry_tol = entry_tol;
  v.min_eigenvalue = eig_sym(a, eig).min_eigenvalue();
  v.min_entry = a.min_entry();
  v.is_dn = v.min_eigenvalue >= -psd_tol && v.min_entry >= -entry_tol;
  return v;
}

std::string_view to_string(SamplerStrategy s) noexcept {
  switch (s) {
    case SamplerStrategy::gram_nonneg: return "gram_nonneg";
    case SamplerStrategy::wishart_reject: return "wishart_reject";
    case SamplerStrategy::dykstra_project: return "dykstra_project";
  }
  return "unknown";
}

std::optional<SamplerStrategy> parse_strategy(std::string_view name) noexcept {
  for (auto s : {SamplerStrategy::gram_nonneg, SamplerStrategy::wishart_reject,
                 SamplerStrategy::dykstra_project})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

SymMatrix project_psd(const SymMatrix& a) {
  const SpectralDecomp d = eig_sym(a);
  std::vector<double> clipped(d.eigenvalues);
  for (double& l : clipped) l = std::max(l, 0.0);
  return SymMatrix(d.compose(clipped));
}

namespace {

Matrix clip_nonneg(const Matrix& m) {
  Matrix r = m;
  for (double& v : r.data()) v = std::max(v, 0.0);
  return r;
}

// B B^T for an n x k factor stored row-major.
Matrix gram(int n, int k, const std::vector<double>& b) {
  Matrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += b[i * k + l] * b[j * k + l];
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

Matrix draw_gram(int n, SplitMix64& rng) {
  const int k = rng.between(1, n + 1);
  const double sparsity = rng.uniform(0.0, 0.5);
  std::vector<double> b(static_cast<std::size_t>(n) * k);
  for (double& x : b) x = rng.uniform() < sparsity ? 0.0 : rng.uniform();
  return gram(n, k, b);
}

std::optional<Matrix> draw_wishart(int n, SplitMix64& rng) {
  constexpr int kMaxAttempts = 100000;
  constexpr double kMean = 0.75;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const int k = rng.between(1, n + 1);
    std::vector<double> g(static_cast<std::size_t>(n) * k);
    for (double& x : g) x = kMean + rng.normal();
    Matrix w = gram(n, k, g);
    if (*std::min_element(w.data().begin(), w.data().end()) >= 0.0) return w;
  }
  return std::nullopt;
}

// nullopt when Dykstra stalls; the caller redraws.
std::optional<Matrix> draw_projected(int n, SplitMix64& rng) {
  Matrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = rng.uniform(-0.5, 1.0);
      s(i, j) = v;
      s(j, i) = v;
    }
  Matrix p;
  try {
    p = project_dn(SymMatrix(s)).dense();
  } catch (const ProjectionStall&) {
    return std::nullopt;
  }
  // Dykstra leaves the iterate PSD only to tolerance; a diagonal shift makes
  // it PSD without touching the (already exact) nonnegativity.
  const double lmin = eig_sym(SymMatrix(p)).min_eigenvalue();
  if (lmin < 0.0)
    for (int i = 0; i < n; ++i) p(i, i) -= lmin;
  return p;
}

}  // namespace

SymMatrix sample_dn(const DnSamplerConfig& cfg, std::uint64_t draw_index) {
  const int n = cfg.n;
  if (n < kMinOrder || n > kMaxOrder) throw InputError("sampler order must lie in [2, 64]");
  if (!(cfg.scale > 0.0)) throw InputError("sampler scale must be positive");
  if (cfg.strategy == SamplerStrategy::wishart_reject && n > kWishartMaxOrder)
    throw InputError("wishart_reject is limited to n <= 8");

  SplitMix64 rng = SplitMix64::stream(cfg.seed, draw_index);
  constexpr int kMaxRedraws = 64;
  for (int redraw = 0; redraw < kMaxRedraws; ++redraw) {
    Matrix m;
    switch (cfg.strategy) {
      case SamplerStrategy::gram_nonneg: m = draw_gram(n, rng); break;
      case SamplerStrategy::wishart_reject: {
        auto w = draw_wishart(n, rng);
        if (!w) throw ProjectionStall("rejection sampler exhausted its attempts");
        m = std::move(*w);
        break;
      }
      case SamplerStrategy::dykstra_project: {
        auto p = draw_projected(n, rng);
        if (!p) continue;
        m = std::move(*p);
        break;
      }
    }
    SymMatrix a(m);
    const double lmax = eig_sym(a).max_eigenvalue();
    if (!(lmax > 0.0)) continue;
    SymMatrix scaled = (cfg.scale / lmax) * a;
    if (check_dn(scaled, 1e-10, 0.0).is_dn) return scaled;
  }
  throw ProjectionStall("sampler could not produce a certified DN matrix");
}

SymMatrix project_dn(const SymMatrix& a, double tol, int max_iters) {
  const double unit = std::max(1.0, a.max_abs());
  if (check_dn(a, tol * unit, 0.0).is_dn) return a;

  const double stop = tol * unit;
  Matrix x = a.dense();
  Matrix p(a.order());
  Matrix q(a.order());
  for (int it = 0; it < max_iters; ++it) {
    const Matrix y = project_psd(SymMatrix(x + p)).dense();
    p = x + p - y;
    const Matrix next = clip_nonneg(y + q);
    q = y + q - next;
    const double step = max_abs_diff(next, x);
    x = next;
    // A small step alone is not enough: Dykstra can creep while still
    // outside the PSD cone, so keep going until the certificate holds.
    if (step < stop) {
      SymMatrix out(x);
      if (check_dn(out, 1e-8 * unit, 0.0).is_dn) return out;
    }
  }
  throw ProjectionStall("Dykstra projection did not reach a certified DN iterate in " +
                        std::to_string(max_iters) + " iterations");
}

}  // namespace dncone
