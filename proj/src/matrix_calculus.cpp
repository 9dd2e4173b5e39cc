#include "dncone/matrix_calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "dncone/errors.hpp"

namespace dncone {

namespace {

std::vector<double> clamped_spectrum(const SpectralDecomp& d, double psd_tol) {
  std::vector<double> l = d.eigenvalues;
  for (double& v : l) {
    if (v < -psd_tol) throw DomainError("matrix has an eigenvalue below -psd_tol");
    if (v < 0.0) v = 0.0;
  }
  return l;
}

}  // namespace

SymMatrix spectral_apply(const SpectralDecomp& d, const ScalarFunc& f, double psd_tol) {
  std::vector<double> fl = clamped_spectrum(d, psd_tol);
  for (double& v : fl) {
    v = f.value(v);
    if (!std::isfinite(v)) throw DomainError("function is not finite at an eigenvalue");
  }
  return SymMatrix(d.compose(fl));
}

SymMatrix spectral_apply(const SymMatrix& a, const ScalarFunc& f, double psd_tol, const EigOptions& eig) {
  return spectral_apply(eig_sym(a, eig), f, psd_tol);
}

SymMatrix hadamard_apply(const SymMatrix& a, const ScalarFunc& f) {
  const int n = a.order();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = f.value(a(i, j));
      if (!std::isfinite(v)) throw DomainError("function is not finite at a matrix entry");
      r(i, j) = v;
    }
  return SymMatrix(r);
}

NewtonExpansion newton_matrix_polynomial(const SymMatrix& a, const ScalarFunc& f, double psd_tol) {
  const int n = a.order();
  const SpectralDecomp d = eig_sym(a);
  std::vector<double> lambda = clamped_spectrum(d, psd_tol);

  DividedDiffOptions opts;
  opts.scale = std::max(std::abs(lambda.back()), a.max_abs());
  DividedDiffTable table = divided_differences(f, lambda, opts);

  Matrix prod = Matrix::identity(n);
  Matrix p = table.newton_coefficient(0) * prod;
  std::vector<SymMatrix> products;
  products.reserve(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) {
    Matrix shifted = a.dense();
    for (int i = 0; i < n; ++i) shifted(i, i) -= lambda[static_cast<std::size_t>(k - 1)];
    prod = prod * shifted;
    products.emplace_back(prod);
    p = p + table.newton_coefficient(static_cast<std::size_t>(k)) * prod;
  }
  return NewtonExpansion{SymMatrix(p), std::move(products), std::move(lambda), std::move(table)};
}

SymMatrix resolvent_product(const SymMatrix& a, int p, double u, double psd_tol) {
  if (p < 0) throw InputError("resolvent power must be >= 0");
  if (!(u > 0.0)) throw InputError("resolvent shift must be positive");
  const SpectralDecomp d = eig_sym(a);
  std::vector<double> vals = clamped_spectrum(d, psd_tol);
  for (double& l : vals) {
    const double shifted = l + u;
    if (!(shifted > 0.0)) throw SingularShift("resolvent shift leaves a nonpositive eigenvalue");
    l = (p == 0 ? 1.0 : std::pow(l, p)) / shifted;
  }
  return SymMatrix(d.compose(vals));
}

double explicit_offdiag_entry(const SymMatrix& a, double u) {
  const int n = a.order();
  if (!(u > 0.0)) throw InputError("shift must be positive");
  if (n == 2) {
    const double det = (a(0, 0) + u) * (a(1, 1) + u) - a(0, 1) * a(0, 1);
    return a(0, 1) * u / det;
  }
  if (n != 3) throw OrderUnsupported("closed-form entry exists for n = 2 and n = 3 only");

  auto det3 = [](double m00, double m01, double m02, double m11, double m12, double m22) {
    return m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) + m02 * (m01 * m12 - m11 * m02);
  };
  const double a11 = a(0, 0), a22 = a(1, 1), a33 = a(2, 2);
  const double a12 = a(0, 1), a13 = a(0, 2), a23 = a(1, 2);
  const double det_a = det3(a11, a12, a13, a22, a23, a33);
  const double det_shift = det3(a11 + u, a12, a13, a22 + u, a23, a33 + u);
  const double c11 = a22 * a33 - a23 * a23;
  const double c22 = a11 * a33 - a13 * a13;
  const double c33 = a11 * a22 - a12 * a12;
  return (a12 * det_a + a12 * u * (c11 + c22 + c33) + u * u * (a12 * a11 + a12 * a22 + a13 * a23)) / det_shift;
}

QuadratureSpec QuadratureSpec::for_exponent(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw InputError("quadrature exponent must be positive");
  const double k = std::floor(q);
  if (k == q) throw InputError("quadrature exponent must not be an integer");
  QuadratureSpec s;
  s.q = q;
  s.k = static_cast<int>(k);
  return s;
}

namespace {

struct GaussRule {
  std::array<double, 15> x{};
  std::array<double, 15> w{};
};

const GaussRule& gauss15() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

using VecIntegrand = std::function<void(double, std::span<double>)>;

std::vector<double> gauss_panel(const VecIntegrand& f, std::size_t m, double a, double b) {
  const GaussRule& g = gauss15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> acc(m, 0.0), y(m);
  for (int i = 0; i < 15; ++i) {
    f(mid + half * g.x[i], y);
    for (std::size_t c = 0; c < m; ++c) acc[c] += g.w[i] * y[c];
  }
  for (double& v : acc) v *= half;
  return acc;
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> estimate;
  double error = 0.0;
};

Panel evaluate_panel(const VecIntegrand& f, std::size_t m, double a, double b) {
  const double mid = 0.5 * (a + b);
  const std::vector<double> whole = gauss_panel(f, m, a, b);
  std::vector<double> halves = gauss_panel(f, m, a, mid);
  const std::vector<double> right = gauss_panel(f, m, mid, b);
  double err = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    halves[c] += right[c];
    err = std::max(err, std::abs(halves[c] - whole[c]));
  }
  return Panel{a, b, std::move(halves), err};
}

double max_component(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Integral of f over [0, 1].
std::vector<double> integrate_unit(const VecIntegrand& f, std::size_t m, const QuadratureSpec& spec,
                                   Execution exec) {
  const int segments = std::max(1, spec.segments);
  if (!spec.adaptive) {
    std::vector<std::vector<double>> parts(static_cast<std::size_t>(segments));
    for_each_index(parts.size(), [&](std::size_t i) {
      parts[i] = gauss_panel(f, m, static_cast<double>(i) / segments, static_cast<double>(i + 1) / segments);
    }, exec);
    std::vector<double> total(m, 0.0);
    for (const auto& p : parts)
      for (std::size_t c = 0; c < m; ++c) total[c] += p[c];
    return total;
  }

  std::vector<Panel> panels(static_cast<std::size_t>(segments));
  for_each_index(panels.size(), [&](std::size_t i) {
    panels[i] = evaluate_panel(f, m, static_cast<double>(i) / segments, static_cast<double>(i + 1) / segments);
  }, exec);

  for (;;) {
    std::vector<double> total(m, 0.0);
    double err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      for (std::size_t c = 0; c < m; ++c) total[c] += panels[i].estimate[c];
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (err <= spec.rel_tol * max_component(total)) return total;
    if (static_cast<int>(panels.size()) >= spec.max_panels)
      throw QuadratureStall("quadrature panel budget exhausted before reaching rel_tol");
    const Panel w = panels[worst];
    const double mid = 0.5 * (w.a + w.b);
    panels[worst] = evaluate_panel(f, m, w.a, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, evaluate_panel(f, m, mid, w.b));
  }
}

// sin(theta pi)/pi * (I_head + I_tail) where, with theta = q - k,
//   I_head = 1/theta     int_0^1 F(s^{1/theta}) ds
//   I_tail = 1/(1-theta) int_0^1 t F(t) dw,  t = w^{-1/(1-theta)}
// and F(t) = A^{k+1}(A + tI)^{-1}. `head` and `tail` evaluate F(s^{1/theta})
// and t F(t) respectively.
std::vector<double> contour_integral(const VecIntegrand& head, const VecIntegrand& tail, std::size_t m,
                                     const QuadratureSpec& spec, Execution exec) {
  const double theta = spec.q - spec.k;
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("quadrature needs k < q < k + 1");
  QuadratureSpec piece = spec;
  piece.rel_tol = spec.rel_tol / 2.0;
  const std::vector<double> h = integrate_unit(head, m, piece, exec);
  const std::vector<double> t = integrate_unit(tail, m, piece, exec);
  const double weight = std::sin(theta * std::numbers::pi) / std::numbers::pi;
  std::vector<double> r(m);
  for (std::size_t c = 0; c < m; ++c) r[c] = weight * (h[c] / theta + t[c] / (1.0 - theta));
  return r;
}

}  // namespace

double quadrature_power_scalar(double x, const QuadratureSpec& spec) {
  if (!(x > 0.0)) throw DomainError("scalar quadrature needs x > 0");
  const double theta = spec.q - spec.k;
  const double xk1 = std::pow(x, spec.k + 1);
  const VecIntegrand head = [&](double s, std::span<double> out) {
    out[0] = xk1 / (x + std::pow(s, 1.0 / theta));
  };
  const VecIntegrand tail = [&](double w, std::span<double> out) {
    out[0] = xk1 / (1.0 + std::pow(w, 1.0 / (1.0 - theta)) * x);
  };
  return contour_integral(head, tail, 1, spec, Execution::serial)[0];
}

SymMatrix quadrature_power(const SymMatrix& a, const QuadratureSpec& spec, double psd_tol, Execution exec) {
  if (spec.k < 0) throw InputError("quadrature k must be >= 0");
  const double theta = spec.q - spec.k;
  const int n = a.order();
  const SpectralDecomp d = eig_sym(a);
  const std::vector<double> lambda = clamped_spectrum(d, psd_tol);

  if (spec.solve_mode == SolveMode::eigen) {
    std::vector<double> lk1(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) lk1[i] = std::pow(lambda[i], spec.k + 1);
    const VecIntegrand head = [&](double s, std::span<double> out) {
      const double t = std::pow(s, 1.0 / theta);
      for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = lk1[i] == 0.0 ? 0.0 : lk1[i] / (lambda[i] + t);
    };
    const VecIntegrand tail = [&](double w, std::span<double> out) {
      const double r = std::pow(w, 1.0 / (1.0 - theta));
      for (std::size_t i = 0; i < lambda.size(); ++i) out[i] = lk1[i] / (1.0 + r * lambda[i]);
    };
    return SymMatrix(d.compose(contour_integral(head, tail, lambda.size(), spec, exec)));
  }

  // LU mode: dense solves against A^{k+1}, no eigenbasis inside the integral.
  Matrix ak1 = a.dense();
  for (int j = 0; j < spec.k; ++j) ak1 = ak1 * a.dense();
  const std::size_t m = static_cast<std::size_t>(n) * n;
  const VecIntegrand head = [&](double s, std::span<double> out) {
    Matrix shifted = a.dense();
    const double t = std::pow(s, 1.0 / theta);
    for (int i = 0; i < n; ++i) shifted(i, i) += t;
    const Matrix x = LuFactor(shifted).solve(ak1);
    std::copy(x.data().begin(), x.data().end(), out.begin());
  };
  const VecIntegrand tail = [&](double w, std::span<double> out) {
    const double r = std::pow(w, 1.0 / (1.0 - theta));
    Matrix shifted = r * a.dense();
    for (int i = 0; i < n; ++i) shifted(i, i) += 1.0;
    const Matrix x = LuFactor(shifted).solve(ak1);
    std::copy(x.data().begin(), x.data().end(), out.begin());
  };
  return SymMatrix(Matrix(n, contour_integral(head, tail, m, spec, exec)));
}

}  // namespace dncone
