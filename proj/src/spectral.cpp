#include "dncone/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dncone/errors.hpp"

namespace dncone {

Matrix SpectralDecomp::compose(std::span<const double> values) const {
  const int n = order();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += u(i, k) * values[k] * u(j, k);
      r(i, j) = s;
      r(j, i) = s;
    }
  return r;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  const int n = a.order();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

void rotate(Matrix& a, Matrix& v, int p, int q) {
  const int n = a.order();
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (int k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (int k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (int k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SpectralDecomp eig_sym(const SymMatrix& input, const EigOptions& opts) {
  const int n = input.order();
  Matrix a = input.dense();
  Matrix v = Matrix::identity(n);
  const double threshold = opts.threshold_rel * frobenius(a);

  bool converged = false;
  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == opts.max_sweeps) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
  }
  if (!converged) {
    throw NonConvergence("Jacobi iteration did not converge in " + std::to_string(opts.max_sweeps) +
                         " sweeps");
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

  SpectralDecomp d{Matrix(n), std::vector<double>(n)};
  for (int k = 0; k < n; ++k) {
    d.eigenvalues[k] = a(idx[k], idx[k]);
    for (int i = 0; i < n; ++i) d.u(i, k) = v(i, idx[k]);
  }

  const Matrix gram = d.u.transpose() * d.u;
  const double ortho_err = max_abs_diff(gram, Matrix::identity(n));
  if (!(ortho_err <= opts.ortho_tol)) {
    throw NonConvergence("eigenvector orthogonality error " + std::to_string(ortho_err) +
                         " exceeds tolerance");
  }
  return d;
}

Matrix shifted_apply_inverse(const SpectralDecomp& d, double t, const Matrix& b) {
  if (b.order() != d.order()) throw InputError("order mismatch in shifted solve");
  std::vector<double> inv(d.eigenvalues.size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const double shifted = d.eigenvalues[i] + t;
    if (!(shifted > 0.0)) throw SingularShift("shift leaves a nonpositive eigenvalue");
    inv[i] = 1.0 / shifted;
  }
  return d.compose(inv) * b;
}

LuFactor::LuFactor(const Matrix& a) : lu_(a), piv_(a.order()) {
  const int n = a.order();
  std::iota(piv_.begin(), piv_.end(), 0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    if (lu_(p, k) == 0.0) {
      singular_ = true;
      continue;
    }
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(piv_[k], piv_[p]);
      sign_ = -sign_;
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / lu_(k, k);
      lu_(i, k) = m;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

double LuFactor::determinant() const {
  if (singular_) return 0.0;
  double det = sign_;
  for (int i = 0; i < lu_.order(); ++i) det *= lu_(i, i);
  return det;
}

Matrix LuFactor::solve(const Matrix& b) const {
  if (singular_) throw SingularShift("LU solve on a singular matrix");
  const int n = lu_.order();
  Matrix x(n);
  for (int col = 0; col < n; ++col) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double s = b(piv_[i], col);
      for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x(j, col);
      x(i, col) = s / lu_(i, i);
    }
  }
  return x;
}

double determinant(const Matrix& a) { return LuFactor(a).determinant(); }

}  // namespace dncone
