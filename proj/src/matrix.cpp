#include "dncone/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dncone/errors.hpp"

namespace dncone {

Matrix::Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 1) throw InputError("matrix order must be positive");
}

Matrix::Matrix(int n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (n < 1) throw InputError("matrix order must be positive");
  if (a_.size() != static_cast<std::size_t>(n) * n) {
    throw InputError("expected " + std::to_string(n * n) + " entries, got " +
                     std::to_string(a_.size()));
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  const int n = x.order();
  if (y.order() != n) throw InputError("order mismatch in matrix product");
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
  if (y.order() != x.order()) throw InputError("order mismatch in matrix sum");
  Matrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] += yd[i];
  return r;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
  if (y.order() != x.order()) throw InputError("order mismatch in matrix difference");
  Matrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] -= yd[i];
  return r;
}

Matrix operator*(double s, const Matrix& x) {
  Matrix r = x;
  for (double& v : r.data()) v *= s;
  return r;
}

double max_abs(const Matrix& x) {
  double m = 0.0;
  for (double v : x.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  if (y.order() != x.order()) throw InputError("order mismatch");
  double m = 0.0;
  auto xd = x.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < xd.size(); ++i) m = std::max(m, std::abs(xd[i] - yd[i]));
  return m;
}

double frobenius(const Matrix& x) {
  double s = 0.0;
  for (double v : x.data()) s += v * v;
  return std::sqrt(s);
}

namespace {

void check_order(int n) {
  if (n < kMinOrder || n > kMaxOrder) {
    throw InputError("symmetric matrix order must lie in [2, 64], got " + std::to_string(n));
  }
}

Matrix symmetrized(const Matrix& m) {
  const int n = m.order();
  Matrix s(n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = m(i, i);
    for (int j = i + 1; j < n; ++j) {
      const double v = (m(i, j) + m(j, i)) / 2.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  for (double v : s.data())
    if (!std::isfinite(v)) throw InputError("matrix entries must be finite");
  return s;
}

}  // namespace

SymMatrix::SymMatrix(int n, std::vector<double> row_major) : SymMatrix(Matrix(n, std::move(row_major))) {}

SymMatrix::SymMatrix(const Matrix& m) {
  check_order(m.order());
  m_ = symmetrized(m);
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Matrix(n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) { return SymMatrix(Matrix::diagonal(d)); }

double SymMatrix::min_entry() const { return *std::min_element(data().begin(), data().end()); }

double SymMatrix::min_offdiag() const {
  const int n = order();
  double m = m_(0, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m = std::min(m, m_(i, j));
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < order(); ++i) t += m_(i, i);
  return t;
}

SymMatrix SymMatrix::permuted(std::span<const int> perm) const {
  const int n = order();
  if (static_cast<int>(perm.size()) != n) throw InputError("permutation size mismatch");
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = m_(perm[i], perm[j]);
  return SymMatrix(r);
}

SymMatrix operator+(const SymMatrix& x, const SymMatrix& y) { return SymMatrix(x.dense() + y.dense()); }

SymMatrix operator*(double s, const SymMatrix& x) { return SymMatrix(s * x.dense()); }

double max_abs_diff(const SymMatrix& x, const SymMatrix& y) { return max_abs_diff(x.dense(), y.dense()); }

}  // namespace dncone
