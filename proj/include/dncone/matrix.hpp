#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dncone {

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 64;

// Dense square matrix, row-major. Used for intermediate products that are
// not symmetric in floating point (or at all).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n);
  Matrix(int n, std::vector<double> row_major);

  static Matrix identity(int n);
  static Matrix diagonal(std::span<const double> d);

  int order() const noexcept { return n_; }
  double& operator()(int i, int j) noexcept { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const noexcept {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }
  std::span<const double> data() const noexcept { return a_; }
  std::span<double> data() noexcept { return a_; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& x, const Matrix& y);
Matrix operator+(const Matrix& x, const Matrix& y);
Matrix operator-(const Matrix& x, const Matrix& y);
Matrix operator*(double s, const Matrix& x);

double max_abs(const Matrix& x);
double max_abs_diff(const Matrix& x, const Matrix& y);
double frobenius(const Matrix& x);

// Real symmetric matrix of order 2..64 with a_ij == a_ji bit-exactly.
// Construction symmetrizes via (a_ij + a_ji) / 2 and rejects non-finite
// entries.
class SymMatrix {
 public:
  SymMatrix(int n, std::vector<double> row_major);
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  static SymMatrix diagonal(std::span<const double> d);

  int order() const noexcept { return m_.order(); }
  double operator()(int i, int j) const noexcept { return m_(i, j); }
  std::span<const double> data() const noexcept { return m_.data(); }
  const Matrix& dense() const noexcept { return m_; }

  double max_abs() const { return dncone::max_abs(m_); }
  double min_entry() const;
  double min_offdiag() const;
  double trace() const;

  // P A P^T for the permutation i -> perm[i] (row i of the result is row
  // perm[i] of A).
  SymMatrix permuted(std::span<const int> perm) const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

SymMatrix operator+(const SymMatrix& x, const SymMatrix& y);
SymMatrix operator*(double s, const SymMatrix& x);
double max_abs_diff(const SymMatrix& x, const SymMatrix& y);

}  // namespace dncone
