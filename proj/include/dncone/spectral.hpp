#pragma once

#include <span>
#include <vector>

#include "dncone/matrix.hpp"

namespace dncone {

struct EigOptions {
  double ortho_tol = 1e-12;
  // Sweeps stop once the off-diagonal Frobenius norm is at most
  // threshold_rel * ||A||_F.
  double threshold_rel = 1e-14;
  int max_sweeps = 64;
};

// A = U diag(eigenvalues) U^T, eigenvalues ascending, U orthogonal.
struct SpectralDecomp {
  Matrix u;
  std::vector<double> eigenvalues;

  int order() const noexcept { return u.order(); }
  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_eigenvalue() const { return eigenvalues.back(); }

  // U diag(values) U^T.
  Matrix compose(std::span<const double> values) const;
  Matrix reconstruct() const { return compose(eigenvalues); }
};

// Cyclic Jacobi with row-cyclic sweep order. Deterministic for fixed input.
// Throws NonConvergence when the sweep budget runs out or the accumulated
// rotations drift from orthogonality by more than ortho_tol.
SpectralDecomp eig_sym(const SymMatrix& a, const EigOptions& opts = {});

// (A + tI)^{-1} B through the eigenbasis of A.
Matrix shifted_apply_inverse(const SpectralDecomp& d, double t, const Matrix& b);

// Dense LU with partial pivoting, used as an eigen-independent path.
class LuFactor {
 public:
  explicit LuFactor(const Matrix& a);

  double determinant() const;
  Matrix solve(const Matrix& b) const;
  bool singular() const noexcept { return singular_; }

 private:
  Matrix lu_;
  std::vector<int> piv_;
  int sign_ = 1;
  bool singular_ = false;
};

double determinant(const Matrix& a);

}  // namespace dncone
