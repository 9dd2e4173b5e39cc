#pragma once

#include <vector>

#include "dncone/dn_cone.hpp"
#include "dncone/matrix.hpp"
#include "dncone/parallel.hpp"
#include "dncone/scalar_calculus.hpp"
#include "dncone/scalar_func.hpp"
#include "dncone/spectral.hpp"

namespace dncone {

// f(A) = U f(D) U^T. Eigenvalues in [-psd_tol, 0) are treated as 0; anything
// more negative is a DomainError, as is a non-finite f(lambda).
SymMatrix spectral_apply(const SymMatrix& a, const ScalarFunc& f, double psd_tol = kDefaultPsdTol,
                         const EigOptions& eig = {});
SymMatrix spectral_apply(const SpectralDecomp& d, const ScalarFunc& f, double psd_tol = kDefaultPsdTol);

// Entrywise f[A] = (f(a_ij)).
SymMatrix hadamard_apply(const SymMatrix& a, const ScalarFunc& f);

struct NewtonExpansion {
  SymMatrix value;                 // p(A), p interpolating f on the spectrum
  std::vector<SymMatrix> products;  // (A - l_1 I)...(A - l_k I), k = 1..n-1
  std::vector<double> eigenvalues;  // ascending, clamped at 0
  DividedDiffTable table;
};

// Newton form of the interpolant of f at l_1 <= ... <= l_n evaluated at A:
//   p(A) = sum_k f[l_1..l_{k+1}] (A - l_1 I)...(A - l_k I).
NewtonExpansion newton_matrix_polynomial(const SymMatrix& a, const ScalarFunc& f,
                                         double psd_tol = kDefaultPsdTol);

// A^p (A + uI)^{-1} in the eigenbasis of A.
SymMatrix resolvent_product(const SymMatrix& a, int p, double u, double psd_tol = kDefaultPsdTol);

// Closed-form (1,2) entry of A^{n-1}(A + uI)^{-1} for n = 2, 3 built from
// determinants and principal minors. Throws OrderUnsupported otherwise.
double explicit_offdiag_entry(const SymMatrix& a, double u);

enum class SolveMode { eigen, lu };

// A^q for k < q < k+1 from
//   A^q = sin((q-k) pi)/pi * int_0^inf t^{q-k-1} A^{k+1} (A + tI)^{-1} dt.
// The integral is split at t = 1. On [0,1], t = s^{1/(q-k)} removes the
// endpoint singularity; on [1,inf), t = w^{-1/(1-q+k)} maps the tail onto
// a bounded integrand on [0,1]. Both pieces use 15-point Gauss-Legendre
// panels with bisection of the worst panel.
struct QuadratureSpec {
  double q = 0.5;
  int k = 0;
  int segments = 4;  // initial panels per piece
  double rel_tol = 1e-10;
  int max_panels = 4096;  // per piece
  bool adaptive = true;   // false: fixed composite rule over `segments` panels
  SolveMode solve_mode = SolveMode::eigen;

  // k = floor(q); q must not be an integer.
  static QuadratureSpec for_exponent(double q);
};

SymMatrix quadrature_power(const SymMatrix& a, const QuadratureSpec& spec, double psd_tol = kDefaultPsdTol,
                           Execution exec = Execution::parallel);

// Scalar version of the same rule (x > 0).
double quadrature_power_scalar(double x, const QuadratureSpec& spec);

}  // namespace dncone
