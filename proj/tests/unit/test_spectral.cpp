#include <gtest/gtest.h>

#include <cmath>

#include "dncone/errors.hpp"
#include "dncone/spectral.hpp"
#include "test_helpers.hpp"

using namespace dncone;
using testing_support::random_permutation;
using testing_support::random_symmetric;

TEST(SymMatrix, SymmetrizesOnConstruction) {
  SymMatrix a(2, {1.0, 2.0, 4.0, 1.0});
  EXPECT_EQ(a(0, 1), 3.0);
  EXPECT_EQ(a(1, 0), 3.0);
}

TEST(SymMatrix, RejectsBadShapesAndValues) {
  EXPECT_THROW(SymMatrix(1, {1.0}), InputError);
  EXPECT_THROW(SymMatrix(65, std::vector<double>(65 * 65, 0.0)), InputError);
  EXPECT_THROW(SymMatrix(2, {1.0, 0.0, 0.0}), InputError);
  EXPECT_THROW(SymMatrix(2, {1.0, NAN, NAN, 1.0}), InputError);
  EXPECT_THROW(SymMatrix(2, {1.0, INFINITY, 0.0, 1.0}), InputError);
}

TEST(SymMatrix, PermutedMovesRowsAndColumns) {
  SymMatrix a(3, {1, 2, 3, 2, 4, 5, 3, 5, 6});
  const std::vector<int> p{2, 0, 1};
  const SymMatrix b = a.permuted(p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(b(i, j), a(p[i], p[j]));
}

TEST(EigSym, DiagonalInput) {
  const double d[] = {4.0, 9.0};
  const SpectralDecomp e = eig_sym(SymMatrix::diagonal(d));
  EXPECT_EQ(e.eigenvalues, (std::vector<double>{4.0, 9.0}));
  EXPECT_EQ(e.u, Matrix::identity(2));
}

TEST(EigSym, TwoByTwoClosedForm) {
  const SpectralDecomp e = eig_sym(SymMatrix(2, {2, 1, 1, 2}));
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 3.0, 1e-14);
}

TEST(EigSym, ClosedFormOnRandomTwoByTwo) {
  SplitMix64 rng(7);
  for (int s = 0; s < 200; ++s) {
    const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), c = rng.uniform(-5, 5);
    const SpectralDecomp e = eig_sym(SymMatrix(2, {a, b, b, c}));
    const double r = std::sqrt((a - c) * (a - c) + 4 * b * b);
    EXPECT_NEAR(e.eigenvalues[0], (a + c - r) / 2, 1e-12);
    EXPECT_NEAR(e.eigenvalues[1], (a + c + r) / 2, 1e-12);
  }
}

TEST(EigSym, ReconstructsWishartSample) {
  SplitMix64 rng(11);
  Matrix g(6);
  for (double& x : g.data()) x = rng.normal();
  const SymMatrix a(g * g.transpose());
  const SpectralDecomp e = eig_sym(a);
  EXPECT_LE(max_abs_diff(e.reconstruct(), a.dense()), 1e-10 * std::max(1.0, a.max_abs()));
}

TEST(EigSym, ReconstructionAndOrthogonalityCorpus) {
  SplitMix64 rng(2024);
  for (int s = 0; s < 1000; ++s) {
    const int n = 2 + s % 7;
    const SymMatrix a = random_symmetric(n, rng);
    const SpectralDecomp e = eig_sym(a);
    EXPECT_LE(max_abs_diff(e.reconstruct(), a.dense()), 1e-9);
    EXPECT_LE(max_abs_diff(e.u.transpose() * e.u, Matrix::identity(n)), 1e-12);
    EXPECT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
  }
}

TEST(EigSym, TraceAndDeterminant) {
  SplitMix64 rng(99);
  for (int s = 0; s < 300; ++s) {
    const int n = 2 + s % 7;
    const SymMatrix a = random_symmetric(n, rng);
    const SpectralDecomp e = eig_sym(a);
    double sum = 0.0, prod = 1.0, abs_sum = 0.0;
    for (double l : e.eigenvalues) {
      sum += l;
      prod *= l;
      abs_sum += std::abs(l);
    }
    EXPECT_LE(std::abs(sum - a.trace()), 1e-10 * std::max(abs_sum, 1.0));
    const double det = determinant(a.dense());
    EXPECT_LE(std::abs(prod - det), 1e-8 * std::max(std::abs(det), 1e-300) + 1e-10);
  }
}

TEST(EigSym, PermutationEquivariance) {
  SplitMix64 rng(5);
  for (int s = 0; s < 300; ++s) {
    const int n = 2 + s % 7;
    const SymMatrix a = random_symmetric(n, rng);
    const auto p = random_permutation(n, rng);
    const auto l1 = eig_sym(a).eigenvalues;
    const auto l2 = eig_sym(a.permuted(p)).eigenvalues;
    for (int i = 0; i < n; ++i) EXPECT_NEAR(l1[i], l2[i], 1e-10 * std::max(1.0, std::abs(l1[i])));
  }
}

TEST(EigSym, RepeatedEigenvaluesAndLargeOrder) {
  const SpectralDecomp e = eig_sym(SymMatrix::identity(5));
  for (double l : e.eigenvalues) EXPECT_EQ(l, 1.0);
  SplitMix64 rng(3);
  const SymMatrix a = random_symmetric(64, rng);
  const SpectralDecomp big = eig_sym(a);
  EXPECT_LE(max_abs_diff(big.reconstruct(), a.dense()), 1e-9);
}

TEST(EigSym, Deterministic) {
  SplitMix64 rng(8);
  const SymMatrix a = random_symmetric(7, rng);
  const SpectralDecomp x = eig_sym(a), y = eig_sym(a);
  EXPECT_EQ(x.u, y.u);
  EXPECT_EQ(x.eigenvalues, y.eigenvalues);
}

TEST(EigSym, SweepBudgetExhaustionThrows) {
  EigOptions o;
  o.max_sweeps = 0;
  EXPECT_THROW(eig_sym(SymMatrix(2, {2, 1, 1, 2}), o), NonConvergence);
}

TEST(ShiftedApplyInverse, DiagonalCase) {
  const double d[] = {1.0, 4.0};
  const SpectralDecomp e = eig_sym(SymMatrix::diagonal(d));
  const Matrix r = shifted_apply_inverse(e, 1.0, Matrix::identity(2));
  EXPECT_NEAR(r(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 1), 0.2, 1e-15);
  EXPECT_EQ(r(0, 1), 0.0);
}

TEST(ShiftedApplyInverse, TwoByTwoAgainstDirectInverse) {
  const SymMatrix a(2, {1, 1, 1, 1});
  const Matrix r = shifted_apply_inverse(eig_sym(a), 1.0, a.dense());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(r(i, j), 1.0 / 3.0, 1e-15);
}

TEST(ShiftedApplyInverse, ZeroOperandAndSingularShift) {
  SplitMix64 rng(1);
  const SymMatrix a = random_symmetric(4, rng, 0.0, 1.0);
  const SpectralDecomp e = eig_sym(a);
  EXPECT_EQ(max_abs(shifted_apply_inverse(e, 1.0 + std::abs(e.min_eigenvalue()), Matrix(4))), 0.0);
  EXPECT_THROW(shifted_apply_inverse(e, -e.min_eigenvalue(), Matrix::identity(4)), SingularShift);
}

TEST(ShiftedApplyInverse, MatchesLuSolve) {
  SplitMix64 rng(17);
  for (int s = 0; s < 50; ++s) {
    const int n = 2 + s % 6;
    const SymMatrix a = random_symmetric(n, rng, 0.0, 1.0);
    const SpectralDecomp e = eig_sym(a);
    const double t = 0.5 + std::abs(e.min_eigenvalue());
    Matrix b(n);
    for (double& x : b.data()) x = rng.uniform(-1, 1);
    const Matrix shifted = a.dense() + t * Matrix::identity(n);
    EXPECT_LE(max_abs_diff(shifted_apply_inverse(e, t, b), LuFactor(shifted).solve(b)), 1e-10);
  }
}

TEST(LuFactor, DeterminantAndSingular) {
  EXPECT_NEAR(determinant(Matrix(2, {2, 1, 1, 2})), 3.0, 1e-15);
  EXPECT_NEAR(determinant(Matrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 1})), -1.0, 1e-15);
  LuFactor lu(Matrix(2, {1, 1, 1, 1}));
  EXPECT_TRUE(lu.singular());
  EXPECT_THROW(lu.solve(Matrix::identity(2)), SingularShift);
}
