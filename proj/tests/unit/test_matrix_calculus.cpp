#include <gtest/gtest.h>

#include <cmath>

#include "dncone/errors.hpp"
#include "dncone/matrix_calculus.hpp"
#include "test_helpers.hpp"

using namespace dncone;
using testing_support::all_permutations;
using testing_support::sample;

TEST(SpectralApply, SpecExamples) {
  const double d[] = {4.0, 9.0};
  const SymMatrix r = spectral_apply(SymMatrix::diagonal(d), ScalarFunc::power(0.5));
  EXPECT_NEAR(r(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-15);
  EXPECT_EQ(r(0, 1), 0.0);

  for (int n : {2, 5}) {
    const SymMatrix e = spectral_apply(SymMatrix::identity(n), ScalarFunc::exp());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) EXPECT_NEAR(e(i, j), i == j ? std::exp(1.0) : 0.0, 1e-15);
  }

  const SymMatrix sq = spectral_apply(SymMatrix(2, {1, 1, 1, 1}), ScalarFunc::power(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(sq(i, j), 2.0, 1e-14);
}

TEST(SpectralApply, ClampsTinyNegativeEigenvaluesOnly) {
  const SymMatrix a(2, {1, 1, 1, 1 - 1e-12});
  EXPECT_NO_THROW(spectral_apply(a, ScalarFunc::power(0.5)));
  EXPECT_THROW(spectral_apply(SymMatrix(2, {1, 2, 2, 1}), ScalarFunc::power(0.5)), DomainError);
}

TEST(SpectralApply, MatchesMatrixProducts) {
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 6;
    const SymMatrix a = sample(n, 3, static_cast<std::uint64_t>(k));
    EXPECT_LE(max_abs_diff(spectral_apply(a, ScalarFunc::power(1)), a), 1e-13);
    EXPECT_LE(max_abs_diff(spectral_apply(a, ScalarFunc::power(3)).dense(), a.dense() * a.dense() * a.dense()), 1e-13);
  }
}

TEST(SpectralApply, PermutationEquivarianceAndOffDiagonalSufficiency) {
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k < 20; ++k) {
      const SymMatrix a = sample(n, 8, static_cast<std::uint64_t>(k));
      // Exponents >= 1 keep f Lipschitz at 0; below 1, eigenvalue noise of
      // 1e-17 on singular samples becomes 1e-9 in f(A).
      const ScalarFunc f = ScalarFunc::power(1.0 + 0.4 * k);
      const SymMatrix fa = spectral_apply(a, f);
      bool all_12_ok = true;
      for (const auto& p : all_permutations(n)) {
        const SymMatrix lhs = spectral_apply(a.permuted(p), f);
        EXPECT_LE(max_abs_diff(lhs, fa.permuted(p)), 1e-10);
        all_12_ok = all_12_ok && lhs(0, 1) >= -1e-8;
      }
      EXPECT_EQ(all_12_ok, check_dn(fa, 1e-10, 1e-8).is_dn);
    }
}

TEST(SpectralApply, Semigroup) {
  SplitMix64 rng(6);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 6;
    const SymMatrix a = sample(n, 10, static_cast<std::uint64_t>(k));
    const double p = rng.uniform(0, 3), q = rng.uniform(0, 3);
    const Matrix lhs = spectral_apply(a, ScalarFunc::power(p)).dense() * spectral_apply(a, ScalarFunc::power(q)).dense();
    EXPECT_LE(max_abs_diff(lhs, spectral_apply(a, ScalarFunc::power(p + q)).dense()), 1e-8);
  }
}

TEST(SpectralApply, SingularLimit) {
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 5;
    // gram samples with k < n are singular.
    const SymMatrix a = sample(n, 12, static_cast<std::uint64_t>(3 * k));
    const double q = n - 0.5;
    const SymMatrix ref = spectral_apply(a, ScalarFunc::power(q));
    double prev = INFINITY;
    for (double u : {1e-2, 1e-4, 1e-6}) {
      const double err = max_abs_diff(spectral_apply(a + u * SymMatrix::identity(n), ScalarFunc::power(q)), ref);
      EXPECT_LE(err, prev);
      prev = err;
    }
    EXPECT_LE(prev, 1e-5);
  }
}

TEST(SpectralApply, ExecutionIndependentOfThreads) {
  const SymMatrix a = sample(6, 1, 0);
  const SpectralDecomp d = eig_sym(a);
  EXPECT_EQ(spectral_apply(d, ScalarFunc::power(1.3)), spectral_apply(a, ScalarFunc::power(1.3)));
}

TEST(HadamardApply, SpecExamples) {
  const SymMatrix r = hadamard_apply(SymMatrix(2, {4, 1, 1, 4}), ScalarFunc::power(0.5));
  EXPECT_EQ(r, SymMatrix(2, {2, 1, 1, 2}));
  const SymMatrix a = sample(4, 2, 5);
  EXPECT_EQ(hadamard_apply(a, ScalarFunc::power(1)), a);
}

TEST(HadamardApply, EntrywiseThresholdOnDn3) {
  for (int k = 0; k < 500; ++k) {
    const SymMatrix a = sample(3, 13, static_cast<std::uint64_t>(k));
    EXPECT_TRUE(check_dn(hadamard_apply(a, ScalarFunc::power(1.5)), 1e-10, 0.0).is_dn) << k;
  }
}

TEST(NewtonPolynomial, DiagonalExample) {
  const double d[] = {1.0, 2.0};
  const NewtonExpansion ne = newton_matrix_polynomial(SymMatrix::diagonal(d), ScalarFunc::power(3));
  EXPECT_NEAR(ne.value(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(ne.value(1, 1), 8.0, 1e-14);
  ASSERT_EQ(ne.products.size(), 1u);
  EXPECT_NEAR(ne.products[0](0, 0), 0.0, 1e-15);
  EXPECT_NEAR(ne.products[0](1, 1), 1.0, 1e-15);
}

TEST(NewtonPolynomial, ReproducesLowDegreePolynomials) {
  for (int k = 0; k < 50; ++k) {
    const int n = 3 + k % 4;
    const SymMatrix a = sample(n, 4, static_cast<std::uint64_t>(k));
    for (int d = 0; d < n; ++d) {
      const ScalarFunc f = ScalarFunc::power(d);
      EXPECT_LE(max_abs_diff(newton_matrix_polynomial(a, f).value, spectral_apply(a, f)), 1e-12);
    }
  }
}

TEST(NewtonPolynomial, ProductsAreDnAndReproduceF) {
  for (int n = 3; n <= 6; ++n)
    for (int k = 0; k < 100; ++k) {
      const SymMatrix a = sample(n, 14, static_cast<std::uint64_t>(k));
      const ScalarFunc f = k % 2 ? ScalarFunc::exp() : ScalarFunc::power(n - 0.5);
      const NewtonExpansion ne = newton_matrix_polynomial(a, f);
      ASSERT_EQ(ne.products.size(), static_cast<std::size_t>(n - 1));
      for (const SymMatrix& p : ne.products) EXPECT_TRUE(check_dn(p).is_dn);
      const SymMatrix ref = spectral_apply(a, f);
      EXPECT_LE(max_abs_diff(ne.value, ref), 1e-8 * std::max(1.0, ref.max_abs()));
    }
}

TEST(Resolvent, SpecExamples) {
  const SymMatrix r = resolvent_product(SymMatrix(2, {1, 1, 1, 1}), 1, 1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(r(i, j), 1.0 / 3.0, 1e-15);
  for (int n : {2, 4}) {
    const SymMatrix id = resolvent_product(SymMatrix::identity(n), n - 1, 1.0);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(id(i, i), 0.5, 1e-15);
  }
  EXPECT_THROW(resolvent_product(SymMatrix::identity(2), 1, 0.0), InputError);
}

TEST(Resolvent, DnFact) {
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 200; ++k) {
      const SymMatrix a = sample(n, 15, static_cast<std::uint64_t>(k));
      for (double u : {0.01, 0.1, 1.0, 10.0, 100.0})
        EXPECT_TRUE(check_dn(resolvent_product(a, n - 1, u)).is_dn) << "n=" << n << " u=" << u;
    }
}

TEST(ExplicitEntry, SpecExamples) {
  EXPECT_NEAR(explicit_offdiag_entry(SymMatrix(2, {1, 1, 1, 1}), 1.0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(explicit_offdiag_entry(SymMatrix(3, {1, 0, 0, 0, 2, 0.5, 0, 0.5, 3}), 1.0), 0.0);
  const double d[] = {1, 2, 3};
  EXPECT_EQ(explicit_offdiag_entry(SymMatrix::diagonal(d), 2.0), 0.0);
  EXPECT_THROW(explicit_offdiag_entry(SymMatrix::identity(4), 1.0), OrderUnsupported);
}

TEST(ExplicitEntry, AgreesWithResolvent) {
  for (int n : {2, 3})
    for (int k = 0; k < 300; ++k) {
      const SymMatrix a = sample(n, 16, static_cast<std::uint64_t>(k));
      for (double u : {0.01, 1.0, 100.0}) {
        const SymMatrix r = resolvent_product(a, n - 1, u);
        EXPECT_LE(std::abs(explicit_offdiag_entry(a, u) - r(0, 1)), 1e-10 * std::max(std::abs(r(0, 1)), r.max_abs()));
      }
    }
}

TEST(Quadrature, ScalarIdentity) {
  EXPECT_NEAR(quadrature_power_scalar(1.0, QuadratureSpec::for_exponent(0.5)), 1.0, 1e-8);
  for (double q : {0.1, 0.5, 0.9, 1.5, 2.7, 3.3, 5.99})
    for (double x : {1e-3, 0.2, 1.0, 7.0, 1e3})
      EXPECT_NEAR(quadrature_power_scalar(x, QuadratureSpec::for_exponent(q)), std::pow(x, q), 1e-8 * std::pow(x, q));
}

TEST(Quadrature, SpecSetup) {
  const QuadratureSpec s = QuadratureSpec::for_exponent(2.7);
  EXPECT_EQ(s.k, 2);
  EXPECT_THROW(QuadratureSpec::for_exponent(2.0), InputError);
  EXPECT_THROW(QuadratureSpec::for_exponent(-0.5), InputError);
}

TEST(Quadrature, DiagonalExample) {
  const double d[] = {1.0, 4.0};
  const SymMatrix r = quadrature_power(SymMatrix::diagonal(d), QuadratureSpec::for_exponent(1.5));
  EXPECT_NEAR(r(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(r(1, 1), 8.0, 8e-10);
}

TEST(Quadrature, MatchesSpectralPower) {
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + k % 4;
    const SymMatrix a = sample(n, 17, static_cast<std::uint64_t>(k)) + 0.01 * SymMatrix::identity(n);
    for (double q : {0.5, 1.5, 2.7, 3.3}) {
      const SymMatrix ref = spectral_apply(a, ScalarFunc::power(q));
      QuadratureSpec spec = QuadratureSpec::for_exponent(q);
      EXPECT_LE(max_abs_diff(quadrature_power(a, spec), ref), 1e-6 * ref.max_abs());
      spec.solve_mode = SolveMode::lu;
      EXPECT_LE(max_abs_diff(quadrature_power(a, spec), ref), 1e-6 * ref.max_abs());
    }
  }
}

TEST(Quadrature, SerialEqualsParallel) {
  const SymMatrix a = sample(5, 2, 1) + 0.01 * SymMatrix::identity(5);
  for (SolveMode m : {SolveMode::eigen, SolveMode::lu}) {
    QuadratureSpec s = QuadratureSpec::for_exponent(2.7);
    s.solve_mode = m;
    EXPECT_EQ(quadrature_power(a, s, kDefaultPsdTol, Execution::serial),
              quadrature_power(a, s, kDefaultPsdTol, Execution::parallel));
  }
}

TEST(Quadrature, ConvergesAsSegmentsDouble) {
  const double d[] = {0.3, 1.0, 5.0};
  const SymMatrix a = SymMatrix::diagonal(d);
  for (double q : {0.5, 1.5, 2.7}) {
    const SymMatrix ref = spectral_apply(a, ScalarFunc::power(q));
    double prev = INFINITY;
    for (int seg = 1; seg <= 16; seg *= 2) {
      QuadratureSpec s = QuadratureSpec::for_exponent(q);
      s.adaptive = false;
      s.segments = seg;
      const double err = max_abs_diff(quadrature_power(a, s), ref);
      EXPECT_LE(err, 2.0 * prev + 1e-14) << "q=" << q << " segments=" << seg;
      prev = err;
    }
    EXPECT_LE(prev, 1e-8);
  }
}

TEST(Quadrature, StallReported) {
  QuadratureSpec s = QuadratureSpec::for_exponent(0.5);
  s.rel_tol = 1e-30;
  s.max_panels = 8;
  EXPECT_THROW(quadrature_power(SymMatrix::identity(2), s), QuadratureStall);
}
