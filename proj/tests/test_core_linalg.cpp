// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "test_support.hpp"

using namespace opineq;
using testing_support::lu_determinant;
using testing_support::random_hermitian;
using testing_support::random_matrix;

TEST(ComplexMatrix, ConstructionChecksShapeAndFiniteness) {
  EXPECT_THROW(ComplexMatrix(0, 2), ShapeError);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), ShapeError);
  EXPECT_THROW(ComplexMatrix(1, 1, {Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)}), NonFiniteError);
  EXPECT_THROW(ComplexMatrix(1, 1, {Complex(0.0, std::numeric_limits<double>::infinity())}), NonFiniteError);
  EXPECT_THROW((ComplexMatrix{{1, 2}, {3}}), ShapeError);
  const ComplexMatrix m{{1, 2}, {3, 4}};
  EXPECT_EQ(m(1, 0), Complex(3));
  EXPECT_TRUE(m.is_square());
}

TEST(ComplexMatrix, ArithmeticRejectsShapeMismatch) {
  const ComplexMatrix a(2, 3);
  const ComplexMatrix b(2, 2);
  EXPECT_THROW(a + b, ShapeError);
  EXPECT_THROW(a * a, ShapeError);
  EXPECT_NO_THROW(b * a);
  EXPECT_THROW(hermitian_eigen(a), ShapeError);
}

TEST(ComplexMatrix, AdjointAndCartesianParts) {
  const ComplexMatrix t{{Complex(1, 2), Complex(3, -1)}, {Complex(0, 4), Complex(-2, 0)}};
  const ComplexMatrix recon = real_part(t) + Complex(0, 1) * imag_part(t);
  EXPECT_LT((recon - t).max_abs(), 1e-15);
  EXPECT_EQ(hermitian_defect(real_part(t)), 0.0);
  EXPECT_EQ(hermitian_defect(imag_part(t)), 0.0);
  EXPECT_EQ(adjoint(adjoint(t)), t);
  EXPECT_EQ(adjoint(t)(0, 1), std::conj(t(1, 0)));
}

TEST(ToleranceConfig, RejectsNonPositive) {
  ToleranceConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.radius_tol = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.eig_tol = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(HermitianEigen, FrozenTwoByTwo) {
  const auto r = hermitian_eigen(ComplexMatrix{{13, 12}, {12, 13}});
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0], 25.0, 1e-12);
  EXPECT_NEAR(r.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.eigenvectors(0, 0)), std::sqrt(0.5), 1e-12);
}

TEST(HermitianEigen, DiagonalIsReturnedSorted) {
  const std::vector<double> d{-3.0, 7.0, 0.5, 2.0};
  const auto ev = hermitian_eigenvalues(ComplexMatrix::diagonal(d));
  EXPECT_EQ(ev, (std::vector<double>{7.0, 2.0, 0.5, -3.0}));
}

TEST(HermitianEigen, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_eigen(ComplexMatrix{{1, 2}, {0, 1}}), NotHermitianError);
  EXPECT_THROW(hermitian_eigenvalues(ComplexMatrix{{Complex(0, 1)}}), NotHermitianError);
}

TEST(HermitianEigen, RandomDecompositionInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const ComplexMatrix h = random_hermitian(rng, n);
    const auto r = hermitian_eigen(h);
    const auto& v = r.eigenvectors;
    const double scale = 1.0 + h.frobenius_norm();

    EXPECT_TRUE(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
    EXPECT_LT((adjoint(v) * v - ComplexMatrix::identity(n)).max_abs(), 1e-12);
    const ComplexMatrix lambda = ComplexMatrix::diagonal(r.eigenvalues);
    EXPECT_LT((v * lambda * adjoint(v) - h).max_abs(), 1e-11 * scale);

    // Trace and determinant against an LU factorization.
    double sum = 0.0;
    double prod = 1.0;
    for (double x : r.eigenvalues) {
      sum += x;
      prod *= x;
    }
    EXPECT_NEAR(sum, testing_support::trace(h).real(), 1e-11 * scale);
    const Complex det = lu_determinant(h);
    EXPECT_NEAR(prod, det.real(), 1e-10 * std::pow(scale, static_cast<double>(n)));

    const auto only = hermitian_eigenvalues(h);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(only[k], r.eigenvalues[k], 1e-11 * scale);
  }
}

TEST(HermitianEigen, RepeatedEigenvalues) {
  // Q diag(2, 2, -1, -1) Q* for a random unitary Q.
  std::mt19937_64 rng(5);
  const auto q = hermitian_eigen(random_hermitian(rng, 4)).eigenvectors;
  const std::vector<double> d{2.0, 2.0, -1.0, -1.0};
  const ComplexMatrix h = q * ComplexMatrix::diagonal(d) * adjoint(q);
  const auto ev = hermitian_eigenvalues(0.5 * (h + adjoint(h)));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(ev[k], d[k], 1e-12);
}

TEST(SingularValues, FrozenExample) {
  const auto s = singular_values(ComplexMatrix{{2, 3}, {-6, 1}});
  EXPECT_NEAR(s[0], std::sqrt(40.0), 1e-12);
  EXPECT_NEAR(s[1], std::sqrt(10.0), 1e-12);
}

TEST(SingularValues, RectangularAndUnitaryInvariant) {
  std::mt19937_64 rng(3);
  const ComplexMatrix a(2, 3, {1, Complex(0, 2), 3, 0, -1, Complex(1, 1)});
  const auto s = singular_values(a);
  ASSERT_EQ(s.size(), 2u);
  const auto st = singular_values(adjoint(a));
  EXPECT_NEAR(s[0], st[0], 1e-12);
  EXPECT_NEAR(s[1], st[1], 1e-12);
  double fro2 = 0.0;
  for (double x : s) fro2 += x * x;
  EXPECT_NEAR(fro2, a.frobenius_norm() * a.frobenius_norm(), 1e-12);

  const ComplexMatrix t = random_matrix(rng, 5);
  const auto u = hermitian_eigen(random_hermitian(rng, 5)).eigenvectors;
  const auto s1 = singular_values(t);
  const auto s2 = singular_values(u * t * adjoint(u));
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(s1[k], s2[k], 1e-11);
  EXPECT_NEAR(std::abs(lu_determinant(t)), s1[0] * s1[1] * s1[2] * s1[3] * s1[4], 1e-9);
}

TEST(OperatorNorm, FrozenPairMember) {
  const ComplexMatrix t1{{3, 3}, {-3, 2}};
  EXPECT_NEAR(operator_norm(t1), std::sqrt((31.0 + std::sqrt(61.0)) / 2.0), 1e-12);
  EXPECT_NEAR(operator_norm(ComplexMatrix::identity(3)), 1.0, 1e-15);
}

TEST(OperatorNorm, SubmultiplicativeAndDominatedByFrobenius) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const ComplexMatrix a = random_matrix(rng, n);
    const ComplexMatrix b = random_matrix(rng, n);
    const double na = operator_norm(a);
    EXPECT_LE(operator_norm(a * b), na * operator_norm(b) * (1 + 1e-12));
    EXPECT_LE(na, a.frobenius_norm() * (1 + 1e-12));
    EXPECT_GE(na * (1 + 1e-12), a.max_abs());
    EXPECT_NEAR(operator_norm(adjoint(a)), na, 1e-12 * (1 + na));
  }
}

TEST(AbsOperator, FrozenSquare) {
  const ComplexMatrix t{{-2, 1}, {0, -2}};
  const ComplexMatrix a = abs_operator(t);
  const ComplexMatrix expect{{4, -2}, {-2, 5}};
  EXPECT_LT((a * a - expect).max_abs(), 1e-12);
  EXPECT_EQ(hermitian_defect(a), 0.0);
  const auto ev = hermitian_eigenvalues(a);
  EXPECT_GE(ev.back(), 0.0);
}

TEST(AbsOperator, SingularInput) {
  const ComplexMatrix t{{1, 1}, {1, 1}};
  const ComplexMatrix a = abs_operator(t);
  EXPECT_LT((a - t).max_abs(), 1e-12);
}
