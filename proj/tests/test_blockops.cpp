// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"

using namespace opineq;
using testing_support::random_matrix;

TEST(OffdiagBlock, Layout) {
  const ComplexMatrix t1{{1, 2}, {3, 4}};
  const ComplexMatrix t2{{Complex(0, 1), 5}, {6, 7}};
  const ComplexMatrix b = offdiag_block(t1, t2);
  ASSERT_EQ(b.rows(), 4u);
  EXPECT_EQ(b(0, 2), Complex(1));
  EXPECT_EQ(b(1, 3), Complex(4));
  EXPECT_EQ(b(2, 0), Complex(0, -1));
  EXPECT_EQ(b(2, 1), Complex(6));
  EXPECT_EQ(b(3, 0), Complex(5));
  EXPECT_EQ(b(0, 0), Complex(0));
  EXPECT_EQ(b(3, 3), Complex(0));
}

TEST(OffdiagBlock, RejectsMismatchedBlocks) {
  EXPECT_THROW(offdiag_block(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), ShapeError);
  EXPECT_THROW(offdiag_block(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), ShapeError);
  EXPECT_THROW(sup_theta_norm(ComplexMatrix(2, 2), ComplexMatrix(3, 3)), ShapeError);
}

TEST(OffdiagBlock, EqualBlocksGiveNormOfBlock) {
  // w([[O, T], [T*, O]]) = ||T||.
  std::mt19937_64 rng(12);
  const ComplexMatrix t = random_matrix(rng, 3);
  const auto r = numerical_radius(offdiag_block(t, t));
  EXPECT_NEAR(r.lower, operator_norm(t), 1e-10);
}

TEST(SupThetaNorm, BruteForceGrid) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const ComplexMatrix t1 = random_matrix(rng, n);
    const ComplexMatrix t2 = random_matrix(rng, n);
    const auto r = sup_theta_norm(t1, t2);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.width(), 1e-8 * (1 + r.lower));
    double grid = 0.0;
    for (int k = 0; k < 4000; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 4000;
      grid = std::max(grid, operator_norm(t1 + std::polar(1.0, th) * t2));
    }
    EXPECT_LE(grid, r.upper * (1 + 1e-12));
    EXPECT_GE(grid, r.lower - 1e-4 * (1 + r.lower));
    EXPECT_NEAR(operator_norm(t1 + std::polar(1.0, r.theta_star) * t2), r.lower, 1e-9 * (1 + r.lower));
  }
}

TEST(SupThetaNorm, ConstantWhenCrossTermVanishes) {
  // T1*T2 = 0: the norm does not depend on theta.
  const ComplexMatrix t1{{1, 0}, {0, 0}};
  const ComplexMatrix t2{{0, 0}, {0, 2}};
  const auto r = sup_theta_norm(t1, t2);
  EXPECT_NEAR(r.lower, 2.0, 1e-12);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(BlockIdentity, FrozenPair) {
  const ComplexMatrix t1{{-2, 0}, {0, 1}};
  const ComplexMatrix t2{{-1, 1}, {-2, 2}};
  const auto rep = block_identity_check(t1, t2);
  EXPECT_TRUE(rep.agree);
  EXPECT_NEAR(rep.omega_block.lower * rep.omega_block.lower, 5.15604, 5e-6);
}

TEST(BlockIdentity, RandomPairsAgree) {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto rep = block_identity_check(random_matrix(rng, n), random_matrix(rng, n));
    EXPECT_TRUE(rep.agree) << rep.omega_block.lower << " vs " << rep.half_sup.lower;
    EXPECT_NEAR(rep.omega_block.lower, rep.half_sup.lower, 1e-7 * (1 + rep.omega_block.lower));
  }
}
