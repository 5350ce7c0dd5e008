// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace sf = spinframe;
using sf::CMatrix;
using sf::Matrix;

namespace {

CMatrix identity(int k) { return CMatrix::Identity(k, k); }

// Anticommutator defect by explicit products, independent of GammaRep::anticommutator_defect.
double clifford_defect(const sf::GammaRep& rep) {
  const int m = rep.dim();
  double worst = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      CMatrix lhs = rep.gammas[a] * rep.gammas[b] + rep.gammas[b] * rep.gammas[a];
      CMatrix rhs = CMatrix::Zero(rep.k, rep.k);
      if (a == b) rhs = 2.0 * (a < rep.signature.plus ? 1.0 : -1.0) * identity(rep.k);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

Matrix random_theta(int m, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix t = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      t(a, b) = u(rng);
      t(b, a) = -t(a, b);
    }
  return t;
}

// Conjugation S⁻¹ γ^a S rebuilt from L, compared entrywise.
double conjugation_residual(const sf::GammaRep& rep, const CMatrix& s, const Matrix& l) {
  const CMatrix si = s.inverse();
  double worst = 0;
  for (int a = 0; a < rep.dim(); ++a) {
    CMatrix rebuilt = CMatrix::Zero(rep.k, rep.k);
    for (int c = 0; c < rep.dim(); ++c) rebuilt += l(a, c) * rep.gammas[c];
    worst = std::max(worst, (si * rep.gammas[a] * s - rebuilt).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST(Eta, PlusBlockComesFirst) {
  EXPECT_EQ(sf::build_eta({2, 0}), Matrix::Identity(2, 2));
  Matrix e11(2, 2);
  e11 << 1, 0, 0, -1;
  EXPECT_EQ(sf::build_eta({1, 1}), e11);
  Matrix e21 = Matrix::Zero(3, 3);
  e21.diagonal() << 1, 1, -1;
  EXPECT_EQ(sf::build_eta({2, 1}), e21);
}

TEST(Signature, RejectsInvalidCounts) {
  EXPECT_THROW(sf::Signature(-1, 2), std::invalid_argument);
  EXPECT_THROW(sf::Signature(0, 0), std::invalid_argument);
  EXPECT_NO_THROW(sf::Signature(0, 1));
}

TEST(Gamma, EuclideanPlaneAnticommutes) {
  const auto rep = sf::build_gamma({2, 0});
  ASSERT_EQ(rep.k, 2);
  EXPECT_LT((rep.gammas[0] * rep.gammas[0] - identity(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((rep.gammas[1] * rep.gammas[1] - identity(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((rep.gammas[0] * rep.gammas[1] + rep.gammas[1] * rep.gammas[0]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gamma, LorentzPlaneSquares) {
  const auto rep = sf::build_gamma({1, 1});
  ASSERT_EQ(rep.k, 2);
  EXPECT_LT((rep.gammas[0] * rep.gammas[0] - identity(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((rep.gammas[1] * rep.gammas[1] + identity(2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((rep.gammas[0] * rep.gammas[1] + rep.gammas[1] * rep.gammas[0]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gamma, CliffordRelationUpToDimensionSix) {
  for (const auto& sig : spinframe::testing::all_signatures(6)) {
    const auto rep = sf::build_gamma(sig);
    EXPECT_EQ(rep.k, 1 << (sig.dim() / 2)) << sig.plus << "," << sig.minus;
    EXPECT_LT(clifford_defect(rep), 1e-13) << sig.plus << "," << sig.minus;
    EXPECT_LT(rep.anticommutator_defect(), 1e-13);
  }
}

TEST(Gamma, FourDimensionalLorentz) {
  const auto rep = sf::build_gamma({3, 1});
  EXPECT_EQ(rep.k, 4);
  EXPECT_EQ(rep.gammas.size(), 4u);
  EXPECT_LT(clifford_defect(rep), 1e-14);
}

TEST(Gamma, Deterministic) {
  const auto a = sf::build_gamma({3, 2});
  const auto b = sf::build_gamma({3, 2});
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(a.gammas[i] == b.gammas[i]);
}

TEST(Gamma, DimensionGuard) {
  EXPECT_THROW(sf::build_gamma({13, 0}), std::invalid_argument);
  EXPECT_THROW(sf::build_gamma({7, 6}), std::invalid_argument);
  const auto rep = sf::build_gamma({6, 6});
  EXPECT_EQ(rep.k, 64);
}

TEST(SpinExp, ZeroIsIdentity) {
  const auto rep = sf::build_gamma({3, 1});
  const auto s = sf::spin_exp(rep, Matrix::Zero(4, 4));
  EXPECT_LT((s.matrix() - identity(4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SpinExp, HalfTurnSquaresToMinusOne) {
  const auto rep = sf::build_gamma({2, 0});
  Matrix th = Matrix::Zero(2, 2);
  th(0, 1) = std::numbers::pi;
  th(1, 0) = -std::numbers::pi;
  const auto s = sf::spin_exp(rep, th);
  // exp((π/2) γ¹γ²) = γ¹γ² since (γ¹γ²)² = −1
  EXPECT_LT((s.matrix() - rep.gammas[0] * rep.gammas[1]).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((s.matrix() * s.matrix() + identity(2)).cwiseAbs().maxCoeff(), 1e-13);
  const Matrix l = sf::covering_map(rep, s);
  EXPECT_LT((l + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);  // rotation by π
  EXPECT_LT(conjugation_residual(rep, s.matrix(), l), 1e-13);
}

TEST(SpinExp, InverseElement) {
  std::mt19937_64 rng(5);
  for (const auto& sig : spinframe::testing::all_signatures(5)) {
    const auto rep = sf::build_gamma(sig);
    const Matrix th = random_theta(sig.dim(), rng, 1.0);
    const auto s = sf::spin_exp(rep, th) * sf::spin_exp(rep, Matrix(-th));
    EXPECT_LT((s.matrix() - identity(rep.k)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SpinExp, RejectsSymmetricParameters) {
  const auto rep = sf::build_gamma({2, 0});
  Matrix th = Matrix::Zero(2, 2);
  th(0, 1) = 1.0;
  EXPECT_THROW(sf::spin_exp(rep, th), std::invalid_argument);
}

TEST(CoveringMap, IdentityAndKernel) {
  const auto rep = sf::build_gamma({3, 1});
  const auto one = sf::spin_exp(rep, Matrix::Zero(4, 4));
  EXPECT_LT((sf::covering_map(rep, one) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((sf::covering_map(rep, -one) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CoveringMap, QuarterTurnIsPlanarRotation) {
  const auto rep = sf::build_gamma({2, 0});
  Matrix th = Matrix::Zero(2, 2);
  th(0, 1) = std::numbers::pi / 2;
  th(1, 0) = -th(0, 1);
  const auto s = sf::spin_exp(rep, th);
  const Matrix l = sf::covering_map(rep, s);
  EXPECT_LT(conjugation_residual(rep, s.matrix(), l), 1e-13);
  EXPECT_NEAR(l(0, 0), 0.0, 1e-13);
  EXPECT_NEAR(l(1, 1), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(l(0, 1)), 1.0, 1e-13);
  EXPECT_NEAR(l(0, 1), -l(1, 0), 1e-13);
  EXPECT_NEAR(l.determinant(), 1.0, 1e-13);
}

TEST(CoveringMap, HomomorphismOrthogonalityAndKernel) {
  std::mt19937_64 rng(17);
  for (const auto& sig : spinframe::testing::all_signatures(6)) {
    const auto rep = sf::build_gamma(sig);
    const Matrix eta = sf::build_eta(sig);
    for (int trial = 0; trial < 3; ++trial) {
      const auto s1 = sf::spin_exp(rep, random_theta(sig.dim(), rng, 0.8));
      const auto s2 = sf::spin_exp(rep, random_theta(sig.dim(), rng, 0.8));
      const Matrix l1 = sf::covering_map(rep, s1);
      const Matrix l2 = sf::covering_map(rep, s2);
      EXPECT_LT((sf::covering_map(rep, s1 * s2) - l1 * l2).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((l1.transpose() * eta * l1 - eta).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_TRUE(sf::covering_map(rep, -s1) == l1) << "two-to-one must hold bitwise";
      EXPECT_LT(conjugation_residual(rep, s1.matrix(), l1), 1e-10);
    }
  }
}

TEST(CoveringMap, RejectsMatricesOutsideTheSpinGroup) {
  const auto rep = sf::build_gamma({2, 0});
  CMatrix s(2, 2);
  s << 1.0, 0.3, 0.0, 2.0;
  EXPECT_THROW(sf::covering_map(rep, s), sf::GeometryError);
}

TEST(MatrixExp, MatchesClosedFormRotation) {
  CMatrix a(2, 2);
  a << 0.0, -3.0, 3.0, 0.0;
  const CMatrix e = sf::matrix_exp(a);
  EXPECT_NEAR(e(0, 0).real(), std::cos(3.0), 1e-14);
  EXPECT_NEAR(e(1, 0).real(), std::sin(3.0), 1e-14);
}
