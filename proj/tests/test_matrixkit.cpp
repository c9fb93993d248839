#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace gammadisc {
namespace {

using testing::diag;

TEST(PsdSqrt, IdentityIsFixed) {
  EXPECT_LT(fro(psd_sqrt(identity(3)) - identity(3)), 1e-14);
}

TEST(PsdSqrt, DiagonalEntries) {
  EXPECT_LT(fro(psd_sqrt(diag({4.0, 0.0})) - diag({2.0, 0.0})), 1e-14);
}

TEST(PsdSqrt, SquaresBackToGram) {
  std::mt19937_64 rng(11);
  const CMatrix m = testing::random_psd(5, rng);
  const CMatrix r = psd_sqrt(m);
  EXPECT_LT(fro(r * r - m), 1e-10);
  EXPECT_LT(fro(r - r.adjoint()), 1e-12);
  EXPECT_GE(min_eigenvalue(r), -1e-12);
}

TEST(PsdSqrt, ClampsTinyNegativeEigenvalues) {
  const CMatrix r = psd_sqrt(diag({1.0, -1e-12}), 1e-10);
  EXPECT_LT(fro(r - diag({1.0, 0.0})), 1e-14);
}

TEST(PsdSqrt, Errors) {
  try {
    psd_sqrt(testing::mat2(1.0, 1.0, 0.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  try {
    psd_sqrt(diag({1.0, -0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeEigenvalue);
  }
}

TEST(PsdSqrt, RandomizedSquareProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(rng);
    CMatrix m = testing::random_psd(n, rng);
    if (trial % 3 == 0) m = testing::random_rank(n, n, std::max(1, n / 2), rng), m = m * m.adjoint();
    const CMatrix r = psd_sqrt(m);
    EXPECT_LE(fro(r * r - m), 1e-9 * std::max(1.0, op_norm(m))) << "trial " << trial << " n=" << n;
  }
}

TEST(Pinv, InvertibleMatrix) {
  std::mt19937_64 rng(3);
  const CMatrix m = random_ginibre(4, 4, rng) + 4.0 * identity(4);
  EXPECT_LT(op_norm(pinv(m) * m - identity(4)), 1e-10);
}

TEST(Pinv, ZeroMatrix) {
  EXPECT_EQ(fro(pinv(CMatrix::Zero(3, 2))), 0.0);
  EXPECT_EQ(pinv(CMatrix::Zero(3, 2)).rows(), 2);
}

TEST(Pinv, RankOneProjection) {
  std::mt19937_64 rng(4);
  CVector u = random_ginibre(4, 1, rng).col(0);
  u.normalize();
  const CMatrix p = u * u.adjoint();
  const CMatrix pi = pinv(p);
  EXPECT_LT(fro(pi - p), 1e-12);
  EXPECT_LT(fro(p * pi * p - p), 1e-12);
  EXPECT_LT(fro(pi * p * pi - pi), 1e-12);
}

TEST(Pinv, RejectsNegativeTolerance) {
  EXPECT_THROW(pinv(identity(2), -1.0), Error);
}

TEST(Pinv, PenroseIdentitiesRandomized) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = dim(rng), c = dim(rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(r, c))(rng);
    const CMatrix a = testing::random_rank(r, c, k, rng);
    const CMatrix x = pinv(a);
    const double sa = 1.0 + fro(a), sx = 1.0 + fro(x);
    EXPECT_LE(fro(a * x * a - a), 1e-9 * sa * sa * sx);
    EXPECT_LE(fro(x * a * x - x), 1e-9 * sx * sx * sa);
    EXPECT_LE(fro((a * x).adjoint() - a * x), 1e-9 * sa * sx);
    EXPECT_LE(fro((x * a).adjoint() - x * a), 1e-9 * sa * sx);
  }
}

TEST(Vectorization, KroneckerIdentity) {
  std::mt19937_64 rng(5);
  const CMatrix l = random_ginibre(3, 2, rng), a = random_ginibre(2, 4, rng), r = random_ginibre(4, 3, rng);
  const MatrixMapConstraint c{{l, r, +1}};
  EXPECT_LT((c.matricize() * vec(a) - vec(l * a * r)).norm(), 1e-12);
  EXPECT_LT(fro(unvec(vec(a), 2, 4) - a), 0.0 + 1e-300);
}

TEST(JointKernel, ZeroMapKeepsEverything) {
  const CMatrix id = identity(2);
  const std::vector<MatrixMapConstraint> c{{{id, id, +1}, {id, id, -1}}};
  EXPECT_EQ(joint_kernel(c, 2).size(), 4u);
}

TEST(JointKernel, InjectiveMapHasTrivialKernel) {
  const CMatrix id = identity(2);
  const std::vector<MatrixMapConstraint> c{{{id, id, +1}}};
  EXPECT_TRUE(joint_kernel(c, 2).empty());
}

TEST(JointKernel, CommutantOfDistinctDiagonal) {
  const CMatrix dg = diag({1.0, 2.0});
  const CMatrix id = identity(2);
  const std::vector<MatrixMapConstraint> c{{{dg, id, +1}, {id, dg, -1}}};
  const auto basis = joint_kernel(c, 2);
  ASSERT_EQ(basis.size(), 2u);
  // Hand solution: DA − AD = [[0, −a12], [a21, 0]], so the kernel is the diagonal matrices.
  for (const auto& b : basis) {
    EXPECT_LT(std::abs(b(0, 1)) + std::abs(b(1, 0)), 1e-12);
  }
  const CMatrix g = hs_gram(basis);
  EXPECT_LT(fro(g - identity(2)), 1e-10);
  EXPECT_EQ(numerical_rank(stack_vecs(basis), 1e-10), 2);
}

TEST(JointKernel, ShapeMismatch) {
  const std::vector<MatrixMapConstraint> c{{{identity(3), identity(3), +1}}};
  try {
    joint_kernel(c, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(JointKernel, RandomizedOrthonormalAndAnnihilated) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    // Commutant of a matrix with a planted repeated eigenvalue block, so the kernel is non-trivial.
    const CMatrix w = haar_unitary(n, rng);
    CMatrix dg = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) dg(k, k) = static_cast<double>(k / 2);
    const CMatrix m = w * dg * w.adjoint();
    const std::vector<MatrixMapConstraint> c{{{m, identity(n), +1}, {identity(n), m, -1}}};
    const double tol = default_kernel_tol(n);
    const auto basis = joint_kernel(c, n, tol);
    EXPECT_GE(static_cast<int>(basis.size()), n);
    EXPECT_LT(fro(hs_gram(basis) - identity(static_cast<Eigen::Index>(basis.size()))), 1e-10);
    for (const auto& b : basis) EXPECT_LT(fro(c[0].apply(b)), 10.0 * tol * fro(b) * (1.0 + op_norm(m)));
  }
}

TEST(PolyRoots, QuadraticFormula) {
  const std::vector<Complex> c{-3.0, 1.0};
  EXPECT_NEAR(poly_roots_max_modulus(c), (3.0 + std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(PolyRoots, AllZero) {
  const std::vector<Complex> c{0.0, 0.0, 0.0};
  EXPECT_EQ(poly_roots_max_modulus(c), 0.0);
}

TEST(PolyRoots, DoubleRootAtOne) {
  const std::vector<Complex> c{-2.0, 1.0};
  EXPECT_NEAR(poly_roots_max_modulus(c), 1.0, 1e-13);
}

TEST(PolyRoots, TripleUnimodularRoot) {
  // (z − i)³ = z³ − 3i z² − 3 z + i.
  const std::vector<Complex> c{Complex(0, -3), -3.0, Complex(0, 1)};
  EXPECT_NEAR(poly_roots_max_modulus(c), 1.0, 1e-12);
}

TEST(PolyRoots, EmptyCoefficients) {
  try {
    poly_roots_max_modulus(std::vector<Complex>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyCoefficients);
  }
}

TEST(PolyRoots, RandomizedAgainstPlantedRoots) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<Complex> roots;
    double mx = 0.0;
    for (int k = 0; k < d; ++k) {
      roots.emplace_back(1.5 * u(rng), 1.5 * u(rng));
      mx = std::max(mx, std::abs(roots.back()));
    }
    // Expand Π(z − r_k) independently of the solver.
    std::vector<Complex> poly{1.0};
    for (const auto& r : roots) {
      std::vector<Complex> next(poly.size() + 1, 0.0);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k];
        next[k + 1] -= r * poly[k];
      }
      poly = next;
    }
    const std::vector<Complex> c(poly.begin() + 1, poly.end());
    EXPECT_NEAR(poly_roots_max_modulus(c), mx, 1e-6) << "trial " << trial;
  }
}

TEST(Hermitian, ToleranceIsRelative) {
  CMatrix m = 1e6 * identity(2);
  m(0, 1) = 1e-4;
  EXPECT_TRUE(is_hermitian(m, 1e-9));
  EXPECT_FALSE(is_hermitian(m, 1e-12));
}

TEST(HaarUnitary, IsUnitaryAndSeeded) {
  std::mt19937_64 a(1), b(1);
  const CMatrix u = haar_unitary(5, a);
  EXPECT_LT(unitarity_residual(u), 1e-12);
  EXPECT_EQ(u, haar_unitary(5, b));
}

}  // namespace
}  // namespace gammadisc
