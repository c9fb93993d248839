#include <gtest/gtest.h>

#include "gammadisc/suites.hpp"
#include "support.hpp"

namespace gammadisc {
namespace {

TEST(LiftCommutant, IdentityAndScalars) {
  const auto t = random_gamma_tuple(3, 5, GeneratorKind::MixedPurity, 1);
  const auto e = canonical_extension(t);
  const auto one = lift_commutant(e, identity(5));
  EXPECT_LT(fro(one.Y - identity(e.r)), 1e-10);
  EXPECT_NEAR(one.norm_X, 1.0, 1e-12);
  EXPECT_NEAR(one.norm_Y, 1.0, 1e-10);
  const Complex lam(0.3, -1.2);
  EXPECT_LT(fro(lift_commutant(e, lam * identity(5)).Y - lam * identity(e.r)), 1e-10);
}

TEST(LiftCommutant, PolynomialLiftsToPolynomial) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_gamma_tuple(2, 4, GeneratorKind::MixedPurity, seed);
    const auto e = canonical_extension(t);
    const CMatrix xs = t.s(1) * t.s(1) - t.P + 0.25 * t.s(1) * t.P;
    const CMatrix yr = e.R[0] * e.R[0] - e.U + 0.25 * e.R[0] * e.U;
    const auto lr = lift_commutant(e, xs);
    EXPECT_LT(fro(lr.Y - yr), 1e-9);
    EXPECT_LE(lr.norm_Y, lr.norm_X + 1e-9 * (1.0 + lr.norm_X));
  }
}

TEST(LiftCommutant, RejectsNonCommuting) {
  const auto t = random_gamma_tuple(2, 3, GeneratorKind::MixedPurity, 2);
  const auto e = canonical_extension(t);
  std::mt19937_64 rng(1);
  try {
    lift_commutant(e, random_ginibre(3, 3, rng));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotInCommutant);
  }
}

TEST(LiftCommutant, RandomizedInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const auto t = random_gamma_tuple(d, 5, seed % 2 ? GeneratorKind::MixedPurity : GeneratorKind::NormalBoundary, seed);
    const auto e = canonical_extension(t);
    const auto cs = commutant(t.members());
    const auto cb = extension_commutant(e);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 100; ++k) {
      const CMatrix x = random_combination(cs.basis, 5, 5, rng);
      const auto lr = lift_commutant(e, x);
      EXPECT_LE(lr.norm_Y, lr.norm_X + 1e-9 * (1.0 + lr.norm_X));
      EXPECT_LT(lr.intertwine_residual, 1e-8 * (1.0 + lr.norm_X));
      EXPECT_LT(lr.commutant_residual, 1e-8);
      if (k < 10) EXPECT_LT(fro(lr.Y - theta(e, cb, x)), 1e-8 * (1.0 + lr.norm_X));
    }
    const CMatrix x1 = random_combination(cs.basis, 5, 5, rng), x2 = random_combination(cs.basis, 5, 5, rng);
    const CMatrix y1 = lift_commutant(e, x1).Y, y2 = lift_commutant(e, x2).Y;
    EXPECT_LT(fro(lift_commutant(e, x1 * x2).Y - y1 * y2), 1e-7 * (1.0 + fro(y1 * y2)));
  }
}

TEST(LiftIntertwiner, SelfIdentityAndZero) {
  const auto t = random_gamma_tuple(3, 4, GeneratorKind::MixedPurity, 3);
  const auto e = canonical_extension(t);
  EXPECT_LT(fro(lift_intertwiner(e, e, identity(4)).Y - identity(e.r)), 1e-9);
  EXPECT_LT(fro(lift_intertwiner(e, e, CMatrix::Zero(4, 4)).Y), 1e-12);
}

TEST(LiftIntertwiner, RotatedCopy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_gamma_tuple(3, 5, GeneratorKind::MixedPurity, seed);
    std::mt19937_64 rng(seed);
    const CMatrix w = haar_unitary(5, rng);
    const auto e1 = canonical_extension(t);
    const auto e2 = canonical_extension(conjugate(t, w));
    const auto lr = lift_intertwiner(e1, e2, w);
    EXPECT_NEAR(lr.norm_Y, 1.0, 1e-9);
    EXPECT_LT(fro(lr.Y * e1.J - e2.J * w), 1e-9);
    EXPECT_LT(fro(lr.Y * e1.U - e2.U * lr.Y), 1e-9);
    for (std::size_t i = 0; i < e1.R.size(); ++i) EXPECT_LT(fro(lr.Y * e1.R[i] - e2.R[i] * lr.Y), 1e-9);
  }
}

TEST(LiftIntertwiner, BetweenDifferentModules) {
  // X maps a module into a direct sum containing it, so it intertwines without being unitary.
  const auto a = random_gamma_tuple(2, 3, GeneratorKind::MixedPurity, 4);
  const auto b = random_gamma_tuple(2, 2, GeneratorKind::NormalBoundary, 5);
  const auto sum = direct_sum(a, b);
  CMatrix x = CMatrix::Zero(5, 3);
  x.topRows(3) = 0.7 * identity(3);
  const auto e1 = canonical_extension(a), e2 = canonical_extension(sum);
  const auto lr = lift_intertwiner(e1, e2, x);
  EXPECT_LE(lr.norm_Y, lr.norm_X + 1e-9);
  EXPECT_LT(lr.intertwine_residual, 1e-9);
  EXPECT_LT(fro(lr.Y * e1.U - e2.U * lr.Y), 1e-9);
}

TEST(LiftIntertwiner, RejectsNonIntertwining) {
  const auto t = random_gamma_tuple(2, 3, GeneratorKind::MixedPurity, 6);
  const auto e = canonical_extension(t);
  std::mt19937_64 rng(2);
  try {
    lift_intertwiner(e, e, random_ginibre(3, 3, rng));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotIntertwining);
  }
}

TEST(Suites, LiftingDecayFundamentalProjectionPass) {
  for (const auto k : testing::all_kinds()) {
    const int d = k == GeneratorKind::Ando2 ? 2 : 3;
    const auto t = random_gamma_tuple(d, 4, k, 12);
    EXPECT_TRUE(verify_lifting(t).passed()) << to_string(k);
    EXPECT_TRUE(verify_decay(t).passed()) << to_string(k);
    EXPECT_TRUE(verify_fundamental(t).passed()) << to_string(k);
    EXPECT_TRUE(verify_projection(t).passed()) << to_string(k);
  }
}

}  // namespace
}  // namespace gammadisc
