#pragma once

// Commutant lifting into the canonical unitary extension, and the intertwining
// corollary via the 2×2 operator-matrix trick.

#include "gammadisc/dilation.hpp"
#include "gammadisc/toeplitz.hpp"

namespace gammadisc {

struct LiftResult {
  CMatrix Y;
  double norm_X = 0.0;
  double norm_Y = 0.0;
  double intertwine_residual = 0.0;  // ‖Y·J − J·X‖_F (‖Y·J − J'·X‖_F for intertwiners)
  double commutant_residual = 0.0;   // scale-free, against (R, U) (or R ⊕ R')
};

namespace detail {

inline CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix z = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  z.topLeftCorner(a.rows(), a.cols()) = a;
  z.bottomRightCorner(b.rows(), b.cols()) = b;
  return z;
}

}  // namespace detail

/// Extension of the direct-sum module, assembled blockwise.
inline CanonicalExtension direct_sum(const CanonicalExtension& a, const CanonicalExtension& b) {
  CanonicalExtension e;
  e.r = a.r + b.r;
  e.B = detail::block_diag(a.B, b.B);
  e.J = detail::block_diag(a.J, b.J);
  for (std::size_t i = 0; i < a.R.size(); ++i) e.R.push_back(detail::block_diag(a.R[i], b.R[i]));
  e.U = detail::block_diag(a.U, b.U);
  e.Qhalf = detail::block_diag(a.Qhalf, b.Qhalf);
  e.Q = detail::block_diag(a.Q, b.Q);
  e.source = direct_sum(a.source, b.source);
  e.intertwine_residual = std::max(a.intertwine_residual, b.intertwine_residual);
  return e;
}

/// Y on Ran Q with Y·J = J·X; on a minimal finite-dimensional extension this is X̃ itself.
inline LiftResult lift_commutant(const CanonicalExtension& ext, const CMatrix& x, double tol = 1e-8) {
  const auto& t = ext.source;
  if (x.rows() != t.n || x.cols() != t.n) throw Error(ErrorKind::DimensionMismatch, "X must be n×n");
  const auto sm = t.members();
  const double cres = commutant_residual(x, sm);
  if (cres > tol) throw Error(ErrorKind::NotInCommutant, "X misses {S, P}' by " + std::to_string(cres));

  LiftResult out;
  const CMatrix jx = ext.J * x;
  out.Y = jx * pinv(ext.J, default_rank_tol(t.n) * 16.0);
  out.norm_X = op_norm(x);
  out.norm_Y = op_norm(out.Y);
  out.intertwine_residual = fro(out.Y * ext.J - jx);
  const auto rm = ext.members();
  out.commutant_residual = commutant_residual(out.Y, rm);
  const double scale = (1.0 + out.norm_X) * (1.0 + t.max_norm());
  if (out.intertwine_residual > tol * scale || out.commutant_residual > tol)
    throw Error(ErrorKind::Inconsistent, "lift is ill-defined (residuals " + std::to_string(out.intertwine_residual) +
                                             ", " + std::to_string(out.commutant_residual) + ")");
  return out;
}

/// Y: 𝒦 → 𝒦' with Y·J = J'·X intertwining (R, U) and (R', U').
inline LiftResult lift_intertwiner(const CanonicalExtension& ext, const CanonicalExtension& ext2, const CMatrix& x,
                                   double tol = 1e-8) {
  const auto& t1 = ext.source;
  const auto& t2 = ext2.source;
  if (t1.d != t2.d) throw Error(ErrorKind::DimensionMismatch, "modules have different d");
  if (x.rows() != t2.n || x.cols() != t1.n) throw Error(ErrorKind::DimensionMismatch, "X must be n'×n");
  const double nx = op_norm(x);
  const double scale = (1.0 + nx) * (1.0 + std::max(t1.max_norm(), t2.max_norm()));
  double worst = fro(x * t1.P - t2.P * x);
  for (int i = 1; i < t1.d; ++i) worst = std::max(worst, fro(x * t1.s(i) - t2.s(i) * x));
  if (worst > tol * scale)
    throw Error(ErrorKind::NotIntertwining, "X does not intertwine (residual " + std::to_string(worst) + ")");

  const auto sum = direct_sum(ext, ext2);
  CMatrix xhat = CMatrix::Zero(t1.n + t2.n, t1.n + t2.n);
  xhat.bottomLeftCorner(t2.n, t1.n) = x;
  const auto big = lift_commutant(sum, xhat, tol);

  LiftResult out;
  out.Y = big.Y.bottomLeftCorner(ext2.r, ext.r);
  out.norm_X = nx;
  out.norm_Y = op_norm(out.Y);
  out.intertwine_residual = fro(out.Y * ext.J - ext2.J * x);
  out.commutant_residual = big.commutant_residual;
  return out;
}

}  // namespace gammadisc
