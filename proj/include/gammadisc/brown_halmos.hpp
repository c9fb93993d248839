#pragma once

// Brown–Halmos relations and commutants as joint kernels of linear matrix maps.

#include <vector>

#include "gammadisc/gamma.hpp"

namespace gammadisc {

/// HS-orthonormal basis of 𝒯(𝖲) (or of 𝒯(P)).
struct ToeplitzBasis {
  std::vector<CMatrix> basis;
  std::size_t dim() const { return basis.size(); }
};

/// HS-orthonormal basis of a commutant.
struct CommutantBasis {
  std::vector<CMatrix> basis;
  std::size_t dim() const { return basis.size(); }
};

/// A ↦ S_i*·A·P − A·S_{d−i} for i = 1 … d−1, then A ↦ P*·A·P − A.
inline std::vector<MatrixMapConstraint> brown_halmos_constraints(const GammaTuple& t) {
  const CMatrix id = identity(t.n);
  std::vector<MatrixMapConstraint> c;
  for (int i = 1; i < t.d; ++i)
    c.push_back({{t.s(i).adjoint(), t.P, +1}, {id, t.s(t.d - i), -1}});
  c.push_back({{t.P.adjoint(), t.P, +1}, {id, id, -1}});
  return c;
}

/// Largest Frobenius residual over the Brown–Halmos relations.
inline double brown_halmos_residual(const GammaTuple& t, const CMatrix& a) {
  double worst = 0.0;
  for (const auto& c : brown_halmos_constraints(t)) worst = std::max(worst, fro(c.apply(a)));
  return worst;
}

inline ToeplitzBasis toeplitz_space(const GammaTuple& t, double tol) {
  const auto c = brown_halmos_constraints(t);
  return {joint_kernel(c, t.n, tol)};
}

inline ToeplitzBasis toeplitz_space(const GammaTuple& t) { return toeplitz_space(t, default_kernel_tol(t.n)); }

/// Fixed points of A ↦ P*·A·P.
inline ToeplitzBasis toeplitz_space_p_only(const CMatrix& P, double tol) {
  require_square(P, "P");
  const CMatrix id = identity(P.rows());
  const std::vector<MatrixMapConstraint> c{{{P.adjoint(), P, +1}, {id, id, -1}}};
  return {joint_kernel(c, P.rows(), tol)};
}

inline ToeplitzBasis toeplitz_space_p_only(const CMatrix& P) {
  return toeplitz_space_p_only(P, default_kernel_tol(P.rows()));
}

/// Worst distance from A* to the span, over basis elements A.
inline double adjoint_closure_residual(const ToeplitzBasis& tb) {
  double worst = 0.0;
  for (const auto& a : tb.basis) {
    const CMatrix adj = a.adjoint();
    worst = std::max(worst, fro(adj - hs_project(tb.basis, adj)));
  }
  return worst;
}

inline CommutantBasis commutant(std::span<const CMatrix> members, double tol) {
  if (members.empty()) throw Error(ErrorKind::InvalidArgument, "commutant of an empty tuple");
  const auto n = members.front().rows();
  std::vector<MatrixMapConstraint> c;
  const CMatrix id = identity(n);
  for (const auto& m : members) {
    if (m.rows() != n || m.cols() != n)
      throw Error(ErrorKind::DimensionMismatch, "commutant members must share one square shape");
    c.push_back({{m, id, +1}, {id, m, -1}});
  }
  return {joint_kernel(c, n, tol)};
}

inline CommutantBasis commutant(std::span<const CMatrix> members) {
  return commutant(members, default_kernel_tol(members.front().rows()));
}

/// max over members M of ‖X·M − M·X‖_F / ((1+‖X‖)(1+‖M‖)).
inline double commutant_residual(const CMatrix& x, std::span<const CMatrix> members) {
  const double nx = op_norm(x);
  double worst = 0.0;
  for (const auto& m : members)
    worst = std::max(worst, fro(commutator(x, m)) / ((1.0 + nx) * (1.0 + op_norm(m))));
  return worst;
}

/// Random element of the span of an HS-orthonormal basis, complex Gaussian coordinates.
inline CMatrix random_combination(std::span<const CMatrix> basis, Eigen::Index rows, Eigen::Index cols,
                                  std::mt19937_64& rng) {
  CMatrix out = CMatrix::Zero(rows, cols);
  if (basis.empty()) return out;
  const CMatrix coeff = random_ginibre(static_cast<Eigen::Index>(basis.size()), 1, rng);
  for (std::size_t k = 0; k < basis.size(); ++k) out += coeff(static_cast<Eigen::Index>(k), 0) * basis[k];
  return out;
}

}  // namespace gammadisc
