#pragma once

// The asymptotic limit Q = lim P^{*n}P^n, purity, the decay of the
// Brown–Halmos defect along powers of P, and the fundamental operators.

#include <limits>
#include <vector>

#include "gammadisc/gamma.hpp"

namespace gammadisc {

inline constexpr double kConvTol = 1e-12;
inline constexpr int kMaxDoublings = 60;
inline constexpr double kPurityTol = 1e-8;

struct AsymptoticLimit {
  CMatrix Q;
  int iterations = 0;
  double residual = 0.0;  // ‖M_final − M_prev‖_F
  // Smallest eigenvalue of M_k − M_{k+1} over all doubling steps; the chain is
  // ⪰-decreasing, so this stays above −(rounding).
  double monotone_min = 0.0;
};

/// Power doubling B_{k+1} = B_k², M_k = B_k*B_k, until successive M differ by less
/// than conv_tol in Frobenius norm.
inline AsymptoticLimit compute_q(const CMatrix& P, double conv_tol = kConvTol, int max_doublings = kMaxDoublings) {
  require_finite(P, "P");
  require_square(P, "P");
  AsymptoticLimit out;
  CMatrix b = P;
  CMatrix m = hermitian_part(b.adjoint() * b);
  out.monotone_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_doublings; ++k) {
    b = (b * b).eval();
    CMatrix next = hermitian_part(b.adjoint() * b);
    if (!all_finite(next))
      throw Error(ErrorKind::NoConvergence, "powers of P diverged (‖P‖ > 1?)");
    out.residual = fro(next - m);
    out.monotone_min = std::min(out.monotone_min, min_eigenvalue(m - next));
    m = std::move(next);
    out.iterations = k + 1;
    if (out.residual < conv_tol) {
      out.Q = std::move(m);
      return out;
    }
  }
  throw Error(ErrorKind::NoConvergence, "residual " + std::to_string(out.residual) + " after " +
                                            std::to_string(max_doublings) + " doublings");
}

inline AsymptoticLimit compute_q(const GammaTuple& t, double conv_tol = kConvTol,
                                 int max_doublings = kMaxDoublings) {
  return compute_q(t.P, conv_tol, max_doublings);
}

/// λ_max(Q) ≤ tol, i.e. Pⁿ → 0.
inline bool is_pure(const GammaTuple& t, double tol = kPurityTol) {
  return max_eigenvalue(compute_q(t).Q) <= tol;
}

/// ‖P^{*j}(S_{d−i} − S_i*·P)·P^j‖ for j = 0 … j_max.
inline std::vector<double> decay_profile(const GammaTuple& t, int i, int j_max) {
  if (i < 1 || i > t.d - 1)
    throw Error(ErrorKind::IndexOutOfRange, "index i must lie in 1 … d−1");
  if (j_max < 0) throw Error(ErrorKind::IndexOutOfRange, "j_max must be non-negative");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(j_max) + 1);
  CMatrix x = t.s(t.d - i) - t.s(i).adjoint() * t.P;
  for (int j = 0; j <= j_max; ++j) {
    out.push_back(op_norm(x));
    if (j < j_max) x = (t.P.adjoint() * x * t.P).eval();
  }
  return out;
}

inline constexpr double kDefectRankTol = 1e-7;

struct FundamentalSet {
  std::vector<CMatrix> F;       // compressions to Ran D_P, k×k each
  CMatrix D_P;                  // (I − P*P)^{1/2}
  CMatrix defect_basis;         // n×k isometry onto Ran D_P
  std::vector<double> residuals;

  /// F_i (1-based) as an operator on the ambient space, zero on ker D_P.
  CMatrix ambient(int i) const {
    const auto& f = F.at(static_cast<std::size_t>(i - 1));
    return defect_basis * f * defect_basis.adjoint();
  }
};

/// Minimal-norm solutions F_i of S_i − S_{d−i}*P = D_P F_i D_P on Ran D_P.
/// rank_tol is absolute: D_P ⪯ I for a contraction, and rounding of order ε in
/// I − P*P shows up as √ε in its square root.
inline FundamentalSet fundamental_operators(const GammaTuple& t, double rank_tol = kDefectRankTol,
                                            double defect_tol = 1e-8) {
  const auto n = t.n;
  const CMatrix defect_sq = hermitian_part(identity(n) - t.P.adjoint() * t.P);
  FundamentalSet fs;
  try {
    fs.D_P = psd_sqrt(defect_sq, defect_tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::DefectFailure, std::string("I − P*P is not positive: ") + e.what());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(fs.D_P);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = n - 1; k >= 0; --k)
    if (es.eigenvalues()(k) > rank_tol) keep.push_back(k);
  const auto r = static_cast<Eigen::Index>(keep.size());
  fs.defect_basis.resize(n, r);
  Eigen::VectorXd inv(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    fs.defect_basis.col(k) = es.eigenvectors().col(keep[static_cast<std::size_t>(k)]);
    inv(k) = 1.0 / es.eigenvalues()(keep[static_cast<std::size_t>(k)]);
  }
  for (int i = 1; i < t.d; ++i) {
    const CMatrix x = t.s(i) - t.s(t.d - i).adjoint() * t.P;
    fs.F.push_back(inv.asDiagonal() * (fs.defect_basis.adjoint() * x * fs.defect_basis) * inv.asDiagonal());
    fs.residuals.push_back(fro(x - fs.D_P * fs.ambient(i) * fs.D_P));
  }
  return fs;
}

}  // namespace gammadisc
