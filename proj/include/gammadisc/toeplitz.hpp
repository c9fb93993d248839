#pragma once

// Toeplitz projection Φ, the commutant correspondence ρ(Y) = J*YJ with its inverse
// symbol map, and the multiplicative lift Θ.

#include <limits>
#include <random>

#include "gammadisc/brown_halmos.hpp"
#include "gammadisc/dilation.hpp"
#include "gammadisc/report.hpp"

namespace gammadisc {

inline constexpr double kGapTol = 1e-8;
inline constexpr double kCommutantGate = 1e-8;

/// Φ as an n²×n² matrix acting on column-stacked vec(X).
struct ToeplitzProjection {
  CMatrix phi_mat;
  double spectral_gap = 0.0;  // min |1 − λ| over eigenvalues λ of Ψ off the fixed space
  Eigen::Index n = 0;
  Eigen::Index fixed_dim = 0;
};

inline CMatrix apply_phi(const ToeplitzProjection& phi, const CMatrix& x) {
  return unvec(phi.phi_mat * vec(x), phi.n, phi.n);
}

/// Spectral projection at 1 of Ψ(A) = P*·A·P along the remaining spectrum.
///
/// Ψ is an operator-norm contraction, so eigenvalue 1 is semisimple and the projection
/// is V (W*V)^{-1} W* with V, W spanning the right and left fixed vectors. This is
/// also the limit of the Cesàro means of Ψⁿ, hence completely positive.
inline ToeplitzProjection toeplitz_projection(const CMatrix& P, double tol = kGapTol) {
  require_finite(P, "P");
  require_square(P, "P");
  const auto n = P.rows();
  const auto N = n * n;
  const CMatrix psi = Eigen::kroneckerProduct(P.transpose(), P.adjoint());
  const CMatrix a = psi - identity(N);

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(s(0), 1.0 + op_norm(P) * op_norm(P));
  Eigen::Index rank = 0;
  while (rank < N && s(rank) >= default_kernel_tol(n) * scale) ++rank;
  const Eigen::Index k = N - rank;

  ToeplitzProjection out;
  out.n = n;
  out.fixed_dim = k;
  out.phi_mat = CMatrix::Zero(N, N);
  if (k > 0) {
    const CMatrix v = svd.matrixV().rightCols(k);
    const CMatrix w = svd.matrixU().rightCols(k);
    const CMatrix wv = w.adjoint() * v;
    out.phi_mat = v * wv.fullPivLu().solve(w.adjoint());
  }

  Eigen::ComplexEigenSolver<CMatrix> es(psi, false);
  std::vector<double> dist;
  for (Eigen::Index i = 0; i < N; ++i) dist.push_back(std::abs(1.0 - es.eigenvalues()(i)));
  std::sort(dist.begin(), dist.end());
  out.spectral_gap = k < N ? dist[static_cast<std::size_t>(k)] : std::numeric_limits<double>::infinity();
  if (out.spectral_gap < tol)
    throw Error(ErrorKind::GapTooSmall, "spectral gap " + std::to_string(out.spectral_gap));
  return out;
}

/// Choi matrix Σ_{ij} E_ij ⊗ Φ(E_ij).
inline CMatrix choi_matrix(const ToeplitzProjection& phi) {
  const auto n = phi.n;
  CMatrix c = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      c.block(i * n, j * n, n, n) = apply_phi(phi, e);
    }
  return c;
}

/// Idempotence, complete positivity, Φ(I) = Q and Ran Φ = 𝒯(P).
inline VerificationReport projection_report(const ToeplitzProjection& phi, const CMatrix& P, double tol = 1e-8) {
  VerificationReport rep;
  rep.tolerances["phi.tol"] = tol;
  Stopwatch sw;
  const auto& m = phi.phi_mat;
  rep.check("idempotent", fro(m * m - m), 0.1 * tol);
  const CMatrix choi = choi_matrix(phi);
  rep.check("choi_hermitian", fro(choi - choi.adjoint()), 0.1 * tol);
  rep.check("choi_psd", std::max(0.0, -min_eigenvalue(choi)), 0.1 * tol, "negative part of lambda_min(Choi)");
  const auto lim = compute_q(P);
  rep.check("phi_identity_is_q", fro(apply_phi(phi, identity(phi.n)) - lim.Q), tol);
  const auto tp = toeplitz_space_p_only(P);
  double fixed = 0.0;
  for (const auto& b : tp.basis) fixed = std::max(fixed, fro(apply_phi(phi, b) - b));
  rep.check("fixes_toeplitz_space", fixed, tol);
  const auto range_rank = static_cast<std::size_t>(numerical_rank(m, 1e-8));
  rep.expect("range_dimension", range_rank == tp.dim(),
             "rank Phi = " + std::to_string(range_rank) + ", dim T(P) = " + std::to_string(tp.dim()));
  double psi_fixed = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const CMatrix y = unvec(m.col(j), phi.n, phi.n);
    psi_fixed = std::max(psi_fixed, fro(P.adjoint() * y * P - y));
  }
  rep.check("range_in_toeplitz_space", psi_fixed, tol);
  rep.timings_ms["phi"] = sw.ms();
  return rep;
}

/// Φ(Φ(X)Y) = Φ(XΦ(Y)) = Φ(Φ(X)Φ(Y)) on random pairs, plus the bimodule property
/// Φ(P*^k X P^m) = P*^k Φ(X) P^m.
inline VerificationReport choi_effros_check(const ToeplitzProjection& phi, int trials, std::uint64_t seed,
                                            double tol = 1e-8, const CMatrix* P = nullptr) {
  VerificationReport rep;
  rep.tolerances["choi_effros.tol"] = tol;
  Stopwatch sw;
  const auto n = phi.n;
  auto discrepancy = [&](const CMatrix& x, const CMatrix& y) {
    const CMatrix fx = apply_phi(phi, x);
    const CMatrix fy = apply_phi(phi, y);
    const CMatrix a = apply_phi(phi, fx * y);
    const CMatrix b = apply_phi(phi, x * fy);
    const CMatrix c = apply_phi(phi, fx * fy);
    return std::max({fro(a - b), fro(a - c), fro(b - c)});
  };
  const CMatrix id = identity(n);
  rep.check("identity_pair", discrepancy(id, id), tol);
  std::mt19937_64 rng(seed);
  const CMatrix x0 = random_ginibre(n, n, rng);
  const CMatrix zero = CMatrix::Zero(n, n);
  const CMatrix f0 = apply_phi(phi, x0);
  rep.check("zero_pair", std::max({fro(apply_phi(phi, f0 * zero)), fro(apply_phi(phi, x0 * apply_phi(phi, zero))),
                                   fro(apply_phi(phi, f0 * apply_phi(phi, zero)))}),
            tol);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const CMatrix x = random_ginibre(n, n, rng);
    const CMatrix y = random_ginibre(n, n, rng);
    worst = std::max(worst, discrepancy(x, y));
  }
  rep.check("random_pairs", worst, tol, std::to_string(trials) + " pairs");

  double module = 0.0;
  const Complex lambda(0.6, -0.8);
  const CMatrix x = random_ginibre(n, n, rng);
  module = std::max(module, fro(apply_phi(phi, lambda * x * (2.0 * lambda)) - lambda * apply_phi(phi, x) * (2.0 * lambda)));
  if (P) {
    CMatrix left = id;
    for (int k = 0; k <= 2; ++k) {
      CMatrix right = id;
      for (int m = 0; m <= 2; ++m) {
        module = std::max(module, fro(apply_phi(phi, left * x * right) - left * apply_phi(phi, x) * right));
        right = (right * (*P)).eval();
      }
      left = (left * P->adjoint()).eval();
    }
  }
  rep.check("module_property", module, tol, P ? "scalars and powers of P" : "scalars");
  rep.timings_ms["choi_effros"] = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// commutant correspondence

inline CommutantBasis extension_commutant(const CanonicalExtension& ext) {
  const auto m = ext.members();
  return commutant(m);
}

/// ρ(Y) = J*·Y·J.
inline CMatrix rho(const CanonicalExtension& ext, const CMatrix& y, double tol = kCommutantGate) {
  if (y.rows() != ext.r || y.cols() != ext.r) throw Error(ErrorKind::DimensionMismatch, "Y must be r×r");
  const auto m = ext.members();
  const double res = commutant_residual(y, m);
  if (res > tol) throw Error(ErrorKind::NotInCommutant, "Y misses {R, U}' by " + std::to_string(res));
  return ext.J.adjoint() * y * ext.J;
}

/// The Y ∈ {R, U}' with J*·Y·J = A, solved in commutant-basis coordinates.
inline CMatrix toeplitz_symbol(const CanonicalExtension& ext, const CommutantBasis& cb, const CMatrix& a,
                               double tol = 1e-8) {
  const auto& t = ext.source;
  if (a.rows() != t.n || a.cols() != t.n) throw Error(ErrorKind::DimensionMismatch, "A must be n×n");
  const double scale = (1.0 + op_norm(a)) * (1.0 + t.max_norm()) * (1.0 + t.max_norm());
  const double bh = brown_halmos_residual(t, a);
  if (bh > tol * scale) throw Error(ErrorKind::NotToeplitz, "Brown–Halmos residual " + std::to_string(bh));
  if (cb.basis.empty()) throw Error(ErrorKind::Inconsistent, "empty commutant");
  CMatrix m(t.n * t.n, static_cast<Eigen::Index>(cb.dim()));
  for (std::size_t k = 0; k < cb.dim(); ++k)
    m.col(static_cast<Eigen::Index>(k)) = vec(ext.J.adjoint() * cb.basis[k] * ext.J);
  const CVector y = m.completeOrthogonalDecomposition().solve(vec(a));
  CMatrix out = CMatrix::Zero(ext.r, ext.r);
  for (std::size_t k = 0; k < cb.dim(); ++k) out += y(static_cast<Eigen::Index>(k)) * cb.basis[k];
  const double res = fro(ext.J.adjoint() * out * ext.J - a);
  if (res > tol * (1.0 + op_norm(a)))
    throw Error(ErrorKind::Inconsistent, "no symbol within tolerance (residual " + std::to_string(res) + ")");
  return out;
}

inline CMatrix toeplitz_symbol(const CanonicalExtension& ext, const CMatrix& a, double tol = 1e-8) {
  return toeplitz_symbol(ext, extension_commutant(ext), a, tol);
}

/// Θ(X): the Y ∈ {R, U}' with Y·J = J·X, solved in commutant-basis coordinates.
inline CMatrix theta(const CanonicalExtension& ext, const CommutantBasis& cb, const CMatrix& x,
                     double tol = 1e-8) {
  const auto& t = ext.source;
  if (x.rows() != t.n || x.cols() != t.n) throw Error(ErrorKind::DimensionMismatch, "X must be n×n");
  const auto sm = t.members();
  const double cres = commutant_residual(x, sm);
  if (cres > tol) throw Error(ErrorKind::NotInCommutant, "X misses {S, P}' by " + std::to_string(cres));
  const CMatrix jx = ext.J * x;
  CMatrix m(jx.size(), static_cast<Eigen::Index>(cb.dim()));
  for (std::size_t k = 0; k < cb.dim(); ++k) m.col(static_cast<Eigen::Index>(k)) = vec(cb.basis[k] * ext.J);
  const CVector y = m.completeOrthogonalDecomposition().solve(vec(jx));
  CMatrix out = CMatrix::Zero(ext.r, ext.r);
  for (std::size_t k = 0; k < cb.dim(); ++k) out += y(static_cast<Eigen::Index>(k)) * cb.basis[k];
  const double res = fro(out * ext.J - jx);
  if (res > tol * (1.0 + op_norm(x)) * (1.0 + t.max_norm()))
    throw Error(ErrorKind::Inconsistent, "Θ(X)·J = J·X fails by " + std::to_string(res));
  return out;
}

inline CMatrix theta(const CanonicalExtension& ext, const CMatrix& x, double tol = 1e-8) {
  return theta(ext, extension_commutant(ext), x, tol);
}

/// Dimension match, spanning, isometry at matrix levels 1 and 2, and π∘ρ = id.
inline VerificationReport verify_theorem2(const GammaTuple& t, double tol = 1e-7, double amp_tol = 1e-6,
                                          std::uint64_t seed = 0) {
  VerificationReport rep;
  rep.tolerances["thm2.tol"] = tol;
  rep.tolerances["thm2.amplification_tol"] = amp_tol;
  Stopwatch sw;
  CanonicalExtension ext;
  try {
    ext = canonical_extension(t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PureTuple) {
      rep.skip("symbol_correspondence", "Q = 0: 𝒯(𝖲) is trivial and there is no extension");
      return rep;
    }
    rep.expect("canonical_extension", false, e.what());
    return rep;
  }
  const auto tb = toeplitz_space(t);
  const auto cb = extension_commutant(ext);
  rep.expect("dimension_match", tb.dim() == cb.dim(),
             "dim T(S) = " + std::to_string(tb.dim()) + ", dim {R,U}' = " + std::to_string(cb.dim()));

  std::vector<CMatrix> images;
  double in_space = 0.0;
  for (const auto& c : cb.basis) {
    images.push_back(rho(ext, c));
    in_space = std::max(in_space, fro(images.back() - hs_project(tb.basis, images.back())));
  }
  const auto rk = static_cast<std::size_t>(images.empty() ? 0 : numerical_rank(stack_vecs(images), 1e-8));
  rep.expect("rho_spans", rk == tb.dim(), "rank of rho(basis) = " + std::to_string(rk));
  rep.check("rho_lands_in_toeplitz", in_space, tol);

  std::mt19937_64 rng(seed);
  double iso = 0.0;
  double round_trip = 0.0;
  for (int k = 0; k < 20; ++k) {
    const CMatrix y = random_combination(cb.basis, ext.r, ext.r, rng);
    const CMatrix a = rho(ext, y);
    iso = std::max(iso, std::abs(op_norm(a) - op_norm(y)) / (1.0 + op_norm(y)));
    round_trip = std::max(round_trip, fro(toeplitz_symbol(ext, cb, a) - y));
  }
  for (const auto& c : cb.basis) round_trip = std::max(round_trip, fro(toeplitz_symbol(ext, cb, rho(ext, c)) - c));
  rep.check("rho_isometry", iso, tol, "20 samples, relative to 1 + ‖Y‖");
  rep.check("symbol_round_trip", round_trip, tol);

  const CMatrix j2 = Eigen::kroneckerProduct(identity(2), ext.J);
  double amp = 0.0;
  for (int k = 0; k < 5; ++k) {
    CMatrix y2(2 * ext.r, 2 * ext.r);
    for (int bi = 0; bi < 2; ++bi)
      for (int bj = 0; bj < 2; ++bj)
        y2.block(bi * ext.r, bj * ext.r, ext.r, ext.r) = random_combination(cb.basis, ext.r, ext.r, rng);
    const CMatrix a2 = j2.adjoint() * y2 * j2;
    amp = std::max(amp, std::abs(op_norm(a2) - op_norm(y2)));
  }
  rep.check("amplification_isometry", amp, amp_tol, "5 random 2×2 commutant blocks");
  rep.timings_ms["thm2"] = sw.ms();
  return rep;
}

}  // namespace gammadisc
