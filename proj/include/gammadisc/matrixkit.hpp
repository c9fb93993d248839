#pragma once

// Dense complex linear-algebra substrate shared by every other module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "gammadisc/error.hpp"

namespace gammadisc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// norms and small predicates

/// Largest singular value.
inline double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

inline double fro(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_finite(const CMatrix& m, const std::string& what) {
  if (m.rows() < 1 || m.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch, what + " must have at least one row and column");
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, what + " has non-finite entries");
}

inline void require_square(const CMatrix& m, const std::string& what) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, what + " must be square");
}

/// Hermitian within ‖M − M*‖_F ≤ tol·(1 + ‖M‖_F).
inline bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return fro(m - m.adjoint()) <= tol * (1.0 + fro(m));
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline double normality_residual(const CMatrix& m) {
  return fro(m * m.adjoint() - m.adjoint() * m);
}

inline double unitarity_residual(const CMatrix& m) {
  const auto n = m.rows();
  return std::max(fro(m.adjoint() * m - identity(n)), fro(m * m.adjoint() - identity(n)));
}

/// Eigenvalues of the Hermitian part, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const CMatrix& m) {
  auto ev = hermitian_eigenvalues(m);
  return ev.size() == 0 ? 0.0 : ev(0);
}

inline double max_eigenvalue(const CMatrix& m) {
  auto ev = hermitian_eigenvalues(m);
  return ev.size() == 0 ? 0.0 : ev(ev.size() - 1);
}

// ---------------------------------------------------------------------------
// factorizations

/// Hermitian PSD square root. Eigenvalues in [−tol, 0) are clamped to zero.
inline CMatrix psd_sqrt(const CMatrix& m, double tol = 1e-10) {
  require_square(m, "psd_sqrt input");
  if (!is_hermitian(m, tol)) throw Error(ErrorKind::NotHermitian, "psd_sqrt input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol)
      throw Error(ErrorKind::NegativeEigenvalue,
                  "eigenvalue " + std::to_string(ev(i)) + " below -" + std::to_string(tol));
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const CMatrix& v = es.eigenvectors();
  CMatrix r = v * ev.cast<Complex>().asDiagonal() * v.adjoint();
  return hermitian_part(r);
}

inline double default_rank_tol(Eigen::Index n) { return static_cast<double>(n) * kEps * 64.0; }

/// Moore–Penrose pseudoinverse; singular values below rank_tol·σ_max are dropped.
inline CMatrix pinv(const CMatrix& m, double rank_tol) {
  if (rank_tol < 0) throw Error(ErrorKind::InvalidArgument, "rank_tol must be non-negative");
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double cut = rank_tol * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut || s(i) == 0.0) break;
    out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

inline CMatrix pinv(const CMatrix& m) {
  return pinv(m, default_rank_tol(std::max(m.rows(), m.cols())));
}

/// Orthonormal basis (as columns) for the eigenvectors of a Hermitian PSD matrix
/// whose eigenvalue exceeds rel_tol·λ_max. Columns ordered by decreasing eigenvalue.
inline CMatrix dominant_eigenbasis(const CMatrix& h, double rel_tol, Eigen::VectorXd* values = nullptr) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  const auto& ev = es.eigenvalues();
  const Eigen::Index n = ev.size();
  const double lmax = n > 0 ? ev(n - 1) : 0.0;
  std::vector<Eigen::Index> keep;
  if (lmax > 0.0)
    for (Eigen::Index i = n - 1; i >= 0; --i)
      if (ev(i) > rel_tol * lmax) keep.push_back(i);
  CMatrix b(h.rows(), static_cast<Eigen::Index>(keep.size()));
  if (values) values->resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    b.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    if (values) (*values)(static_cast<Eigen::Index>(k)) = ev(keep[k]);
  }
  return b;
}

// ---------------------------------------------------------------------------
// vectorization and joint kernels

/// Column-stacking vec.
inline CVector vec(const CMatrix& a) { return Eigen::Map<const CVector>(a.data(), a.size()); }

inline CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

/// The linear map A ↦ Σ sign·L·A·R.
struct MatrixMapConstraint {
  struct Term {
    CMatrix left;
    CMatrix right;
    int sign = 1;
  };
  std::vector<Term> terms;

  MatrixMapConstraint() = default;
  MatrixMapConstraint(std::initializer_list<Term> t) : terms(t) {}

  Eigen::Index in_rows() const { return terms.empty() ? 0 : terms.front().left.cols(); }
  Eigen::Index in_cols() const { return terms.empty() ? 0 : terms.front().right.rows(); }
  Eigen::Index out_rows() const { return terms.empty() ? 0 : terms.front().left.rows(); }
  Eigen::Index out_cols() const { return terms.empty() ? 0 : terms.front().right.cols(); }

  void check(Eigen::Index n_rows, Eigen::Index n_cols) const {
    if (terms.empty()) throw Error(ErrorKind::DimensionMismatch, "constraint has no terms");
    for (const auto& t : terms) {
      if (t.left.rows() != out_rows() || t.right.cols() != out_cols())
        throw Error(ErrorKind::DimensionMismatch, "constraint terms disagree on output shape");
      if (t.left.cols() != n_rows || t.right.rows() != n_cols)
        throw Error(ErrorKind::DimensionMismatch, "constraint does not act on the requested shape");
      if (t.sign != 1 && t.sign != -1)
        throw Error(ErrorKind::InvalidArgument, "constraint sign must be +1 or -1");
    }
  }

  CMatrix apply(const CMatrix& a) const {
    CMatrix out = CMatrix::Zero(out_rows(), out_cols());
    for (const auto& t : terms) out += static_cast<double>(t.sign) * (t.left * a * t.right);
    return out;
  }

  /// Upper bound for the operator norm of the matricization.
  double scale() const {
    double out = 0.0;
    for (const auto& t : terms) out += op_norm(t.left) * op_norm(t.right);
    return out;
  }

  /// vec(L·A·R) = (Rᵀ ⊗ L)·vec(A).
  CMatrix matricize() const {
    CMatrix k = CMatrix::Zero(out_rows() * out_cols(), in_rows() * in_cols());
    for (const auto& t : terms)
      k += static_cast<double>(t.sign) * CMatrix(Eigen::kroneckerProduct(t.right.transpose(), t.left));
    return k;
  }
};

inline double default_kernel_tol(Eigen::Index n) {
  return static_cast<double>(n * n) * kEps * 64.0;
}

/// Null space of the stacked matricization as an HS-orthonormal basis of rows×cols matrices.
inline std::vector<CMatrix> joint_kernel(std::span<const MatrixMapConstraint> constraints,
                                         Eigen::Index rows, Eigen::Index cols, double tol) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::DimensionMismatch, "kernel shape must be positive");
  const Eigen::Index unknowns = rows * cols;
  Eigen::Index total = 0;
  for (const auto& c : constraints) {
    c.check(rows, cols);
    total += c.out_rows() * c.out_cols();
  }
  std::vector<CMatrix> basis;
  if (total == 0) {
    for (Eigen::Index k = 0; k < unknowns; ++k) {
      CVector e = CVector::Zero(unknowns);
      e(k) = 1.0;
      basis.push_back(unvec(e, rows, cols));
    }
    return basis;
  }
  CMatrix stacked(total, unknowns);
  Eigen::Index at = 0;
  for (const auto& c : constraints) {
    CMatrix k = c.matricize();
    stacked.middleRows(at, k.rows()) = k;
    at += k.rows();
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  // Cut relative to the coefficient scale; a system of pure rounding has full kernel.
  double scale = s.size() > 0 ? s(0) : 0.0;
  for (const auto& c : constraints) scale = std::max(scale, c.scale());
  Eigen::Index rank = 0;
  if (scale > 0.0)
    while (rank < s.size() && s(rank) >= tol * scale) ++rank;
  const CMatrix& v = svd.matrixV();
  for (Eigen::Index k = rank; k < unknowns; ++k) basis.push_back(unvec(v.col(k), rows, cols));
  return basis;
}

inline std::vector<CMatrix> joint_kernel(std::span<const MatrixMapConstraint> constraints,
                                         Eigen::Index n, double tol) {
  return joint_kernel(constraints, n, n, tol);
}

inline std::vector<CMatrix> joint_kernel(std::span<const MatrixMapConstraint> constraints,
                                         Eigen::Index n) {
  return joint_kernel(constraints, n, n, default_kernel_tol(n));
}

/// Gram matrix under the Hilbert–Schmidt inner product trace(A*B).
inline CMatrix hs_gram(std::span<const CMatrix> basis) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  CMatrix g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      g(i, j) = (basis[static_cast<std::size_t>(i)].adjoint() * basis[static_cast<std::size_t>(j)]).trace();
  return g;
}

/// Orthogonal projection of A onto the span of an HS-orthonormal basis.
inline CMatrix hs_project(std::span<const CMatrix> basis, const CMatrix& a) {
  CMatrix out = CMatrix::Zero(a.rows(), a.cols());
  for (const auto& b : basis) out += (b.adjoint() * a).trace() * b;
  return out;
}

/// Columns are vec(basis[k]).
inline CMatrix stack_vecs(std::span<const CMatrix> mats) {
  if (mats.empty()) return CMatrix();
  CMatrix out(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vec(mats[k]);
  return out;
}

/// Numerical rank at relative threshold tol·σ_max.
inline Eigen::Index numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) >= tol * s(0)) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// polynomial roots

/// Roots of z^d + c_{d−1}z^{d−1} + … + c_0 given coeffs = (c_{d−1}, …, c_0), computed
/// as companion-matrix eigenvalues. Clusters that behave like a perturbed multiple root
/// are replaced by their centroid, which is well conditioned where the members are not.
inline std::vector<Complex> poly_roots(std::span<const Complex> coeffs) {
  if (coeffs.empty()) throw Error(ErrorKind::EmptyCoefficients, "polynomial has no coefficients");
  const auto d = static_cast<Eigen::Index>(coeffs.size());
  CMatrix comp = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) comp(0, j) = -coeffs[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  std::vector<Complex> raw(es.eigenvalues().data(), es.eigenvalues().data() + d);

  double scale = 1.0;
  for (const auto& c : coeffs) scale += std::abs(c);
  auto radius = [&](std::size_t m) {
    return 2.0 * std::pow(1e3 * kEps * scale, 1.0 / static_cast<double>(m));
  };

  std::vector<Complex> out;
  std::vector<bool> used(raw.size(), false);
  for (;;) {
    std::size_t seed = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (!used[i] && (seed == raw.size() || std::abs(raw[i]) > std::abs(raw[seed]))) seed = i;
    if (seed == raw.size()) break;
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (!used[i] && i != seed) others.push_back(i);
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(raw[a] - raw[seed]) < std::abs(raw[b] - raw[seed]);
    });
    std::size_t take = 0;
    for (std::size_t m = others.size(); m >= 1; --m) {
      Complex centroid = raw[seed];
      for (std::size_t k = 0; k < m; ++k) centroid += raw[others[k]];
      centroid /= static_cast<double>(m + 1);
      double spread = std::abs(raw[seed] - centroid);
      for (std::size_t k = 0; k < m; ++k) spread = std::max(spread, std::abs(raw[others[k]] - centroid));
      if (spread <= radius(m + 1) * (1.0 + std::abs(centroid))) {
        take = m;
        break;
      }
    }
    Complex centroid = raw[seed];
    used[seed] = true;
    for (std::size_t k = 0; k < take; ++k) {
      centroid += raw[others[k]];
      used[others[k]] = true;
    }
    centroid /= static_cast<double>(take + 1);
    for (std::size_t k = 0; k <= take; ++k) out.push_back(centroid);
  }
  return out;
}

inline double poly_roots_max_modulus(std::span<const Complex> coeffs) {
  double m = 0.0;
  for (const auto& r : poly_roots(coeffs)) m = std::max(m, std::abs(r));
  return m;
}

// ---------------------------------------------------------------------------
// random matrices

inline CMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of R's diagonal removed).
inline CMatrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  CMatrix z = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * identity(n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

}  // namespace gammadisc
