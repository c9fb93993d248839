#pragma once

// Points of the symmetrized polydisc, commuting operator tuples, certified
// generators and the Γ_d-unitary classifier.

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gammadisc/matrixkit.hpp"

namespace gammadisc {

inline constexpr double kMembershipTol = 1e-8;

struct GammaPoint {
  int d = 2;
  std::vector<Complex> s;  // s_1 … s_{d−1}
  Complex p{0.0, 0.0};
};

struct GammaConstants {
  std::vector<double> gamma;  // γ_j = (d − j)/d, j = 1 … d−1
};

inline GammaConstants gamma_constants(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "d must be at least 2");
  GammaConstants c;
  for (int j = 1; j < d; ++j) c.gamma.push_back(static_cast<double>(d - j) / d);
  return c;
}

/// Monic coefficients (c_{m−1}, …, c_0) of z^m − e_1 z^{m−1} + e_2 z^{m−2} − … + (−1)^m e_m.
inline std::vector<Complex> symmetrization_polynomial(std::span<const Complex> e) {
  std::vector<Complex> c;
  c.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) c.push_back((k % 2 == 0 ? -1.0 : 1.0) * e[k]);
  return c;
}

/// Membership of (e_1, …, e_m) in Γ_m, any m ≥ 1 (Γ_1 is the closed disc).
inline bool in_gamma_coords(std::span<const Complex> e, double tol) {
  if (e.empty()) throw Error(ErrorKind::EmptyCoefficients, "empty coordinate list");
  const auto coeffs = symmetrization_polynomial(e);
  return poly_roots_max_modulus(coeffs) <= 1.0 + tol;
}

inline std::vector<Complex> coordinates(const GammaPoint& pt) {
  if (pt.d < 2) throw Error(ErrorKind::InvalidArgument, "d must be at least 2");
  if (static_cast<int>(pt.s.size()) != pt.d - 1)
    throw Error(ErrorKind::DimensionMismatch, "GammaPoint needs d−1 s-coordinates");
  std::vector<Complex> e(pt.s);
  e.push_back(pt.p);
  return e;
}

inline bool point_in_gamma(const GammaPoint& pt, double tol = kMembershipTol) {
  return in_gamma_coords(coordinates(pt), tol);
}

inline bool point_in_boundary(const GammaPoint& pt, double tol = kMembershipTol) {
  return point_in_gamma(pt, tol) && std::abs(std::abs(pt.p) - 1.0) <= tol;
}

/// e_1 … e_d of scalars.
inline std::vector<Complex> elementary_symmetric(std::span<const Complex> z) {
  std::vector<Complex> e(z.size() + 1, Complex(0.0));
  e[0] = 1.0;
  for (const auto& zj : z)
    for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * zj;
  return {e.begin() + 1, e.end()};
}

/// e_1 … e_d of commuting matrices.
inline std::vector<CMatrix> elementary_symmetric(std::span<const CMatrix> t) {
  const auto n = t.front().rows();
  std::vector<CMatrix> e(t.size() + 1, CMatrix::Zero(n, n));
  e[0] = identity(n);
  for (const auto& tj : t)
    for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * tj;
  return {e.begin() + 1, e.end()};
}

// ---------------------------------------------------------------------------
// tuples

enum class Certificate { Constructed, NecessaryChecksOnly };

struct GammaTuple {
  int d = 2;
  Eigen::Index n = 0;
  std::vector<CMatrix> S;  // S_1 … S_{d−1}
  CMatrix P;
  Certificate certificate = Certificate::NecessaryChecksOnly;
  std::string source;  // generator name for Constructed tuples

  /// S_i with 1-based index.
  const CMatrix& s(int i) const { return S.at(static_cast<std::size_t>(i - 1)); }

  /// (S_1, …, S_{d−1}, P).
  std::vector<CMatrix> members() const {
    std::vector<CMatrix> m(S);
    m.push_back(P);
    return m;
  }

  double max_norm() const {
    double m = op_norm(P);
    for (const auto& x : S) m = std::max(m, op_norm(x));
    return m;
  }
};

inline double max_commutator(const GammaTuple& t) {
  const auto m = t.members();
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) worst = std::max(worst, fro(commutator(m[i], m[j])));
  return worst;
}

/// Shape checks plus the necessary conditions every Γ_d-contraction satisfies.
inline void check_gamma_tuple(const GammaTuple& t, double tol = kMembershipTol) {
  if (t.d < 2) throw Error(ErrorKind::InvalidArgument, "d must be at least 2");
  if (static_cast<int>(t.S.size()) != t.d - 1)
    throw Error(ErrorKind::DimensionMismatch, "tuple needs d−1 S matrices");
  require_finite(t.P, "P");
  if (t.P.rows() != t.n || t.P.cols() != t.n)
    throw Error(ErrorKind::DimensionMismatch, "P must be n×n");
  for (std::size_t i = 0; i < t.S.size(); ++i) {
    require_finite(t.S[i], "S_" + std::to_string(i + 1));
    if (t.S[i].rows() != t.n || t.S[i].cols() != t.n)
      throw Error(ErrorKind::DimensionMismatch, "S_" + std::to_string(i + 1) + " must be n×n");
  }
  const double scale = 1.0 + t.max_norm();
  const auto m = t.members();
  auto label = [&](std::size_t i) {
    return i + 1 == m.size() ? std::string("P") : "S_" + std::to_string(i + 1);
  };
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const double c = fro(commutator(m[i], m[j]));
      if (c > tol * scale)
        throw Error(ErrorKind::NotCommuting, "commutator [" + label(i) + ", " + label(j) +
                                                 "] has norm " + std::to_string(c));
    }
  const double pn = op_norm(t.P);
  if (pn > 1.0 + tol)
    throw Error(ErrorKind::NotContractive, "‖P‖ = " + std::to_string(pn) + " exceeds 1");
}

inline GammaTuple make_gamma_tuple(std::vector<CMatrix> S, CMatrix P,
                                   Certificate cert = Certificate::NecessaryChecksOnly,
                                   std::string source = {}, double tol = kMembershipTol) {
  GammaTuple t;
  t.d = static_cast<int>(S.size()) + 1;
  t.n = P.rows();
  t.S = std::move(S);
  t.P = std::move(P);
  t.certificate = cert;
  t.source = std::move(source);
  check_gamma_tuple(t, tol);
  return t;
}

inline GammaTuple direct_sum(const GammaTuple& a, const GammaTuple& b) {
  if (a.d != b.d) throw Error(ErrorKind::DimensionMismatch, "direct sum needs equal d");
  auto blk = [](const CMatrix& x, const CMatrix& y) {
    CMatrix z = CMatrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
    z.topLeftCorner(x.rows(), x.cols()) = x;
    z.bottomRightCorner(y.rows(), y.cols()) = y;
    return z;
  };
  GammaTuple t;
  t.d = a.d;
  t.n = a.n + b.n;
  for (std::size_t i = 0; i < a.S.size(); ++i) t.S.push_back(blk(a.S[i], b.S[i]));
  t.P = blk(a.P, b.P);
  const bool both = a.certificate == Certificate::Constructed && b.certificate == Certificate::Constructed;
  t.certificate = both ? Certificate::Constructed : Certificate::NecessaryChecksOnly;
  t.source = both ? "direct_sum(" + a.source + "," + b.source + ")" : std::string{};
  return t;
}

/// Conjugation W·X·W* of every member (W unitary).
inline GammaTuple conjugate(const GammaTuple& t, const CMatrix& w) {
  GammaTuple out = t;
  for (auto& s : out.S) s = w * s * w.adjoint();
  out.P = w * t.P * w.adjoint();
  return out;
}

inline GammaTuple symmetrize_commuting_normals(std::span<const CMatrix> T, double tol = kMembershipTol) {
  if (T.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two operators");
  const auto n = T.front().rows();
  double scale = 1.0;
  for (std::size_t k = 0; k < T.size(); ++k) {
    require_finite(T[k], "T_" + std::to_string(k + 1));
    if (T[k].rows() != n || T[k].cols() != n)
      throw Error(ErrorKind::DimensionMismatch, "operators must share one square shape");
    scale = std::max(scale, 1.0 + op_norm(T[k]));
  }
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (normality_residual(T[i]) > tol * scale * scale)
      throw Error(ErrorKind::NotNormal, "T_" + std::to_string(i + 1) + " is not normal");
    if (op_norm(T[i]) > 1.0 + tol)
      throw Error(ErrorKind::NotContractive, "T_" + std::to_string(i + 1) + " is not a contraction");
    for (std::size_t j = i + 1; j < T.size(); ++j)
      if (fro(commutator(T[i], T[j])) > tol * scale)
        throw Error(ErrorKind::NotCommuting, "T_" + std::to_string(i + 1) + " and T_" +
                                                 std::to_string(j + 1) + " do not commute");
  }
  auto e = elementary_symmetric(T);
  GammaTuple t;
  t.d = static_cast<int>(T.size());
  t.n = n;
  t.P = e.back();
  e.pop_back();
  t.S = std::move(e);
  t.certificate = Certificate::Constructed;
  t.source = "symmetrize_commuting_normals";
  return t;
}

// ---------------------------------------------------------------------------
// joint spectrum of commuting normal tuples

struct JointSpectrum {
  CMatrix basis;                             // unitary, columns are joint eigenvectors
  std::vector<std::vector<Complex>> points;  // one coordinate list per eigenvector
  double residual = 0.0;                     // worst off-diagonal mass after rotation
};

/// Simultaneous diagonalization of commuting normal matrices through a random
/// Hermitian combination; a few fresh combinations are tried before giving up.
inline JointSpectrum joint_eigenvalues(std::span<const CMatrix> members, double tol = kMembershipTol) {
  if (members.empty()) throw Error(ErrorKind::InvalidArgument, "no members");
  const auto n = members.front().rows();
  double scale = 1.0;
  for (const auto& m : members) scale = std::max(scale, 1.0 + op_norm(m));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (fro(commutator(members[i], members[j])) > tol * scale * scale)
        throw Error(ErrorKind::JointDiagonalizationFailure, "members do not commute");

  std::mt19937_64 rng(0x6a6f696e74ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  JointSpectrum best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 4; ++attempt) {
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& m : members) {
      const double a = u(rng);
      const double b = u(rng);
      h += a * (m + m.adjoint()) + b * Complex(0.0, 1.0) * (m - m.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
    JointSpectrum js;
    js.basis = es.eigenvectors();
    js.points.assign(static_cast<std::size_t>(n), {});
    js.residual = 0.0;
    for (const auto& m : members) {
      CMatrix dm = js.basis.adjoint() * m * js.basis;
      for (Eigen::Index k = 0; k < n; ++k) js.points[static_cast<std::size_t>(k)].push_back(dm(k, k));
      CMatrix off = dm;
      off.diagonal().setZero();
      js.residual = std::max(js.residual, fro(off));
    }
    if (js.residual < best.residual) best = std::move(js);
    if (best.residual <= tol * scale) return best;
  }
  throw Error(ErrorKind::JointDiagonalizationFailure,
              "off-diagonal residual " + std::to_string(best.residual) + " above tolerance");
}

/// Normal members, unitary P, S_i = S_{d−i}*·P, and joint spectrum in bΓ_d.
inline bool classify_gamma_unitary(const GammaTuple& t, double tol = kMembershipTol) {
  const auto m = t.members();
  const double scale = 1.0 + t.max_norm();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (fro(commutator(m[i], m[j])) > tol * scale * scale)
        throw Error(ErrorKind::JointDiagonalizationFailure, "tuple does not commute");
  for (const auto& x : m)
    if (normality_residual(x) > tol * scale * scale) return false;
  if (unitarity_residual(t.P) > tol * scale) return false;
  for (int i = 1; i < t.d; ++i)
    if (fro(t.s(i) - t.s(t.d - i).adjoint() * t.P) > tol * scale * scale) return false;
  const auto js = joint_eigenvalues(m, tol);
  for (const auto& pt : js.points) {
    GammaPoint g{t.d, {pt.begin(), pt.end() - 1}, pt.back()};
    if (!point_in_boundary(g, tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// certified generators

enum class GeneratorKind { NormalBoundary, NormalInterior, MixedPurity, Ando2 };

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::NormalBoundary: return "NormalBoundary";
    case GeneratorKind::NormalInterior: return "NormalInterior";
    case GeneratorKind::MixedPurity: return "MixedPurity";
    case GeneratorKind::Ando2: return "Ando2";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view s) {
  for (auto k : {GeneratorKind::NormalBoundary, GeneratorKind::NormalInterior, GeneratorKind::MixedPurity,
                 GeneratorKind::Ando2})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::UnsupportedKind, "unknown generator kind '" + std::string(s) + "'");
}

namespace detail {

// Symmetrizations of n random points of the closed polydisc, moduli drawn from [lo, hi).
inline GammaTuple diagonal_symmetrization(int d, Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> modulus(lo, hi);
  std::vector<CMatrix> e(static_cast<std::size_t>(d), CMatrix::Zero(n, n));
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<Complex> z;
    for (int j = 0; j < d; ++j) {
      const double r = lo == hi ? lo : modulus(rng);
      const double th = angle(rng);
      z.push_back(std::polar(r, th));
    }
    const auto ek = elementary_symmetric(z);
    for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(j)](k, k) = ek[static_cast<std::size_t>(j)];
  }
  GammaTuple t;
  t.d = d;
  t.n = n;
  t.P = e.back();
  e.pop_back();
  t.S = std::move(e);
  t.certificate = Certificate::Constructed;
  return t;
}

// Symmetrization of (a_1 T^{m_1}, …, a_d T^{m_d}) for one strict contraction T.
// Every coordinate is a disc-to-disc polynomial in T, so von Neumann's inequality
// makes the result a genuine Γ_d-contraction.
inline GammaTuple single_contraction_symmetrization(int d, Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CMatrix g = random_ginibre(n, n, rng);
  const CMatrix t = 0.9 * g / op_norm(g);
  std::vector<CMatrix> parts;
  for (int j = 0; j < d; ++j) {
    const double r = 0.5 + 0.5 * u(rng);
    const double th = 2.0 * std::numbers::pi * u(rng);
    const int power = 1 + static_cast<int>(u(rng) * 2.0);
    CMatrix tj = identity(n);
    for (int q = 0; q < power; ++q) tj = tj * t;
    parts.push_back(std::polar(r, th) * tj);
  }
  auto e = elementary_symmetric(parts);
  GammaTuple out;
  out.d = d;
  out.n = n;
  out.P = e.back();
  e.pop_back();
  out.S = std::move(e);
  out.certificate = Certificate::Constructed;
  return out;
}

}  // namespace detail

/// Deterministic in (d, n, kind, seed).
inline GammaTuple random_gamma_tuple(int d, Eigen::Index n, GeneratorKind kind, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "d must be at least 2");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (kind == GeneratorKind::Ando2 && d != 2)
    throw Error(ErrorKind::UnsupportedKind, "Ando2 requires d = 2");
  if (kind == GeneratorKind::MixedPurity && n < 2)
    throw Error(ErrorKind::UnsupportedKind, "MixedPurity requires n ≥ 2");
  std::mt19937_64 rng(seed);
  GammaTuple t;
  switch (kind) {
    case GeneratorKind::NormalBoundary: {
      t = detail::diagonal_symmetrization(d, n, 1.0, 1.0, rng);
      t = conjugate(t, haar_unitary(n, rng));
      break;
    }
    case GeneratorKind::NormalInterior: {
      t = detail::diagonal_symmetrization(d, n, 0.0, 0.95, rng);
      t = conjugate(t, haar_unitary(n, rng));
      break;
    }
    case GeneratorKind::MixedPurity: {
      const Eigen::Index nb = n / 2;
      auto boundary = detail::diagonal_symmetrization(d, nb, 1.0, 1.0, rng);
      auto strict = detail::single_contraction_symmetrization(d, n - nb, rng);
      t = direct_sum(boundary, strict);
      t = conjugate(t, haar_unitary(n, rng));
      break;
    }
    case GeneratorKind::Ando2: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const CMatrix m = random_ginibre(n, n, rng);
      const Complex a = std::polar(u(rng), 2.0 * std::numbers::pi * u(rng));
      const Complex b = std::polar(u(rng), 2.0 * std::numbers::pi * u(rng));
      const CMatrix p2 = m * m + a * m + b * identity(n);
      const double c1 = 0.3 + 0.65 * u(rng);
      const double c2 = 0.3 + 0.65 * u(rng);
      const CMatrix t1 = c1 * m / op_norm(m);
      const CMatrix t2 = c2 * p2 / op_norm(p2);
      t.d = 2;
      t.n = n;
      t.S = {t1 + t2};
      t.P = t1 * t2;
      break;
    }
  }
  t.certificate = Certificate::Constructed;
  t.source = std::string(to_string(kind));
  return t;
}

}  // namespace gammadisc
