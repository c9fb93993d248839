#pragma once

#include <random>

#include "gammadisc/gammadisc.hpp"

namespace gammadisc::testing {

inline constexpr Complex kI{0.0, 1.0};

inline CMatrix diag(std::initializer_list<Complex> values) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (const auto& v : values) {
    m(k, k) = v;
    ++k;
  }
  return m;
}

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline CMatrix random_psd(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = random_ginibre(n, n, rng);
  return a.adjoint() * a;
}

/// Random low-rank matrix of the requested rank.
inline CMatrix random_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, std::mt19937_64& rng) {
  return random_ginibre(rows, rank, rng) * random_ginibre(rank, cols, rng);
}

inline GammaTuple zero_tuple(int d, Eigen::Index n) {
  std::vector<CMatrix> s(static_cast<std::size_t>(d - 1), CMatrix::Zero(n, n));
  return make_gamma_tuple(s, CMatrix::Zero(n, n), Certificate::Constructed, "zero");
}

/// Symmetrization of commuting diagonal contractions with the given joint eigenvalues.
inline GammaTuple diagonal_tuple(const std::vector<std::vector<Complex>>& columns) {
  std::vector<CMatrix> t;
  for (const auto& col : columns) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(col.size()), static_cast<Eigen::Index>(col.size()));
    for (std::size_t k = 0; k < col.size(); ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = col[k];
    t.push_back(m);
  }
  return symmetrize_commuting_normals(t);
}

inline const std::vector<GeneratorKind>& all_kinds() {
  static const std::vector<GeneratorKind> k{GeneratorKind::NormalBoundary, GeneratorKind::NormalInterior,
                                            GeneratorKind::MixedPurity, GeneratorKind::Ando2};
  return k;
}

inline bool kind_supported(int d, Eigen::Index n, GeneratorKind k) {
  if (k == GeneratorKind::Ando2) return d == 2;
  if (k == GeneratorKind::MixedPurity) return n >= 2;
  return true;
}

}  // namespace gammadisc::testing
