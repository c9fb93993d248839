#include <iostream>

#include "gammadisc/gammadisc.hpp"

int main() {
  using namespace gammadisc;
  // A Γ_3-contraction with a unitary part and a pure part.
  const auto t = random_gamma_tuple(3, 4, GeneratorKind::MixedPurity, 7);
  const auto ext = canonical_extension(t);
  const auto res = extension_residuals(ext);
  std::cout << "rank Q = " << ext.r << ", dim T(S) = " << toeplitz_space(t).dim()
            << ", ‖UJ − JP‖ = " << res.intertwine_u << "\n";

  const auto cs = commutant(t.members());
  std::mt19937_64 rng(1);
  const CMatrix x = random_combination(cs.basis, t.n, t.n, rng);
  const auto lift = lift_commutant(ext, x);
  std::cout << "‖X‖ = " << lift.norm_X << ", ‖Y‖ = " << lift.norm_Y << "\n";
}
