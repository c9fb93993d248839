#pragma once

// Verification drivers for commutant lifting, defect decay, the fundamental
// operators and the Toeplitz projection. The extension and symbol drivers live
// next to their constructions (verify_theorem1, verify_theorem2).

#include <random>
#include <string>

#include "gammadisc/lifting.hpp"
#include "gammadisc/toeplitz.hpp"

namespace gammadisc {

struct LiftingOptions {
  int samples = 20;
  double norm_tol = 1e-9;        // ‖Y‖ ≤ ‖X‖ + norm_tol·(1 + ‖X‖)
  double intertwine_tol = 1e-8;  // ‖YJ − JX‖_F
  double theta_tol = 1e-8;       // ‖lift − Θ‖_F
  double functorial_tol = 1e-7;
  std::uint64_t seed = 0;
};

inline VerificationReport verify_lifting(const GammaTuple& t, const LiftingOptions& opt = {}) {
  VerificationReport rep;
  rep.tolerances["lift.norm_tol"] = opt.norm_tol;
  rep.tolerances["lift.intertwine_tol"] = opt.intertwine_tol;
  Stopwatch sw;
  CanonicalExtension ext;
  try {
    ext = canonical_extension(t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PureTuple) {
      rep.skip("lifting", "Q = 0: nothing to lift into");
      return rep;
    }
    rep.expect("canonical_extension", false, e.what());
    return rep;
  }
  const auto sm = t.members();
  const auto cs = commutant(sm);
  const auto cb = extension_commutant(ext);
  std::mt19937_64 rng(opt.seed);

  double norm_excess = 0.0, intertwine = 0.0, theta_gap = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    const CMatrix x = random_combination(cs.basis, t.n, t.n, rng);
    const auto lr = lift_commutant(ext, x);
    norm_excess = std::max(norm_excess, (lr.norm_Y - lr.norm_X) / (1.0 + lr.norm_X));
    intertwine = std::max(intertwine, lr.intertwine_residual);
    theta_gap = std::max(theta_gap, fro(lr.Y - theta(ext, cb, x)));
  }
  rep.check("norm_contraction", std::max(0.0, norm_excess), opt.norm_tol,
            std::to_string(opt.samples) + " commutant samples");
  rep.check("intertwining", intertwine, opt.intertwine_tol);
  rep.check("agrees_with_theta", theta_gap, opt.theta_tol);

  const CMatrix x1 = random_combination(cs.basis, t.n, t.n, rng);
  const CMatrix x2 = random_combination(cs.basis, t.n, t.n, rng);
  const CMatrix y12 = lift_commutant(ext, x1 * x2).Y;
  const CMatrix y1y2 = lift_commutant(ext, x1).Y * lift_commutant(ext, x2).Y;
  rep.check("functoriality", fro(y12 - y1y2) / (1.0 + fro(y1y2)), opt.functorial_tol);
  rep.check("unital", fro(lift_commutant(ext, identity(t.n)).Y - identity(ext.r)), opt.intertwine_tol);

  // Intertwining corollary on a unitarily rotated copy of the module.
  const CMatrix w = haar_unitary(t.n, rng);
  const auto ext2 = canonical_extension(conjugate(t, w));
  const auto lr = lift_intertwiner(ext, ext2, w);
  double module = fro(lr.Y * ext.U - ext2.U * lr.Y);
  for (std::size_t i = 0; i < ext.R.size(); ++i) module = std::max(module, fro(lr.Y * ext.R[i] - ext2.R[i] * lr.Y));
  rep.check("intertwiner_norm", std::max(0.0, lr.norm_Y - lr.norm_X), opt.norm_tol * (1.0 + lr.norm_X));
  rep.check("intertwiner_embedding", lr.intertwine_residual, opt.intertwine_tol);
  rep.check("intertwiner_module_map", module, opt.intertwine_tol);
  rep.timings_ms["lift"] = sw.ms();
  return rep;
}

struct DecayOptions {
  int j_max = 200;
  double pure_factor = 1e-6;    // pure: last < pure_factor·(first + 1)
  double unitary_tol = 1e-9;    // Γ_d-unitary: every entry below this
  double bound_tol = 1e-9;      // slack in the per-vector defect bound
  std::uint64_t seed = 0;
};

inline VerificationReport verify_decay(const GammaTuple& t, const DecayOptions& opt = {}) {
  VerificationReport rep;
  rep.tolerances["decay.pure_factor"] = opt.pure_factor;
  rep.tolerances["decay.unitary_tol"] = opt.unitary_tol;
  Stopwatch sw;
  const bool pure = is_pure(t);
  bool unitary = false;
  try {
    unitary = classify_gamma_unitary(t);
  } catch (const Error&) {
    unitary = false;
  }
  std::optional<FundamentalSet> fs;
  try {
    fs = fundamental_operators(t);
  } catch (const Error&) {
  }
  std::mt19937_64 rng(opt.seed);
  for (int i = 1; i < t.d; ++i) {
    const auto prof = decay_profile(t, i, opt.j_max);
    const std::string tag = "i=" + std::to_string(i);
    rep.check("non_increasing_" + tag, std::max(0.0, prof.back() - prof.front()), opt.bound_tol);
    if (pure)
      rep.check("pure_decay_" + tag, prof.back() / (prof.front() + 1.0), opt.pure_factor,
                "last/(first+1) at j = " + std::to_string(opt.j_max));
    if (unitary)
      rep.check("unitary_flat_" + tag, *std::max_element(prof.begin(), prof.end()), opt.unitary_tol);
    if (fs && fs->F[static_cast<std::size_t>(t.d - i - 1)].size() > 0) {
      const double fn = op_norm(fs->ambient(t.d - i));
      const CMatrix x0 = t.s(t.d - i) - t.s(i).adjoint() * t.P;
      double excess = 0.0;
      for (int trial = 0; trial < 3; ++trial) {
        CVector h = random_ginibre(t.n, 1, rng).col(0);
        h.normalize();
        CMatrix x = x0;
        CVector ph = h;
        for (int j = 0; j <= std::min(opt.j_max, 60); ++j) {
          const double lhs = (x * ph).norm();
          const double rhs = fn * (fs->D_P * ph).norm();
          excess = std::max(excess, lhs - rhs);
          ph = t.P * ph;
          x = (t.P.adjoint() * x).eval();
        }
      }
      rep.check("defect_bound_" + tag, std::max(0.0, excess), 1e-8 * (1.0 + fn), "‖F‖·‖D_P P^j h‖ bound");
    }
  }
  rep.timings_ms["decay"] = sw.ms();
  return rep;
}

inline VerificationReport verify_fundamental(const GammaTuple& t, double tol = 1e-8) {
  VerificationReport rep;
  rep.tolerances["fo.tol"] = tol;
  Stopwatch sw;
  FundamentalSet fs;
  try {
    fs = fundamental_operators(t);
  } catch (const Error& e) {
    rep.expect("defect_operator", false, e.what());
    return rep;
  }
  for (int i = 1; i < t.d; ++i)
    rep.check("residual_i=" + std::to_string(i), fs.residuals[static_cast<std::size_t>(i - 1)],
              tol * (1.0 + op_norm(t.s(i))), "rank D_P = " + std::to_string(fs.defect_basis.cols()));
  if (t.d == 2 && t.n == 1 && std::abs(t.P(0, 0)) < 1.0 - 1e-12) {
    const Complex s = t.S[0](0, 0), p = t.P(0, 0);
    const Complex closed = (s - std::conj(s) * p) / (1.0 - std::norm(p));
    rep.check("scalar_closed_form", std::abs(fs.ambient(1)(0, 0) - closed), 1e-12);
  }
  rep.timings_ms["fo"] = sw.ms();
  return rep;
}

inline VerificationReport verify_projection(const GammaTuple& t, double tol = 1e-8, int trials = 50,
                                            std::uint64_t seed = 0) {
  VerificationReport rep;
  ToeplitzProjection phi;
  try {
    phi = toeplitz_projection(t.P);
  } catch (const Error& e) {
    rep.expect("toeplitz_projection", false, e.what());
    return rep;
  }
  rep.append(projection_report(phi, t.P, tol));
  rep.append(choi_effros_check(phi, trials, seed, tol, &t.P));
  return rep;
}

}  // namespace gammadisc
