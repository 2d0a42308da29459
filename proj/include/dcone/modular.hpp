#pragma once
// Modular group of the unit double cone acting on Weyl waves: the unitary
// family Delta^{i lambda} realized through the conformal flow of the t = 0
// slice, its generator K, the test-function transport E_lambda, and
// finite-difference convergence diagnostics for d/dlambda at 0.

#include <vector>

#include "dcone/conformal.hpp"
#include "dcone/testfunc.hpp"
#include "dcone/wave.hpp"

namespace dcone {

// Largest admissible |lambda| for Cauchy data supported in radius R < 1:
// keeps the transported support radius f_{-4 pi |l|}(R) below 2R and the
// t = 0 singular sphere r = coth(pi |l|) outside 2R. Returns +inf when
// neither condition ever binds (R = 1/2).
double lambda_max(double R);

struct ModularDiagnostics {
  double norm_in = 0;
  double norm_out = 0;
  double support_radius_out = 0;
};

// (Delta^{i lambda} Phi)_0(x) =
//     tau(-2 pi l, (0,x))^{-2} (cosh(pi l) 1 + sinh(pi l) x.sigma)
//         Phi(nu_{-2 pi l}(0,x)),
// the spacetime value taken from the spectral representation of Phi.
// With a support certificate (s.R < 1), nodes past the singular sphere
// r >= coth(pi|l|), with |tau| below the singular threshold, or outside
// the transported support (radius f_{-2 pi |l|}(R), refined by the
// light-cone shell of the flowed point) are exactly zero.  Data without a
// certificate (s.R >= 1, e.g. after the nonlocal helicity multiplier) is
// flowed by the same global conformal unitary wherever the flowed point
// stays inside the periodic cell; |lambda| <= 0.25 keeps the singular
// sphere away from the unit cone.
WeylData modular_apply(double lambda, const SpectralData& s,
                       ModularDiagnostics* diag = nullptr);
WeylData modular_apply(double lambda, const WeylData& w,
                       ModularDiagnostics* diag = nullptr);

struct ModularApplication {
  double lambda = 0;
  WeylData input;
  WeylData output;
  ModularDiagnostics diagnostics;
};
ModularApplication modular_application(double lambda, const WeylData& w);

// (K Phi)_0(x) = -pi [ (1 - r^2) sigma.grad Phi_0(x) - (x.sigma) Phi_0(x) ],
// with the gradient evaluated spectrally.
WeylData modular_generator(const WeylData& w);

// (E_lambda f)(x) = tau(-2 pi l, x)^{-2}
//     [cosh(pi l) 1 - sinh(pi l) slash(nu_{-2 pi l}(x))]^T f(nu_{-2 pi l}(x)).
// Throws SingularPoint on the singular set of the flow.
Sp2 e_lambda(double lambda, const TestFunctionSpec& f, const FourVector& x);

// Cauchy data of the wave with test function E_lambda f, produced by
// numerically transforming the pointwise values: Gauss-Legendre quadrature
// in time over the transported support window, DFT in space, and the
// on-shell recombination (2|p|)^{-1} [pslash_+ F(p_+) - pslash_- F(p_-)].
WeylData wave_from_elambda(double lambda, const TestFunctionSpec& f,
                           const GridSpec& g, int time_nodes = 96);

struct ConvergenceRow {
  double lambda = 0;
  double err_forward = 0;  // ||(D^{il} - 1)Phi / l - K Phi|| / ||K Phi||
  double err_central = 0;  // ||(D^{il} - D^{-il})Phi / (2l) - K Phi|| / ||K Phi||
};
std::vector<ConvergenceRow> generator_convergence(
    const WeylData& w, const std::vector<double>& lambdas);

}  // namespace dcone
