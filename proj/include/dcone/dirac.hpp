#pragma once
// 4-component layer: chiral stacks of 2-component Cauchy data, the
// 4-component inner product and complex structure, the self-conjugate
// (reality-constrained) subspace, and the flow generator in 4-component
// form. The upper block propagates right-handed, the lower left-handed.

#include "dcone/wave.hpp"

namespace dcone {

// Position-space 4-component Cauchy data at t = 0 (nc = 4: upper pair,
// then lower pair) with a declared support radius.
struct DiracData {
  Field f;
  double R = 1.0;
};

// Momentum samples of 4-component Cauchy data.
struct DiracSpectral {
  Field f;
  double R = 1.0;
};

// Self-conjugate state stored together with the 2-component data that
// generated it, so two-route checks compare like against like instead of
// reconstructing the generator.
struct MajoranaState {
  DiracData psi;
  WeylData phi;
};

// Stack right-handed data over left-handed data. Throws on grid mismatch.
DiracData assemble(const WeylData& right, const WeylData& left);

// Extract one chiral pair (block 0 = upper/right, 1 = lower/left).
WeylData chiral_block(const DiracData& d, int block);

// Cauchy data of x -> f(-x) on the periodic lattice (exact index map).
WeylData parity_reflect(const WeylData& w);

DiracSpectral transform_dirac(const DiracData& d);
DiracData inverse_transform_dirac(const DiracSpectral& s);

// Advance by t: cos(|p|t) -/+ i sin(|p|t) (p.sigma)/|p| on the upper/lower
// block (identity at p = 0). Block-diagonal, so chiral blocks evolve
// independently.
DiracSpectral evolve_dirac(const DiracSpectral& s, double t);

// Unitary embedding phi -> (phi, sigma2 conj(phi)) / sqrt(2) into the
// self-conjugate subspace.
MajoranaState majorana_embed(const WeylData& phi);

// Relative distance of psi0 from its own conjugation image: 0 on the
// self-conjugate subspace, 1 on a single chiral block.
double majorana_defect(const DiracData& d);

// Invariant inner product of 4-component waves. Per mode this reduces to
//   Re(a^dag b) + i Im(a^dag Q b),  Q = (p_j/|p|) diag(sigma_j, -sigma_j);
// the p = 0 mode carries zero weight. On chiral states it is the block sum
// of the 2-component products.
cd inner_dirac(const DiracSpectral& a, const DiracSpectral& b);
double norm2_dirac(const DiracSpectral& a);

// Mode-wise complex structure i Q (zeroes the p = 0 mode).
DiracSpectral apply_iota_dirac(const DiracSpectral& s);

// Flow generator in 4-component form:
//   -pi [ (1 - r^2) d_k - x_k ] diag(sigma_k, -sigma_k) psi0,
// with spectral derivatives. Local, so the support radius is preserved.
DiracData k_dirac(const DiracData& d);

}  // namespace dcone
