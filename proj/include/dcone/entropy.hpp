#pragma once
// Relative entropy of normalized self-conjugate one-particle states with
// Cauchy data in the unit ball, computed by three independent routes:
// through the flow generator, through a momentum-space quadrature, and
// through the weighted integral of the energy density profile.

#include <stdexcept>
#include <vector>

#include "dcone/dirac.hpp"

namespace dcone {

class NotNormalized : public std::runtime_error {
 public:
  explicit NotNormalized(const std::string& what) : std::runtime_error(what) {}
};

class SupportViolation : public std::runtime_error {
 public:
  explicit SupportViolation(const std::string& what) : std::runtime_error(what) {}
};

struct EntropyReport {
  double s_generator = 0;
  double s_fourier = 0;
  double s_energy = 0;
  double norm_check = 0;    // | ||psi|| - 1 |
  double support_leak = 0;  // mass fraction of psi0 outside the unit ball
  double dev_generator_fourier = 0;   // pairwise relative deviations,
  double dev_generator_energy = 0;    // reported as-is, never clamped
  double dev_fourier_energy = 0;
};

// Route 1: -2 Im <psi, K psi> in the invariant inner product.
double entropy_via_generator(const MajoranaState& m);

// Route 2: momentum quadrature of
//   (1/4pi^2) sum dp^3/|p| [ |p|^2 F^dag (1 + D^2) F + F^dag p.D F
//                            + i p_j F^dag sigma^{jk} D_k F ],
// where F are the momentum samples and D_k, D^2 are the transforms of
// (-i x_k) and (-|x|^2) times the Cauchy data.
double entropy_fourier(const MajoranaState& m);

// Energy density samples t(x) (node-ordered). The imaginary residue of the
// assembled bilinear, relative to max |t|, lands in *imag_residue if given.
std::vector<double> energy_density_profile(const MajoranaState& m,
                                           double* imag_residue = nullptr);

// Route 3: (1/4pi^2) sum (1 - r^2) t(x) h^3 over the grid.
double entropy_energy_density(const MajoranaState& m);

// Total energy from the spectrum, sum dp^3 |p| ||F(p)||^2; the plain
// integral of the density profile must reproduce it.
double spectral_energy(const MajoranaState& m);

// Direct double-momentum-sum evaluation of t at one grid node (both momenta
// run over the full lattice, p = 0 and q = 0 dropped). O(N^6) per full
// profile; restricted to validation grids N <= 16.
double energy_density_direct(const MajoranaState& m, long node);

// All three routes plus the precondition diagnostics in one record.
EntropyReport entropy_report(const MajoranaState& m);

}  // namespace dcone
