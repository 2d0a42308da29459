#pragma once
// Weyl waves (+ sigma.grad chirality): lattice Cauchy data at t = 0, the
// spectral representation, time evolution, pointwise evaluation, the
// complex structure iota, the invariant inner product, and the unitary
// map to helicity amplitude pairs.

#include <vector>

#include "dcone/grid.hpp"

namespace dcone {

struct ProfileTerm {
  enum class Type { Bump, Gaussian };
  Type type = Type::Bump;
  Vec3 center = Vec3::Zero();
  double radius = 0.5;  // bump support radius; gaussian truncation radius
  double width = 0.2;   // gaussian sigma (unused for bumps)
  int degree = 6;       // bump exponent; radial power (d/width)^degree for gaussians
  Sp2 spinor = Sp2(1, 0);
};

// Scalar profile factor at x (exactly zero outside the radius).
double profile_value(const ProfileTerm& t, const Vec3& x);

struct WeylData {
  Field f;         // nc = 2, Cauchy data at t = 0
  double R = 1.0;  // declared support radius
};

struct SpectralData {
  Field f;         // nc = 2, momentum samples of the Cauchy data
  double R = 1.0;
};

WeylData synthesize_cauchy(const GridSpec& g, const std::vector<ProfileTerm>& terms);

// Fraction of the position-space mass outside radius R.
double support_leak(const WeylData& w, double R);

SpectralData transform(const WeylData& w);
WeylData inverse_transform(const SpectralData& s);

// Advance the Cauchy data by t with the spectral propagator
// cos(|p|t) - i sin(|p|t) (p.sigma)/|p|  (identity at p = 0).
SpectralData evolve(const SpectralData& s, double t);

// Direct momentum-sum evaluation of the wave at an event.
Sp2 evaluate(const SpectralData& s, const FourVector& x);

// Mode-wise complex structure iota(p) = i (p.sigma)/|p| (zeroes the p = 0 mode).
SpectralData apply_iota(const SpectralData& s);

// Invariant inner product. Per mode this reduces to
//   Re(a^dag b) + i Im(a^dag (p.sigma/|p|) b);
// the p = 0 mode carries zero weight (matching v_map and iota).
cd inner(const SpectralData& a, const SpectralData& b);
double norm2(const SpectralData& a);
double norm2_position(const WeylData& w);
double dist2(const Field& a, const Field& b);  // L2/ell2 distance of raw fields

// Helicity amplitude pair: channel 0 holds l(p), channel 1 holds h(p).
struct Amplitudes {
  Field f;         // nc = 2 scalar channels
  double R = 1.0;
};

Amplitudes v_map(const SpectralData& s);
SpectralData v_inverse(const Amplitudes& a);
double norm2_amplitudes(const Amplitudes& a);  // plain sum |l|^2 + |h|^2 dp^3

}  // namespace dcone
