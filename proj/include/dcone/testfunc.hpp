#pragma once
// Separable spacetime test functions f(x0, x) = sum_i g_i(x0) h_i(x) chi_i
// with real scalar profiles and constant spinor weights, their closed-form
// frequency-side factors, the induced waves, and the helicity amplitudes
// of those waves.

#include <vector>

#include "dcone/wave.hpp"

namespace dcone {

struct TimeProfile {
  enum class Type { Bump, Gaussian };
  Type type = Type::Bump;
  double center = 0.0;
  double half_width = 0.25;  // bump half-width / gaussian truncation half-width
  double width = 0.1;        // gaussian sigma
  int degree = 6;            // bump exponent
};

struct SpaceTimeTerm {
  TimeProfile time;
  ProfileTerm space;  // spinor field of ProfileTerm is ignored here
  Sp2 chi = Sp2(1, 0);
};

struct TestFunctionSpec {
  std::vector<SpaceTimeTerm> terms;
};

// j_n(z)/z^n, stable at z -> 0 (limit 1/(2n+1)!!).
double scaled_sph_bessel(int n, double z);

double time_value(const TimeProfile& t, double x0);
cd time_hat(const TimeProfile& t, double p0);       // int g(t) e^{+i p0 t} dt
cd space_hat(const ProfileTerm& s, const Vec3& p);  // int h(x) e^{-i p.x} dx

// f at an event and frequency factor of one term: fhat = ghat * shat.
Sp2 testfunction_value(const TestFunctionSpec& f, const FourVector& x);

// Wave generated by the field smeared with conj(f):
//   Fhat0(p) = (2|p|)^{-1} [ under(p_+) fbar^(p_+) - under(p_-) fbar^(p_-) ],
// where fbar^(p_pm) = ghat(+-|p|) shat(p) conj(chi); at p = 0 the limit
// ghat(0) shat(0) conj(chi).
SpectralData wave_from_testfunction(const GridSpec& g, const TestFunctionSpec& f);

// Closed-form helicity amplitudes of that wave:
//   l_f(p) = -(2pi)^{-3/2} ghat(|p|) shat(p) nu0(p)^dag conj(chi)
//   h_f(p) =  (2pi)^{-3/2} ghat(|p|) shat(p) nu0(p)^t chi
void amplitudes_from_testfunction(const TestFunctionSpec& f, const Vec3& p,
                                  cd& l, cd& h);

// Spatial support radius of the t = 0 Cauchy data of the induced wave.
double cauchy_support_radius(const TestFunctionSpec& f);

}  // namespace dcone
