#pragma once
// Conformal flow of the unit double cone O1 = {|x0| + |x| < 1}: the
// denominator tau, the flow map nu_lambda with its Jacobian, light-cone
// coordinates, the one-dimensional boundary profile f_lambda, and the
// Moebius action of 4x4 conformal matrices on the forward tube.

#include <stdexcept>

#include "dcone/smat.hpp"

namespace dcone {

// |tau| at or below this counts as the singular set of the flow.
inline constexpr double kSingularTau = 1e-9;

struct SingularPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// tau(lambda, x) = (1+cosh l)/2 - x^2 (1-cosh l)/2 - x0 sinh l.
double tau(double lambda, const FourVector& x);

// Flow map nu_lambda(x); throws SingularPoint when |tau| <= kSingularTau.
FourVector nu(double lambda, const FourVector& x);

// Jacobian determinant of nu_lambda at x: sgn(tau)/tau^4.
double jacobian(double lambda, const FourVector& x);

struct LightconeCoords {
  double u = 0, v = 0;      // u = x0 + |x|, v = x0 - |x|
  double theta = 0, phi = 0;
};
LightconeCoords lightcone_coords(const FourVector& x);
FourVector from_lightcone(const LightconeCoords& lc);

// Boundary profile f_lambda(u) = ((1+u) - e^l (1-u)) / ((1+u) + e^l (1-u)).
double f_profile(double lambda, double u);

// Flow in light-cone coordinates: (u,v) -> (f(u), f(v)) on the tau > 0
// branch, (u,v) -> (f(v), f(u)) with antipodal angles on tau < 0.
LightconeCoords nu_lightcone(double lambda, const LightconeCoords& lc);

// Point of the forward tube R^4 + i V_+ (or its closure).
struct TubePoint {
  cd z0{0, 0};
  Eigen::Vector3cd z = Eigen::Vector3cd::Zero();
};

// Moebius action z' determined by (a z + b)(c z + d)^{-1} in the 2x2-block
// sense. Requires g in SU(2,2); throws SingularPoint when cz+d is singular.
TubePoint mobius(const Mat4& g, const TubePoint& z);

}  // namespace dcone
