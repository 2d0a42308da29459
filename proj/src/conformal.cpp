#include "dcone/conformal.hpp"

#include <cmath>

namespace dcone {

double tau(double lambda, const FourVector& x) {
  const double ch = std::cosh(lambda), sh = std::sinh(lambda);
  return 0.5 * (1.0 + ch) - 0.5 * x.square() * (1.0 - ch) - x.x0 * sh;
}

FourVector nu(double lambda, const FourVector& x) {
  const double t = tau(lambda, x);
  if (std::abs(t) <= kSingularTau) throw SingularPoint("flow map hit the singular set");
  const double ch = std::cosh(lambda), sh = std::sinh(lambda);
  const double y0 = x.x0 * ch - 0.5 * (1.0 + x.square()) * sh;
  return FourVector(y0 / t, x.x / t);
}

double jacobian(double lambda, const FourVector& x) {
  const double t = tau(lambda, x);
  if (std::abs(t) <= kSingularTau) throw SingularPoint("jacobian at the singular set");
  const double t2 = t * t;
  return (t > 0 ? 1.0 : -1.0) / (t2 * t2);
}

LightconeCoords lightcone_coords(const FourVector& x) {
  LightconeCoords lc;
  const double r = x.radius();
  lc.u = x.x0 + r;
  lc.v = x.x0 - r;
  polar_angles(x.x, lc.theta, lc.phi);
  return lc;
}

FourVector from_lightcone(const LightconeCoords& lc) {
  const double r = 0.5 * (lc.u - lc.v);
  const double st = std::sin(lc.theta);
  return FourVector(0.5 * (lc.u + lc.v),
                    Vec3(r * st * std::cos(lc.phi), r * st * std::sin(lc.phi),
                         r * std::cos(lc.theta)));
}

double f_profile(double lambda, double u) {
  const double el = std::exp(lambda);
  const double den = (1.0 + u) + el * (1.0 - u);
  if (std::abs(den) <= kSingularTau) throw SingularPoint("profile pole");
  return ((1.0 + u) - el * (1.0 - u)) / den;
}

LightconeCoords nu_lightcone(double lambda, const LightconeCoords& lc) {
  // branch sign = sign of tau, via the factorised light-cone form
  const double el = std::exp(lambda);
  const double du = (1.0 + lc.u) + el * (1.0 - lc.u);
  const double dv = (1.0 + lc.v) + el * (1.0 - lc.v);
  LightconeCoords out;
  if (du * dv > 0) {
    out.u = f_profile(lambda, lc.u);
    out.v = f_profile(lambda, lc.v);
    out.theta = lc.theta;
    out.phi = lc.phi;
  } else {
    out.u = f_profile(lambda, lc.v);
    out.v = f_profile(lambda, lc.u);
    out.theta = M_PI - lc.theta;
    out.phi = lc.phi + M_PI;
    if (out.phi >= 2.0 * M_PI) out.phi -= 2.0 * M_PI;
  }
  return out;
}

TubePoint mobius(const Mat4& g, const TubePoint& z) {
  if (!is_su22(g)) throw std::invalid_argument("mobius: matrix not in SU(2,2)");
  Mat2 zs = z.z0 * pauli(0);
  for (int k = 0; k < 3; ++k) zs += z.z[k] * pauli(k + 1);
  const Mat2 a = g.block<2, 2>(0, 0), b = g.block<2, 2>(0, 2);
  const Mat2 c = g.block<2, 2>(2, 0), d = g.block<2, 2>(2, 2);
  const Mat2 den = c * zs + d;
  if (std::abs(den.determinant()) <= kSingularTau)
    throw SingularPoint("mobius: singular denominator");
  const Mat2 zs2 = (a * zs + b) * den.inverse();
  TubePoint out;
  out.z0 = 0.5 * zs2.trace();
  for (int k = 0; k < 3; ++k) out.z[k] = 0.5 * (pauli(k + 1) * zs2).trace();
  return out;
}

}  // namespace dcone
