#pragma once
// Small-matrix layer: Pauli/Dirac algebra, on-shell matrices for massless
// momenta, helicity spinors, and the 4x4 conformal-group matrices used by
// the Moebius action.

#include <complex>
#include <utility>
#include <Eigen/Dense>

namespace dcone {

using cd   = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Sp2  = Eigen::Vector2cd;
using Sp4  = Eigen::Vector4cd;
using Vec3 = Eigen::Vector3d;

struct FourVector {
  double x0 = 0.0;
  Vec3 x = Vec3::Zero();

  FourVector() = default;
  FourVector(double t, const Vec3& s) : x0(t), x(s) {}
  FourVector(double t, double x1, double x2, double x3) : x0(t), x(x1, x2, x3) {}

  double square() const { return x0 * x0 - x.squaredNorm(); }  // Minkowski x^2
  double radius() const { return x.norm(); }
};

// Pauli matrices, mu = 0..3 (sigma_0 = identity).
const Mat2& pauli(int mu);

// x0 +/- x.sigma ("under" carries the plus sign).
enum class Slash { Under, Tilde };
Mat2 slash2(const FourVector& v, Slash s = Slash::Under);

// Matrices of the two massless on-shell lifts p_pm = (+-|p|, p) of a spatial
// momentum; returns (under(p_plus), under(p_minus)). Throws on p = 0.
std::pair<Mat2, Mat2> onshell_matrices(const Vec3& p);

// Polar angles of p with theta in [0,pi], phi in [0,2pi); phi := 0 on the
// 3-axis (both poles) and for p = 0.
void polar_angles(const Vec3& p, double& theta, double& phi);

// Positive-helicity spinor (cos(theta/2), sin(theta/2) e^{i phi}).
Sp2 nu0(const Vec3& p);

// i (p.sigma)/|p|; zero matrix at p = 0.
Mat2 iota_matrix(const Vec3& p);

// ---- 4x4 layer (chiral basis) ----

const Mat4& gamma(int mu);          // gamma^0..gamma^3
const Mat4& charge_conj();          // C = diag(-sigma2, sigma2)
const Mat4& gamma0_gamma(int k);    // gamma^0 gamma^k = diag(sigma_k, -sigma_k)
Mat4 sigma_jk(int j, int k);        // (i/2)[gamma^j, gamma^k]
const Mat4& big_sigma(int h);       // Sigma_h = diag(sigma_h, sigma_h)
Mat4 feynman_slash(const FourVector& p);  // p_mu gamma^mu

// 4x4 iota: diag(iota(p), iota(p)^dagger).
Mat4 iota_matrix4(const Vec3& p);

// Conformal 2x2-block matrices acting on the tube.
const Mat4& su22_form();            // B = [[0,-i],[i,0]] blocks
bool is_su22(const Mat4& g, double tol = 1e-10);
Mat4 boost_matrix(double lambda);   // e(lambda), the double-cone flow subgroup
Mat4 poincare_matrix(const Mat2& a, const FourVector& y);  // p(a, y)

}  // namespace dcone
