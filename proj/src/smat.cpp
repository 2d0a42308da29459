#include "dcone/smat.hpp"

#include <cmath>
#include <stdexcept>

namespace dcone {

namespace {
constexpr cd I{0.0, 1.0};

Mat2 make_pauli(int mu) {
  Mat2 m;
  switch (mu) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli index");
  }
  return m;
}

Mat4 block22(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
  Mat4 m;
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(0, 2) = b;
  m.block<2, 2>(2, 0) = c;
  m.block<2, 2>(2, 2) = d;
  return m;
}
}  // namespace

const Mat2& pauli(int mu) {
  static const Mat2 s[4] = {make_pauli(0), make_pauli(1), make_pauli(2), make_pauli(3)};
  if (mu < 0 || mu > 3) throw std::out_of_range("pauli index");
  return s[mu];
}

Mat2 slash2(const FourVector& v, Slash s) {
  const double sign = (s == Slash::Under) ? 1.0 : -1.0;
  Mat2 m = v.x0 * pauli(0);
  for (int k = 0; k < 3; ++k) m += sign * v.x[k] * pauli(k + 1);
  return m;
}

std::pair<Mat2, Mat2> onshell_matrices(const Vec3& p) {
  const double ap = p.norm();
  if (ap == 0.0) throw std::domain_error("onshell_matrices: zero momentum");
  return {slash2(FourVector(ap, p)), slash2(FourVector(-ap, p))};
}

void polar_angles(const Vec3& p, double& theta, double& phi) {
  const double ap = p.norm();
  if (ap == 0.0) {
    theta = 0.0;
    phi = 0.0;
    return;
  }
  theta = std::acos(std::clamp(p[2] / ap, -1.0, 1.0));
  const double rho = std::hypot(p[0], p[1]);
  if (rho == 0.0) {  // both poles: fix the phase
    phi = 0.0;
    return;
  }
  phi = std::atan2(p[1], p[0]);
  if (phi < 0.0) phi += 2.0 * M_PI;
}

Sp2 nu0(const Vec3& p) {
  double theta, phi;
  polar_angles(p, theta, phi);
  Sp2 v;
  v << cd(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi);
  return v;
}

Mat2 iota_matrix(const Vec3& p) {
  const double ap = p.norm();
  if (ap == 0.0) return Mat2::Zero();
  Mat2 m = Mat2::Zero();
  for (int k = 0; k < 3; ++k) m += (p[k] / ap) * pauli(k + 1);
  return I * m;
}

const Mat4& gamma(int mu) {
  static const Mat4 g[4] = {
      block22(Mat2::Zero(), -pauli(0), -pauli(0), Mat2::Zero()),
      block22(Mat2::Zero(), pauli(1), -pauli(1), Mat2::Zero()),
      block22(Mat2::Zero(), pauli(2), -pauli(2), Mat2::Zero()),
      block22(Mat2::Zero(), pauli(3), -pauli(3), Mat2::Zero()),
  };
  if (mu < 0 || mu > 3) throw std::out_of_range("gamma index");
  return g[mu];
}

const Mat4& charge_conj() {
  static const Mat4 c = block22(-pauli(2), Mat2::Zero(), Mat2::Zero(), pauli(2));
  return c;
}

const Mat4& gamma0_gamma(int k) {
  static const Mat4 g[3] = {
      block22(pauli(1), Mat2::Zero(), Mat2::Zero(), -pauli(1)),
      block22(pauli(2), Mat2::Zero(), Mat2::Zero(), -pauli(2)),
      block22(pauli(3), Mat2::Zero(), Mat2::Zero(), -pauli(3)),
  };
  if (k < 1 || k > 3) throw std::out_of_range("gamma0_gamma index");
  return g[k - 1];
}

Mat4 sigma_jk(int j, int k) {
  return 0.5 * I * (gamma(j) * gamma(k) - gamma(k) * gamma(j));
}

const Mat4& big_sigma(int h) {
  static const Mat4 s[3] = {
      block22(pauli(1), Mat2::Zero(), Mat2::Zero(), pauli(1)),
      block22(pauli(2), Mat2::Zero(), Mat2::Zero(), pauli(2)),
      block22(pauli(3), Mat2::Zero(), Mat2::Zero(), pauli(3)),
  };
  if (h < 1 || h > 3) throw std::out_of_range("big_sigma index");
  return s[h - 1];
}

// Contracts the tuple components directly: p0 gamma^0 + p_k gamma^k, so that
// gamma^0 pslash(p_pm) = diag(under(p_pm), -under(p_mp)).
Mat4 feynman_slash(const FourVector& p) {
  Mat4 m = p.x0 * gamma(0);
  for (int k = 0; k < 3; ++k) m += p.x[k] * gamma(k + 1);
  return m;
}

Mat4 iota_matrix4(const Vec3& p) {
  const Mat2 io = iota_matrix(p);
  return block22(io, Mat2::Zero(), Mat2::Zero(), io.adjoint());
}

const Mat4& su22_form() {
  static const Mat4 b = block22(Mat2::Zero(), -I * pauli(0), I * pauli(0), Mat2::Zero());
  return b;
}

bool is_su22(const Mat4& g, double tol) {
  const Mat4& b = su22_form();
  if (((g * b * g.adjoint()) - b).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(g.determinant() - cd(1.0, 0.0)) <= tol;
}

Mat4 boost_matrix(double lambda) {
  const double c = std::cosh(0.5 * lambda), s = std::sinh(0.5 * lambda);
  return block22(c * pauli(0), -s * pauli(0), -s * pauli(0), c * pauli(0));
}

Mat4 poincare_matrix(const Mat2& a, const FourVector& y) {
  const Mat2 ainvdag = a.adjoint().inverse();
  return block22(a, slash2(y) * ainvdag, Mat2::Zero(), ainvdag);
}

}  // namespace dcone
