#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dcone/conformal.hpp"

using namespace dcone;

namespace {
std::mt19937_64 rng(0x5eed0002);
double urand(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}
Vec3 rand_dir() {
  while (true) {
    Vec3 v(urand(-1, 1), urand(-1, 1), urand(-1, 1));
    double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}
FourVector rand_in_cone() {  // |x0| + |x| < 1
  double x0 = urand(-0.98, 0.98);
  double r = urand(0.0, 0.99 * (1.0 - std::abs(x0)));
  return FourVector(x0, r * rand_dir());
}
FourVector rand_x(double s = 2.0) {
  return FourVector(urand(-s, s), Vec3(urand(-s, s), urand(-s, s), urand(-s, s)));
}
double fdiff(const FourVector& a, const FourVector& b) {
  return std::max(std::abs(a.x0 - b.x0), (a.x - b.x).cwiseAbs().maxCoeff());
}
}  // namespace

TEST_CASE("tau equals the 2x2 determinant form") {
  for (int i = 0; i < 2000; ++i) {
    double l = urand(-3, 3);
    FourVector x = rand_x();
    Mat2 m = std::cosh(0.5 * l) * pauli(0) - std::sinh(0.5 * l) * slash2(x);
    CHECK(std::abs(tau(l, x) - m.determinant().real()) < 1e-12);
  }
}

TEST_CASE("tau light-cone and shifted-sphere factorisations") {
  for (int i = 0; i < 2000; ++i) {
    double l = urand(-3, 3);
    if (std::abs(l) < 1e-3) continue;
    FourVector x = rand_x();
    LightconeCoords lc = lightcone_coords(x);
    double el = std::exp(l);
    double lcform = 0.25 / el * ((1 + lc.u) + el * (1 - lc.u)) * ((1 + lc.v) + el * (1 - lc.v));
    CHECK(std::abs(tau(l, x) - lcform) < 1e-11);
    double sh2 = std::sinh(0.5 * l) * std::sinh(0.5 * l);
    double ct = 1.0 / std::tanh(0.5 * l);
    double sphere = sh2 * ((x.x0 - ct) * (x.x0 - ct) - x.x.squaredNorm());
    CHECK(std::abs(tau(l, x) - sphere) < 1e-10);
  }
}

TEST_CASE("flow group law and double-cone invariance") {
  for (int i = 0; i < 2000; ++i) {
    double l = urand(-1, 1), m = urand(-1, 1);
    FourVector x = rand_in_cone();
    FourVector a = nu(l, nu(m, x));
    FourVector b = nu(l + m, x);
    CHECK(fdiff(a, b) < 1e-10);
    FourVector c = nu(urand(-3, 3), x);
    CHECK(std::abs(c.x0) + c.radius() < 1.0 + 1e-12);
  }
  CHECK(fdiff(nu(0.7, FourVector(0, Vec3::Zero())),
              FourVector(-std::tanh(0.35), Vec3::Zero())) < 1e-15);
}

TEST_CASE("unit sphere at t = 0 is pointwise fixed") {
  for (int i = 0; i < 500; ++i) {
    FourVector x(0.0, rand_dir());
    CHECK(fdiff(nu(urand(-3, 3), x), x) < 1e-12);
  }
}

TEST_CASE("tau inverse relation along the flow") {
  int done = 0;
  while (done < 2000) {
    double l = urand(-2, 2);
    FourVector x = rand_x(3.0);
    double t = tau(l, x);
    if (std::abs(t) < 1e-3) continue;
    double t2 = tau(-l, nu(l, x));
    CHECK(std::abs(t2 * t - 1.0) < 1e-9);
    CHECK(t2 * t > 0);
    ++done;
  }
}

TEST_CASE("jacobian matches finite differences") {
  int done = 0;
  while (done < 500) {
    double l = urand(-1, 1);
    FourVector x = rand_in_cone();
    if (std::abs(tau(l, x)) < 0.05) continue;
    const double d = 1e-5;
    Eigen::Matrix4d J;
    for (int mu = 0; mu < 4; ++mu) {
      FourVector xp = x, xm = x;
      (mu == 0 ? xp.x0 : xp.x[mu - 1]) += d;
      (mu == 0 ? xm.x0 : xm.x[mu - 1]) -= d;
      FourVector fp = nu(l, xp), fm = nu(l, xm);
      J(0, mu) = (fp.x0 - fm.x0) / (2 * d);
      for (int k = 0; k < 3; ++k) J(k + 1, mu) = (fp.x[k] - fm.x[k]) / (2 * d);
    }
    CHECK(std::abs(J.determinant() - jacobian(l, x)) <
          1e-6 * std::abs(jacobian(l, x)) + 1e-9);
    ++done;
  }
}

TEST_CASE("light-cone coordinates round trip") {
  for (int i = 0; i < 2000; ++i) {
    FourVector x = rand_x();
    CHECK(fdiff(from_lightcone(lightcone_coords(x)), x) < 1e-13);
  }
}

TEST_CASE("flow in light-cone coordinates on both branches") {
  int pos = 0, neg = 0;
  while (pos < 1000 || neg < 1000) {
    double l = urand(-2, 2);
    FourVector x = rand_x(3.0);
    double t = tau(l, x);
    if (std::abs(t) < 1e-2 || x.radius() < 1e-3) continue;
    (t > 0 ? pos : neg)++;
    FourVector a = nu(l, x);
    FourVector b = from_lightcone(nu_lightcone(l, lightcone_coords(x)));
    CHECK(fdiff(a, b) < 1e-9);
  }
}

TEST_CASE("profile identities") {
  CHECK(f_profile(0.4, 1.0) == 1.0);
  CHECK(f_profile(0.4, -1.0) == -1.0);
  for (int i = 0; i < 2000; ++i) {
    double l = urand(-2, 2), u = urand(-3, 3);
    if (std::abs(l) < 1e-3) continue;
    double ct = 1.0 / std::tanh(0.5 * l);
    if (std::abs(u - ct) < 1e-2) continue;
    CHECK(std::abs(f_profile(0.0, u) - u) < 1e-15);
    CHECK(std::abs(f_profile(-l, f_profile(l, u)) - u) < 1e-9 * std::max(1.0, std::abs(u)));
    CHECK(std::abs(-f_profile(l, -u) - f_profile(-l, u)) <
          1e-12 * std::max(1.0, std::abs(f_profile(-l, u))));
  }
  // positive lambda pushes interior points toward -1
  CHECK(f_profile(1.0, 0.3) < 0.3);
  CHECK(f_profile(-1.0, 0.3) > 0.3);
}

TEST_CASE("singular set raises") {
  double l = 1.0;
  double ct = 1.0 / std::tanh(0.5 * l);
  FourVector x(ct + 1.0, Vec3(0, 0, 1.0));
  CHECK(std::abs(tau(l, x)) < 1e-12);
  CHECK_THROWS_AS(nu(l, x), SingularPoint);
  CHECK_THROWS_AS(jacobian(l, x), SingularPoint);
}

TEST_CASE("moebius action of the boost subgroup is the flow") {
  for (int i = 0; i < 500; ++i) {
    double s = urand(-3, 3);
    FourVector x = rand_in_cone();
    TubePoint z;
    z.z0 = cd(x.x0, 1e-10);
    z.z = x.x.cast<cd>();
    TubePoint w = mobius(boost_matrix(s), z);
    FourVector y = nu(s, x);
    CHECK(std::abs(w.z0 - cd(y.x0, 0)) < 1e-8);
    CHECK((w.z - y.x.cast<cd>()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("moebius translations and input validation") {
  for (int i = 0; i < 200; ++i) {
    FourVector y = rand_x(), x = rand_x();
    TubePoint z;
    z.z0 = cd(x.x0, 0.5);
    z.z = x.x.cast<cd>();
    TubePoint w = mobius(poincare_matrix(pauli(0), y), z);
    CHECK(std::abs(w.z0 - (z.z0 + cd(y.x0))) < 1e-12);
    CHECK((w.z - (z.z + y.x.cast<cd>())).cwiseAbs().maxCoeff() < 1e-12);
  }
  Mat4 bad = 2.0 * Mat4::Identity();
  CHECK_THROWS_AS(mobius(bad, TubePoint{}), std::invalid_argument);
}
