#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "dcone/modular.hpp"
#include "dcone/testfunc.hpp"

using namespace dcone;

namespace {

std::mt19937_64 rng(0x5eed0006);

double urand(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

Sp2 random_spinor() {
  Sp2 s(cd(urand(-1, 1), urand(-1, 1)), cd(urand(-1, 1), urand(-1, 1)));
  if (s.norm() < 1e-3) s = Sp2(1, 0);
  return s / s.norm();
}

// Fourth-order moment-free envelope: sigma^-4 (t^2 - 10 t + 15) exp(-t/2)
// with t = r^2/sigma^2 is the double Laplacian of a Gaussian, so its
// integral and second radial moment vanish identically and its spectrum
// opens as p^4.  Flows of such data stay clean on coarse grids because the
// periodic zero mode carries no mass.
void push_biharmonic_gaussian(std::vector<ProfileTerm>& terms, double sigma,
                              double trunc, const Vec3& center, cd coef,
                              const Sp2& chi) {
  terms.push_back({ProfileTerm::Type::Gaussian, center, trunc, sigma, 0, 15.0 * coef * chi});
  terms.push_back({ProfileTerm::Type::Gaussian, center, trunc, sigma, 2, -10.0 * coef * chi});
  terms.push_back({ProfileTerm::Type::Gaussian, center, trunc, sigma, 4, coef * chi});
}

SpectralData biharmonic_gaussian(const GridSpec& g, double sigma, double trunc,
                                 const Vec3& center, const Sp2& chi) {
  std::vector<ProfileTerm> terms;
  push_biharmonic_gaussian(terms, sigma, trunc, center, 1.0, chi);
  return transform(synthesize_cauchy(g, terms));
}

// Spin-resolved first position moments of a Cauchy slice; used to build
// dipole-free combinations whose helicity transform has no long tails.
std::array<cd, 6> spin_dipole(const GridSpec& g, const Field& f) {
  std::array<cd, 6> d{};
  const int N = g.N;
  for (long node = 0; node < g.n3(); ++node) {
    const Vec3 x(g.coord(static_cast<int>(node / (N * N))),
                 g.coord(static_cast<int>((node / N) % N)),
                 g.coord(static_cast<int>(node % N)));
    for (int s = 0; s < 2; ++s) {
      const cd v = f.at(node, s);
      d[3 * s + 0] += x.x() * v;
      d[3 * s + 1] += x.y() * v;
      d[3 * s + 2] += x.z() * v;
    }
  }
  const double h3 = std::pow(g.h(), 3);
  for (auto& v : d) v *= h3;
  return d;
}

double rel_dist(const GridSpec& g, const Field& a, const Field& b, double norm_ref) {
  return std::sqrt(dist2(a, b) * std::pow(g.h(), 3)) / norm_ref;
}

}  // namespace

TEST_CASE("admissible flow window has the closed form") {
  // 2R > 1: the singular sphere of the flowed chart is the binding bound.
  CHECK(lambda_max(0.8) == doctest::Approx(std::log(2.6 / 0.6) / (2 * M_PI)).epsilon(1e-12));
  // 2R = 1: no finite bound from either branch.
  CHECK(std::isinf(lambda_max(0.5)));
  // 2R < 1: the transported radius reaches the unit sphere first.
  const double ratio = (1.3 * 0.4) / (0.7 * 1.6);
  CHECK(lambda_max(0.3) == doctest::Approx(-std::log(ratio) / (4 * M_PI)).epsilon(1e-12));
}

TEST_CASE("flow rejects steps outside the admissible window") {
  GridSpec g{2.0, 16};
  ProfileTerm narrow{ProfileTerm::Type::Gaussian, Vec3::Zero(), 0.8, 0.2, 0, Sp2(1, 0)};
  SpectralData compact = transform(synthesize_cauchy(g, {narrow}));
  CHECK(compact.R == doctest::Approx(0.8));
  CHECK_THROWS_AS((void)modular_apply(0.24, compact), std::domain_error);
  CHECK_THROWS_AS((void)modular_apply(-0.30, compact), std::domain_error);

  ProfileTerm wide{ProfileTerm::Type::Gaussian, Vec3::Zero(), 1.3, 0.3, 0, Sp2(1, 0)};
  SpectralData unconstrained = transform(synthesize_cauchy(g, {wide}));
  CHECK(unconstrained.R == doctest::Approx(1.3));
  CHECK_THROWS_AS((void)modular_apply(0.26, unconstrained), std::domain_error);
  CHECK_NOTHROW((void)modular_apply(0.25, unconstrained));
}

TEST_CASE("flow at lambda zero is the identity") {
  GridSpec g{2.0, 16};
  ProfileTerm gauss{ProfileTerm::Type::Gaussian, Vec3(0.1, -0.05, 0), 0.7, 0.18, 0,
                    random_spinor()};
  WeylData w = synthesize_cauchy(g, {gauss});
  ModularDiagnostics diag;
  WeylData out = modular_apply(0.0, transform(w), &diag);
  CHECK(dist2(out.f, w.f) < 1e-28);  // one transform round trip
  CHECK(out.R == doctest::Approx(w.R));
  CHECK(diag.norm_out == doctest::Approx(diag.norm_in));
}

TEST_CASE("generator matches the closed form on a smooth Gaussian") {
  // For data exp(-r^2 / 2 sigma^2) chi the generator reduces to
  // pi (x.sigma) [ (1 - r^2)/sigma^2 + 1 ] times the data.
  GridSpec g{2.0, 32};
  const double sigma = 0.28;
  const Sp2 chi = random_spinor();
  ProfileTerm gauss{ProfileTerm::Type::Gaussian, Vec3::Zero(), 1.9, sigma, 0, chi};
  WeylData w = synthesize_cauchy(g, {gauss});
  WeylData k = modular_generator(w);

  double worst = 0.0, scale = 0.0;
  const int N = g.N;
  for (long node = 0; node < g.n3(); ++node) {
    const Vec3 x(g.coord(static_cast<int>(node / (N * N))),
                 g.coord(static_cast<int>((node / N) % N)),
                 g.coord(static_cast<int>(node % N)));
    const double r2 = x.squaredNorm();
    if (std::sqrt(r2) > 1.85) continue;  // skip the truncation shell itself
    const Sp2 phi(w.f.at(node, 0), w.f.at(node, 1));
    const Sp2 expect = M_PI * ((1.0 - r2) / (sigma * sigma) + 1.0) *
                       (slash2(FourVector(0.0, x)) * phi);
    const Sp2 got(k.f.at(node, 0), k.f.at(node, 1));
    worst = std::max(worst, (got - expect).norm());
    scale = std::max(scale, expect.norm());
  }
  CHECK(worst / scale < 1e-7);
}

TEST_CASE("generator is skew-adjoint in the invariant inner product") {
  GridSpec g{2.0, 32};
  SpectralData a = biharmonic_gaussian(g, 0.28, 1.50, Vec3::Zero(), random_spinor());
  SpectralData b = biharmonic_gaussian(g, 0.32, 1.70, Vec3(0.1, -0.07, 0.05), random_spinor());
  SpectralData ka = transform(modular_generator(inverse_transform(a)));
  SpectralData kb = transform(modular_generator(inverse_transform(b)));
  const cd sym = inner(a, kb) + inner(ka, b);
  CHECK(std::abs(sym) / (std::sqrt(norm2(ka) * norm2(b)) +
                         std::sqrt(norm2(a) * norm2(kb))) < 1e-7);
}

TEST_CASE("flow is linear over complex coefficients") {
  GridSpec g{2.0, 32};
  // Equal support certificates keep the two inputs on the same evaluation
  // mask, so linearity must hold to rounding.
  SpectralData a = biharmonic_gaussian(g, 0.26, 0.95, Vec3::Zero(), random_spinor());
  SpectralData b = biharmonic_gaussian(g, 0.30, 0.95, Vec3::Zero(), random_spinor());
  const cd ca(0.3, -0.7), cb(-0.5, 0.2);
  SpectralData combo{Field(g, 2), 0.95};
  for (long m = 0; m < g.n3(); ++m)
    for (int s = 0; s < 2; ++s)
      combo.f.at(m, s) = ca * a.f.at(m, s) + cb * b.f.at(m, s);

  const double lam = 0.05;
  WeylData ua = modular_apply(lam, a);
  WeylData ub = modular_apply(lam, b);
  WeylData uc = modular_apply(lam, combo);
  Field assembled(g, 2);
  for (long m = 0; m < g.n3(); ++m)
    for (int s = 0; s < 2; ++s)
      assembled.at(m, s) = ca * ua.f.at(m, s) + cb * ub.f.at(m, s);
  CHECK(rel_dist(g, uc.f, assembled, std::sqrt(norm2(combo))) < 1e-12);
}

TEST_CASE("position-space entry point agrees with the spectral one") {
  GridSpec g{2.0, 32};
  std::vector<ProfileTerm> terms;
  push_biharmonic_gaussian(terms, 0.28, 1.50, Vec3::Zero(), 1.0, random_spinor());
  WeylData w = synthesize_cauchy(g, terms);
  WeylData via_position = modular_apply(0.05, w);
  WeylData via_spectrum = modular_apply(0.05, transform(w));
  CHECK(dist2(via_position.f, via_spectrum.f) < 1e-28);
}

TEST_CASE("helicity operator squares to minus one and is norm-preserving") {
  GridSpec g{2.0, 32};
  SpectralData a = biharmonic_gaussian(g, 0.28, 1.50, Vec3(0.05, 0.1, -0.08), random_spinor());
  SpectralData ia = apply_iota(a);
  // Nonlocal kernel: the compact certificate does not survive.
  CHECK(ia.R == doctest::Approx(1.0));
  CHECK(norm2(ia) == doctest::Approx(norm2(a)).epsilon(1e-12));
  SpectralData iia = apply_iota(ia);
  const long zero_node = g.node(g.zero_index(), g.zero_index(), g.zero_index());
  double worst = 0.0;
  for (long m = 0; m < g.n3(); ++m) {
    if (m == zero_node) continue;  // the p = 0 sample is annihilated
    for (int s = 0; s < 2; ++s)
      worst = std::max(worst, std::abs(iia.f.at(m, s) + a.f.at(m, s)));
  }
  CHECK(worst < 1e-12);
  // i (p.sigma)/|p| has eigenvalues +-i, so <phi, iota phi> is purely
  // imaginary.
  CHECK(std::abs(inner(a, ia).real()) / norm2(a) < 1e-12);
}

TEST_CASE("flow conserves the invariant norm") {
  GridSpec g{2.0, 32};
  SpectralData a = biharmonic_gaussian(g, 0.28, 1.50, Vec3::Zero(), random_spinor());
  ModularDiagnostics diag;
  (void)modular_apply(0.1, a, &diag);
  CHECK(std::abs(diag.norm_out / diag.norm_in - 1.0) < 2e-5);
}

TEST_CASE("flow composes as a one-parameter group") {
  GridSpec g{2.0, 32};
  SpectralData a = biharmonic_gaussian(g, 0.28, 1.50, Vec3::Zero(), random_spinor());
  WeylData whole = modular_apply(0.1, a);
  WeylData halves = modular_apply(0.05, transform(modular_apply(0.05, a)));
  CHECK(rel_dist(g, halves.f, whole.f, std::sqrt(norm2(a))) < 6e-3);
}

TEST_CASE("flow commutes with the helicity operator") {
  GridSpec g{2.0, 32};
  const double lam = 0.04;
  const Sp2 chi = random_spinor();
  SpectralData a = biharmonic_gaussian(g, 0.28, 1.50, Vec3::Zero(), chi);
  SpectralData b = biharmonic_gaussian(g, 0.32, 1.70, Vec3::Zero(), chi);
  WeylData fa = modular_apply(lam, a);
  WeylData fb = modular_apply(lam, b);

  // Cancel the flowed spin dipole between the two inputs: the helicity
  // kernel's leading long-range tail couples to that moment, and the grid
  // cannot carry such tails across the periodic boundary.
  const auto da = spin_dipole(g, fa.f);
  const auto db = spin_dipole(g, fb.f);
  cd num = 0;
  double den = 0;
  for (int k = 0; k < 6; ++k) {
    num += std::conj(db[k]) * da[k];
    den += std::norm(db[k]);
  }
  const cd alpha = -num / den;

  SpectralData combo{Field(g, 2), std::max(a.R, b.R)};
  Field flowed(g, 2);
  for (long m = 0; m < g.n3(); ++m)
    for (int s = 0; s < 2; ++s) {
      combo.f.at(m, s) = a.f.at(m, s) + alpha * b.f.at(m, s);
      flowed.at(m, s) = fa.f.at(m, s) + alpha * fb.f.at(m, s);
    }
  WeylData lhs = modular_apply(lam, apply_iota(combo));
  WeylData rhs = inverse_transform(apply_iota(transform(WeylData{std::move(flowed), 1.0})));
  CHECK(rel_dist(g, lhs.f, rhs.f, std::sqrt(norm2(combo))) < 1e-2);
}

TEST_CASE("symmetric differences of the flow converge to the generator") {
  GridSpec g{2.0, 32};
  ProfileTerm gauss{ProfileTerm::Type::Gaussian, Vec3::Zero(), 1.5, 0.30, 0, random_spinor()};
  WeylData w = synthesize_cauchy(g, {gauss});
  SpectralData s = transform(w);
  WeylData k = modular_generator(w);
  const double nk = std::sqrt(norm2(transform(k)));

  double prev = 0.0;
  double err = 0.0;
  for (double lam : {0.06, 0.03, 0.015}) {
    WeylData up = modular_apply(lam, s);
    WeylData dn = modular_apply(-lam, s);
    Field diff(g, 2);
    for (long m = 0; m < g.n3(); ++m)
      for (int sp = 0; sp < 2; ++sp)
        diff.at(m, sp) = (up.f.at(m, sp) - dn.f.at(m, sp)) / (2.0 * lam) - k.f.at(m, sp);
    prev = err;
    err = std::sqrt(norm2(transform(WeylData{std::move(diff), 1.0}))) / nk;
    if (prev > 0) CHECK(prev / err > 3.2);  // second-order central scheme
  }
  CHECK(err < 5e-2);
}

TEST_CASE("compact data stays inside the transported support radius") {
  GridSpec g{2.0, 48};
  const double lam = 0.1;
  SpectralData a = biharmonic_gaussian(g, 0.17, 0.95, Vec3::Zero(), random_spinor());
  REQUIRE(a.R == doctest::Approx(0.95));

  ModularDiagnostics diag;
  WeylData clipped = modular_apply(lam, a, &diag);
  CHECK(diag.support_radius_out == doctest::Approx(f_profile(-2 * M_PI * lam, 0.95)));
  CHECK(support_leak(clipped, diag.support_radius_out) == 0.0);
  CHECK(std::abs(diag.norm_out / diag.norm_in - 1.0) < 1e-5);

  // Withhold the certificate and flow on the full chart: the mass beyond the
  // transported radius is what the clipping would have removed.
  SpectralData free = a;
  free.R = 1.0;
  WeylData open = modular_apply(lam, free);
  const double h3 = std::pow(g.h(), 3);
  const int N = g.N;
  double outside = 0.0, total = 0.0;
  for (long node = 0; node < g.n3(); ++node) {
    const Vec3 x(g.coord(static_cast<int>(node / (N * N))),
                 g.coord(static_cast<int>((node / N) % N)),
                 g.coord(static_cast<int>(node % N)));
    const double m = std::norm(open.f.at(node, 0)) + std::norm(open.f.at(node, 1));
    total += m;
    if (x.norm() > diag.support_radius_out) outside += m;
  }
  CHECK(outside / total < 1e-6);
  CHECK(rel_dist(g, open.f, clipped.f, std::sqrt(total * h3)) < 1e-4);
}

TEST_CASE("clipped flow passes the strict grid checks") {
  GridSpec g{2.0, 48};
  SpectralData a = biharmonic_gaussian(g, 0.17, 0.95, Vec3::Zero(), random_spinor());
  SpectralData b = biharmonic_gaussian(g, 0.17, 0.88, Vec3(-0.06, 0.04, 0), random_spinor());

  ModularDiagnostics diag;
  WeylData u1 = modular_apply(0.1, a, &diag);
  CHECK(std::abs(diag.norm_out / diag.norm_in - 1.0) < 1e-5);

  WeylData halves = modular_apply(0.05, transform(modular_apply(0.05, a)));
  CHECK(rel_dist(g, halves.f, u1.f, diag.norm_in) < 1e-4);

  WeylData back = modular_apply(-0.1, transform(u1));
  CHECK(rel_dist(g, back.f, inverse_transform(a).f, diag.norm_in) < 1e-3);

  const cd before = inner(b, a);
  const cd after = inner(transform(modular_apply(0.1, b)), transform(u1));
  CHECK(std::abs(after - before) / std::abs(before) < 5e-5);
}

TEST_CASE("flowed wave matches the flowed test function") {
  GridSpec g{2.0, 32};
  TestFunctionSpec f;
  SpaceTimeTerm st;
  st.time = {TimeProfile::Type::Bump, 0.0, 0.5, 0.0, 6};
  st.space = {ProfileTerm::Type::Bump, Vec3::Zero(), 0.5, 0.0, 6, Sp2(cd(0.7, 0.2), cd(-0.4, 0.3))};
  f.terms.push_back(st);

  const double lam = 0.05;
  SpectralData wave = wave_from_testfunction(g, f);
  WeylData flowed_wave = modular_apply(lam, wave);
  WeylData wave_of_flowed = wave_from_elambda(lam, f, g);
  CHECK(rel_dist(g, flowed_wave.f, wave_of_flowed.f, std::sqrt(norm2(wave))) < 2e-3);
}

TEST_CASE("flowed test function reduces to the test function at lambda zero") {
  TestFunctionSpec f;
  SpaceTimeTerm st;
  st.time = {TimeProfile::Type::Bump, 0.1, 0.4, 0.0, 4};
  st.space = {ProfileTerm::Type::Bump, Vec3(0.1, -0.1, 0), 0.35, 0.0, 5,
              Sp2(cd(0.3, -0.2), cd(0.5, 0.4))};
  f.terms.push_back(st);
  for (int i = 0; i < 16; ++i) {
    FourVector x(urand(-0.4, 0.4), urand(-0.4, 0.4), urand(-0.4, 0.4), urand(-0.4, 0.4));
    const Sp2 direct = testfunction_value(f, x);
    const Sp2 via_flow = e_lambda(0.0, f, x);
    CHECK((direct - via_flow).norm() < 1e-12 * (1.0 + direct.norm()));
  }
}
