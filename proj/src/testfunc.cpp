#include "dcone/testfunc.hpp"

#include <cmath>

namespace dcone {

double scaled_sph_bessel(int n, double z) {
  const double az = std::abs(z);
  if (az < 0.5) {
    // j_n(z)/z^n = sum_k (-z^2/2)^k / (k! (2n+1)!! (2n+3)...(2n+2k+1))
    double dfac = 1.0;
    for (int m = 2 * n + 1; m > 1; m -= 2) dfac *= m;
    double term = 1.0 / dfac, sum = term;
    const double x = z * z;
    for (int k = 1; k < 40; ++k) {
      term *= -0.5 * x / (k * (2.0 * n + 2.0 * k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::sph_bessel(static_cast<unsigned>(n), az) / std::pow(az, n);
}

double time_value(const TimeProfile& t, double x0) {
  const double d = x0 - t.center;
  const double hw = t.half_width;
  if (std::abs(d) >= hw) return 0.0;
  if (t.type == TimeProfile::Type::Bump) {
    const double u = d / hw;
    return std::pow(1.0 - u * u, t.degree);
  }
  return std::exp(-0.5 * d * d / (t.width * t.width));
}

cd time_hat(const TimeProfile& t, double p0) {
  const cd phase = std::polar(1.0, p0 * t.center);
  if (t.type == TimeProfile::Type::Gaussian) {
    const double s = t.width;
    return phase * (s * std::sqrt(2 * M_PI) * std::exp(-0.5 * s * s * p0 * p0));
  }
  const int m = t.degree;
  double fac = t.half_width * 2.0;  // T * 2^{m+1} m!
  for (int k = 1; k <= m; ++k) fac *= 2.0 * k;
  return phase * (fac * scaled_sph_bessel(m, p0 * t.half_width));
}

cd space_hat(const ProfileTerm& s, const Vec3& p) {
  const cd phase = std::polar(1.0, -p.dot(s.center));
  if (s.type == ProfileTerm::Type::Gaussian) {
    const double w = s.width;
    return phase * (std::pow(w * std::sqrt(2 * M_PI), 3) *
                    std::exp(-0.5 * w * w * p.squaredNorm()));
  }
  const int k = s.degree;
  const double R = s.radius;
  double fac = 4.0 * M_PI * R * R * R;  // 4 pi R^3 2^k k!
  for (int j = 1; j <= k; ++j) fac *= 2.0 * j;
  return phase * (fac * scaled_sph_bessel(k + 1, p.norm() * R));
}

Sp2 testfunction_value(const TestFunctionSpec& f, const FourVector& x) {
  Sp2 out = Sp2::Zero();
  for (const auto& t : f.terms)
    out += (time_value(t.time, x.x0) * profile_value(t.space, x.x)) * t.chi;
  return out;
}

SpectralData wave_from_testfunction(const GridSpec& g, const TestFunctionSpec& f) {
  const int N = g.N;
  SpectralData out{Field(g, 2), cauchy_support_radius(f)};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      const double ap = p.norm();
      cd f0(0, 0), f1(0, 0);
      for (const auto& t : f.terms) {
        const cd sh = space_hat(t.space, p);
        const cd c0 = std::conj(t.chi[0]), c1 = std::conj(t.chi[1]);
        if (ap == 0.0) {
          const cd a = time_hat(t.time, 0.0) * sh;
          f0 += a * c0;
          f1 += a * c1;
          continue;
        }
        const cd fp = time_hat(t.time, ap) * sh;   // fbar^(p_+)
        const cd fm = time_hat(t.time, -ap) * sh;  // fbar^(p_-)
        // (2|p|)^{-1} [under(p_+) fp - under(p_-) fm] (chi-conjugate spinor)
        // = (fp + fm)/2 + (fp - fm)/2 (n.sigma) acting on conj(chi)
        const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
        const cd sp0 = nz * c0 + cd(nx, -ny) * c1;
        const cd sp1 = cd(nx, ny) * c0 - nz * c1;
        f0 += 0.5 * ((fp + fm) * c0 + (fp - fm) * sp0);
        f1 += 0.5 * ((fp + fm) * c1 + (fp - fm) * sp1);
      }
      out.f.at(node, 0) = f0;
      out.f.at(node, 1) = f1;
    }
  });
  return out;
}

void amplitudes_from_testfunction(const TestFunctionSpec& f, const Vec3& p,
                                  cd& l, cd& h) {
  l = h = cd(0, 0);
  const double ap = p.norm();
  if (ap == 0.0) return;
  const Sp2 v = nu0(p);
  const double c = std::pow(2 * M_PI, -1.5);
  for (const auto& t : f.terms) {
    const cd fac = time_hat(t.time, ap) * space_hat(t.space, p);
    l += -c * fac * (std::conj(v[0]) * std::conj(t.chi[0]) +
                     std::conj(v[1]) * std::conj(t.chi[1]));
    h += c * fac * (v[0] * t.chi[0] + v[1] * t.chi[1]);
  }
}

double cauchy_support_radius(const TestFunctionSpec& f) {
  double R = 0.0;
  for (const auto& t : f.terms) {
    const double reach =
        t.space.center.norm() + t.space.radius + std::abs(t.time.center) + t.time.half_width;
    R = std::max(R, reach);
  }
  return R;
}

}  // namespace dcone
