#include "dcone/wave.hpp"

#include <cmath>
#include <stdexcept>

namespace dcone {

double profile_value(const ProfileTerm& t, const Vec3& x) {
  const double d2 = (x - t.center).squaredNorm();
  const double r2 = t.radius * t.radius;
  if (d2 >= r2) return 0.0;
  if (t.type == ProfileTerm::Type::Bump) return std::pow(1.0 - d2 / r2, t.degree);
  const double gauss = std::exp(-0.5 * d2 / (t.width * t.width));
  if (t.degree == 0) return gauss;
  // Radial power (d/width)^degree: building block for moment-free
  // polynomial-times-gaussian envelopes.
  return std::pow(std::sqrt(d2) / t.width, t.degree) * gauss;
}

WeylData synthesize_cauchy(const GridSpec& g, const std::vector<ProfileTerm>& terms) {
  WeylData w;
  w.f = Field(g, 2);
  w.R = 0.0;
  for (const auto& t : terms) w.R = std::max(w.R, t.center.norm() + t.radius);
  const int N = g.N;
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int ix = static_cast<int>(node / (N * N));
      const int iy = static_cast<int>((node / N) % N);
      const int iz = static_cast<int>(node % N);
      const Vec3 x(g.coord(ix), g.coord(iy), g.coord(iz));
      cd a(0, 0), bb(0, 0);
      for (const auto& t : terms) {
        const double s = profile_value(t, x);
        if (s != 0.0) {
          a += s * t.spinor[0];
          bb += s * t.spinor[1];
        }
      }
      w.f.at(node, 0) = a;
      w.f.at(node, 1) = bb;
    }
  });
  return w;
}

double support_leak(const WeylData& w, double R) {
  const GridSpec& g = w.f.g;
  const int N = g.N;
  const double R2 = R * R;
  auto node_norm = [&](long node) {
    return std::norm(w.f.at(node, 0)) + std::norm(w.f.at(node, 1));
  };
  double total = sum_compensated(g.n3(), node_norm);
  if (total <= 0.0) return 0.0;
  double out = sum_compensated(g.n3(), [&](long node) {
    const int ix = static_cast<int>(node / (N * N));
    const int iy = static_cast<int>((node / N) % N);
    const int iz = static_cast<int>(node % N);
    const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
    return (x * x + y * y + z * z > R2) ? node_norm(node) : 0.0;
  });
  return out / total;
}

SpectralData transform(const WeylData& w) {
  Dft dft(w.f.g, 2);
  return SpectralData{dft.forward(w.f), w.R};
}

WeylData inverse_transform(const SpectralData& s) {
  Dft dft(s.f.g, 2);
  return WeylData{dft.inverse(s.f), s.R};
}

SpectralData evolve(const SpectralData& s, double t) {
  const GridSpec& g = s.f.g;
  const int N = g.N;
  SpectralData out{Field(g, 2), s.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      const double ap = p.norm();
      const cd a = s.f.at(node, 0), bb = s.f.at(node, 1);
      if (ap == 0.0) {
        out.f.at(node, 0) = a;
        out.f.at(node, 1) = bb;
        continue;
      }
      const double c = std::cos(ap * t), sn = std::sin(ap * t);
      const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
      // (p.sigma/|p|) (a, b)^t
      const cd sa = nz * a + cd(nx, -ny) * bb;
      const cd sb = cd(nx, ny) * a - nz * bb;
      out.f.at(node, 0) = c * a - cd(0, sn) * sa;
      out.f.at(node, 1) = c * bb - cd(0, sn) * sb;
    }
  });
  return out;
}

Sp2 evaluate(const SpectralData& s, const FourVector& x) {
  const GridSpec& g = s.f.g;
  const int N = g.N;
  // factorised spatial phases e^{i p_k x_k} per axis
  std::vector<cd> ex(N), ey(N), ez(N);
  for (int k = 0; k < N; ++k) {
    ex[k] = std::polar(1.0, g.mom(k) * x.x[0]);
    ey[k] = std::polar(1.0, g.mom(k) * x.x[1]);
    ez[k] = std::polar(1.0, g.mom(k) * x.x[2]);
  }
  cd acc0(0, 0), acc1(0, 0);
  long node = 0;
  for (int kx = 0; kx < N; ++kx)
    for (int ky = 0; ky < N; ++ky) {
      const cd exy = ex[kx] * ey[ky];
      for (int kz = 0; kz < N; ++kz, ++node) {
        const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
        const double ap = p.norm();
        cd a = s.f.at(node, 0), bb = s.f.at(node, 1);
        cd f0, f1;
        if (ap == 0.0) {
          f0 = a;
          f1 = bb;
        } else {
          const double c = std::cos(ap * x.x0), sn = std::sin(ap * x.x0);
          const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
          const cd sa = nz * a + cd(nx, -ny) * bb;
          const cd sb = cd(nx, ny) * a - nz * bb;
          f0 = c * a - cd(0, sn) * sa;
          f1 = c * bb - cd(0, sn) * sb;
        }
        const cd ph = exy * ez[kz];
        acc0 += ph * f0;
        acc1 += ph * f1;
      }
    }
  const double w = std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3);
  return Sp2(w * acc0, w * acc1);
}

SpectralData apply_iota(const SpectralData& s) {
  const GridSpec& g = s.f.g;
  const int N = g.N;
  // The helicity multiplier i p.sigma/|p| is nonlocal in position space
  // (its kernel has power-law tails), so a compact support certificate on
  // the input does not survive; the result carries no support bound.
  SpectralData out{Field(g, 2), 1.0};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      const double ap = p.norm();
      if (ap == 0.0) continue;  // iota annihilates the zero mode
      const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
      const cd a = s.f.at(node, 0), bb = s.f.at(node, 1);
      out.f.at(node, 0) = cd(0, 1) * (nz * a + cd(nx, -ny) * bb);
      out.f.at(node, 1) = cd(0, 1) * (cd(nx, ny) * a - nz * bb);
    }
  });
  return out;
}

cd inner(const SpectralData& a, const SpectralData& b) {
  const GridSpec& g = a.f.g;
  if (!(b.f.g == g)) throw std::invalid_argument("inner: grid mismatch");
  const int N = g.N;
  cd acc = sum_compensated_c(g.n3(), [&](long node) {
    const int kx = static_cast<int>(node / (N * N));
    const int ky = static_cast<int>((node / N) % N);
    const int kz = static_cast<int>(node % N);
    const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
    const double ap = p.norm();
    const cd a0 = a.f.at(node, 0), a1 = a.f.at(node, 1);
    const cd b0 = b.f.at(node, 0), b1 = b.f.at(node, 1);
    if (ap == 0.0) return cd(0, 0);  // zero mode carries zero weight
    const cd dir = std::conj(a0) * b0 + std::conj(a1) * b1;
    const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
    const cd sb0 = nz * b0 + cd(nx, -ny) * b1;
    const cd sb1 = cd(nx, ny) * b0 - nz * b1;
    const cd hel = std::conj(a0) * sb0 + std::conj(a1) * sb1;
    return cd(dir.real(), hel.imag());
  });
  return acc * (std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3));
}

double norm2(const SpectralData& a) {
  const GridSpec& g = a.f.g;
  const long z0 = 2 * g.node(g.zero_index(), g.zero_index(), g.zero_index());
  double s = sum_compensated(static_cast<long>(a.f.v.size()), [&](long i) {
    if (i == z0 || i == z0 + 1) return 0.0;  // zero mode carries zero weight
    return std::norm(a.f.v[i]);
  });
  return s * (std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3));
}

double norm2_position(const WeylData& w) {
  const GridSpec& g = w.f.g;
  double s = sum_compensated(static_cast<long>(w.f.v.size()),
                             [&](long i) { return std::norm(w.f.v[i]); });
  return s * std::pow(g.h(), 3);
}

double dist2(const Field& a, const Field& b) {
  if (a.v.size() != b.v.size()) throw std::invalid_argument("dist2: size mismatch");
  return sum_compensated(static_cast<long>(a.v.size()),
                         [&](long i) { return std::norm(a.v[i] - b.v[i]); });
}

Amplitudes v_map(const SpectralData& s) {
  const GridSpec& g = s.f.g;
  const int N = g.N;
  const double c = std::pow(2 * M_PI, -1.5);
  Amplitudes out{Field(g, 2), s.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      if (p.norm() == 0.0) continue;  // zero mode carries no amplitude
      const Sp2 v = nu0(p);
      const long mnode = g.node(g.neg_index(kx), g.neg_index(ky), g.neg_index(kz));
      const cd f0 = s.f.at(node, 0), f1 = s.f.at(node, 1);
      const cd m0 = s.f.at(mnode, 0), m1 = s.f.at(mnode, 1);
      // l(p) = -c nu0(p)^dag F(p);  h(p) = c F(-p)^dag nu0(p)
      out.f.at(node, 0) = -c * (std::conj(v[0]) * f0 + std::conj(v[1]) * f1);
      out.f.at(node, 1) = c * (std::conj(m0) * v[0] + std::conj(m1) * v[1]);
    }
  });
  return out;
}

SpectralData v_inverse(const Amplitudes& amp) {
  const GridSpec& g = amp.f.g;
  const int N = g.N;
  const double c = std::pow(2 * M_PI, 1.5);
  SpectralData out{Field(g, 2), amp.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      if (p.norm() == 0.0) continue;
      const int mx = g.neg_index(kx), my = g.neg_index(ky), mz = g.neg_index(kz);
      const Vec3 pm(g.mom(mx), g.mom(my), g.mom(mz));
      const long mnode = g.node(mx, my, mz);
      const cd l = amp.f.at(node, 0);
      const cd hm = std::conj(amp.f.at(mnode, 1));
      // Unitary inverse of the row pair (-nu0(p)^dag; nu0(p_mirror)^dag);
      // nu0 is evaluated on the mirror momentum itself so the pole phase
      // convention matches the forward map exactly.
      const Sp2 v = nu0(p), vm = nu0(pm);
      out.f.at(node, 0) = c * (-l * v[0] + hm * vm[0]);
      out.f.at(node, 1) = c * (-l * v[1] + hm * vm[1]);
    }
  });
  return out;
}

double norm2_amplitudes(const Amplitudes& amp) {
  const GridSpec& g = amp.f.g;
  double s = sum_compensated(static_cast<long>(amp.f.v.size()),
                             [&](long i) { return std::norm(amp.f.v[i]); });
  return s * std::pow(g.dp(), 3);
}

}  // namespace dcone
