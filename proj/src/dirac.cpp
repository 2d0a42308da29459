#include "dcone/dirac.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dcone {

namespace {

// (n.sigma) (a, b)^t for a unit (or zero) direction n.
inline void sigma_dot(const Vec3& n, cd a, cd b, cd& sa, cd& sb) {
  sa = n[2] * a + cd(n[0], -n[1]) * b;
  sb = cd(n[0], n[1]) * a - n[2] * b;
}

inline Vec3 mom_of(const GridSpec& g, long node) {
  const int N = g.N;
  return Vec3(g.mom(static_cast<int>(node / (N * N))),
              g.mom(static_cast<int>((node / N) % N)),
              g.mom(static_cast<int>(node % N)));
}

inline Vec3 coord_of(const GridSpec& g, long node) {
  const int N = g.N;
  return Vec3(g.coord(static_cast<int>(node / (N * N))),
              g.coord(static_cast<int>((node / N) % N)),
              g.coord(static_cast<int>(node % N)));
}

}  // namespace

DiracData assemble(const WeylData& right, const WeylData& left) {
  if (!(right.f.g == left.f.g))
    throw std::invalid_argument("assemble: grid mismatch");
  DiracData d{Field(right.f.g, 4), std::max(right.R, left.R)};
  parallel_chunks(d.f.g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      d.f.at(node, 0) = right.f.at(node, 0);
      d.f.at(node, 1) = right.f.at(node, 1);
      d.f.at(node, 2) = left.f.at(node, 0);
      d.f.at(node, 3) = left.f.at(node, 1);
    }
  });
  return d;
}

WeylData chiral_block(const DiracData& d, int block) {
  if (block != 0 && block != 1)
    throw std::invalid_argument("chiral_block: block must be 0 or 1");
  WeylData w{Field(d.f.g, 2), d.R};
  parallel_chunks(d.f.g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      w.f.at(node, 0) = d.f.at(node, 2 * block + 0);
      w.f.at(node, 1) = d.f.at(node, 2 * block + 1);
    }
  });
  return w;
}

WeylData parity_reflect(const WeylData& w) {
  const GridSpec& g = w.f.g;
  const int N = g.N;
  WeylData out{Field(g, 2), w.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int ix = static_cast<int>(node / (N * N));
      const int iy = static_cast<int>((node / N) % N);
      const int iz = static_cast<int>(node % N);
      const long src = g.node((N - ix) % N, (N - iy) % N, (N - iz) % N);
      out.f.at(node, 0) = w.f.at(src, 0);
      out.f.at(node, 1) = w.f.at(src, 1);
    }
  });
  return out;
}

DiracSpectral transform_dirac(const DiracData& d) {
  Dft dft(d.f.g, 4);
  return DiracSpectral{dft.forward(d.f), d.R};
}

DiracData inverse_transform_dirac(const DiracSpectral& s) {
  Dft dft(s.f.g, 4);
  return DiracData{dft.inverse(s.f), s.R};
}

DiracSpectral evolve_dirac(const DiracSpectral& s, double t) {
  const GridSpec& g = s.f.g;
  DiracSpectral out{Field(g, 4), s.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const Vec3 p = mom_of(g, node);
      const double ap = p.norm();
      if (ap == 0.0) {
        for (int c = 0; c < 4; ++c) out.f.at(node, c) = s.f.at(node, c);
        continue;
      }
      const Vec3 n = p / ap;
      const double c = std::cos(ap * t), sn = std::sin(ap * t);
      cd sa, sb;
      sigma_dot(n, s.f.at(node, 0), s.f.at(node, 1), sa, sb);
      out.f.at(node, 0) = c * s.f.at(node, 0) - cd(0, sn) * sa;
      out.f.at(node, 1) = c * s.f.at(node, 1) - cd(0, sn) * sb;
      sigma_dot(n, s.f.at(node, 2), s.f.at(node, 3), sa, sb);
      out.f.at(node, 2) = c * s.f.at(node, 2) + cd(0, sn) * sa;
      out.f.at(node, 3) = c * s.f.at(node, 3) + cd(0, sn) * sb;
    }
  });
  return out;
}

MajoranaState majorana_embed(const WeylData& phi) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  MajoranaState m;
  m.phi = phi;
  m.psi = DiracData{Field(phi.f.g, 4), phi.R};
  parallel_chunks(phi.f.g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const cd a = phi.f.at(node, 0), bb = phi.f.at(node, 1);
      m.psi.f.at(node, 0) = inv_sqrt2 * a;
      m.psi.f.at(node, 1) = inv_sqrt2 * bb;
      // sigma2 conj: (a, b) -> (-i conj(b), i conj(a))
      m.psi.f.at(node, 2) = inv_sqrt2 * cd(0, -1) * std::conj(bb);
      m.psi.f.at(node, 3) = inv_sqrt2 * cd(0, 1) * std::conj(a);
    }
  });
  return m;
}

double majorana_defect(const DiracData& d) {
  // Conjugation image: upper' = -sigma2 conj(lower), lower' = sigma2 conj(upper).
  double num = 0.0, den = 0.0;
  num = sum_compensated(d.f.g.n3(), [&](long node) {
    const cd u0 = d.f.at(node, 0), u1 = d.f.at(node, 1);
    const cd l0 = d.f.at(node, 2), l1 = d.f.at(node, 3);
    const cd cu0 = cd(0, 1) * std::conj(l1);
    const cd cu1 = cd(0, -1) * std::conj(l0);
    const cd cl0 = cd(0, -1) * std::conj(u1);
    const cd cl1 = cd(0, 1) * std::conj(u0);
    return std::norm(u0 - cu0) + std::norm(u1 - cu1) + std::norm(l0 - cl0) +
           std::norm(l1 - cl1);
  });
  den = sum_compensated(d.f.g.n3(), [&](long node) {
    return std::norm(d.f.at(node, 0)) + std::norm(d.f.at(node, 1)) +
           std::norm(d.f.at(node, 2)) + std::norm(d.f.at(node, 3));
  });
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

cd inner_dirac(const DiracSpectral& a, const DiracSpectral& b) {
  const GridSpec& g = a.f.g;
  if (!(b.f.g == g)) throw std::invalid_argument("inner_dirac: grid mismatch");
  cd acc = sum_compensated_c(g.n3(), [&](long node) {
    const Vec3 p = mom_of(g, node);
    const double ap = p.norm();
    if (ap == 0.0) return cd(0, 0);  // zero mode carries zero weight
    const Vec3 n = p / ap;
    cd dir(0, 0), hel(0, 0);
    // Q = diag(n.sigma, -n.sigma) acting on the two blocks.
    for (int blk = 0; blk < 2; ++blk) {
      const cd a0 = a.f.at(node, 2 * blk), a1 = a.f.at(node, 2 * blk + 1);
      const cd b0 = b.f.at(node, 2 * blk), b1 = b.f.at(node, 2 * blk + 1);
      dir += std::conj(a0) * b0 + std::conj(a1) * b1;
      cd sb0, sb1;
      sigma_dot(n, b0, b1, sb0, sb1);
      const double sign = blk == 0 ? 1.0 : -1.0;
      hel += sign * (std::conj(a0) * sb0 + std::conj(a1) * sb1);
    }
    return cd(dir.real(), hel.imag());
  });
  return acc * (std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3));
}

double norm2_dirac(const DiracSpectral& a) {
  const GridSpec& g = a.f.g;
  const long z0 = 4 * g.node(g.zero_index(), g.zero_index(), g.zero_index());
  double s = sum_compensated(static_cast<long>(a.f.v.size()), [&](long i) {
    if (i >= z0 && i < z0 + 4) return 0.0;  // zero mode carries zero weight
    return std::norm(a.f.v[i]);
  });
  return s * (std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3));
}

DiracSpectral apply_iota_dirac(const DiracSpectral& s) {
  const GridSpec& g = s.f.g;
  DiracSpectral out{Field(g, 4), 1.0};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const Vec3 p = mom_of(g, node);
      const double ap = p.norm();
      if (ap == 0.0) continue;  // annihilates the zero mode
      const Vec3 n = p / ap;
      cd sa, sb;
      sigma_dot(n, s.f.at(node, 0), s.f.at(node, 1), sa, sb);
      out.f.at(node, 0) = cd(0, 1) * sa;
      out.f.at(node, 1) = cd(0, 1) * sb;
      sigma_dot(n, s.f.at(node, 2), s.f.at(node, 3), sa, sb);
      out.f.at(node, 2) = cd(0, -1) * sa;
      out.f.at(node, 3) = cd(0, -1) * sb;
    }
  });
  return out;
}

DiracData k_dirac(const DiracData& d) {
  const GridSpec& g = d.f.g;
  Dft dft(g, 4);
  Field spec = dft.forward(d.f);

  // Spectral x-derivatives, one direction at a time. The self-paired
  // highest-frequency plane of each direction gets a zero multiplier so
  // that differentiation commutes with conjugation (this keeps the
  // self-conjugacy class of the data exactly invariant).
  const int N = g.N;
  std::array<Field, 3> grad;
  for (int dir = 0; dir < 3; ++dir) {
    Field mul(g, 4);
    parallel_chunks(g.n3(), [&](long b, long e) {
      for (long node = b; node < e; ++node) {
        const int idx = dir == 0 ? static_cast<int>(node / (N * N))
                       : dir == 1 ? static_cast<int>((node / N) % N)
                                  : static_cast<int>(node % N);
        const cd ip(0, idx == 0 ? 0.0 : g.mom(idx));
        for (int c = 0; c < 4; ++c) mul.at(node, c) = ip * spec.at(node, c);
      }
    });
    grad[dir] = dft.inverse(mul);
  }

  DiracData out{Field(g, 4), d.R};
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const Vec3 x = coord_of(g, node);
      const double w = 1.0 - x.squaredNorm();
      // diag(sigma_k, -sigma_k) contracted with (1 - r^2) d_k psi and with
      // x_k psi.
      cd su0(0, 0), su1(0, 0), sl0(0, 0), sl1(0, 0);
      for (int dir = 0; dir < 3; ++dir) {
        Vec3 ek = Vec3::Zero();
        ek[dir] = 1.0;
        cd a, b2;
        sigma_dot(ek, grad[dir].at(node, 0), grad[dir].at(node, 1), a, b2);
        su0 += a;
        su1 += b2;
        sigma_dot(ek, grad[dir].at(node, 2), grad[dir].at(node, 3), a, b2);
        sl0 += a;
        sl1 += b2;
      }
      cd xu0, xu1, xl0, xl1;
      sigma_dot(x, d.f.at(node, 0), d.f.at(node, 1), xu0, xu1);
      sigma_dot(x, d.f.at(node, 2), d.f.at(node, 3), xl0, xl1);
      out.f.at(node, 0) = -M_PI * (w * su0 - xu0);
      out.f.at(node, 1) = -M_PI * (w * su1 - xu1);
      out.f.at(node, 2) = M_PI * (w * sl0 - xl0);
      out.f.at(node, 3) = M_PI * (w * sl1 - xl1);
    }
  });
  return out;
}

}  // namespace dcone
