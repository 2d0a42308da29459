#include "dcone/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace dcone {

namespace {

// Splits [0, n) into contiguous ranges, one worker each. Every node is
// written by exactly one worker with a fixed per-node summation order, so
// results do not depend on the worker count.
void parallel_over(long n, const std::function<void(long, long)>& fn) {
  const int nt = std::min<long>(thread_count(), std::max<long>(n, 1));
  if (nt <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const long step = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const long b = t * step, e = std::min(n, b + step);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& th : pool) th.join();
}

// (2L)^{-3} sum_p e^{i p.X} A(p), the spectral evaluation of a momentum
// field at an arbitrary point, with the per-axis phases factorised.
Sp2 plane_sum(const Field& A, const Vec3& X) {
  const GridSpec& g = A.g;
  const int N = g.N;
  std::vector<cd> ex(N), ey(N), ez(N);
  for (int k = 0; k < N; ++k) {
    const double p = g.mom(k);
    ex[k] = std::polar(1.0, p * X[0]);
    ey[k] = std::polar(1.0, p * X[1]);
    ez[k] = std::polar(1.0, p * X[2]);
  }
  cd acc0(0, 0), acc1(0, 0);
  const cd* v = A.v.data();
  long node = 0;
  for (int kx = 0; kx < N; ++kx)
    for (int ky = 0; ky < N; ++ky) {
      const cd exy = ex[kx] * ey[ky];
      cd s0(0, 0), s1(0, 0);
      for (int kz = 0; kz < N; ++kz, ++node) {
        const cd ph = ez[kz];
        s0 += ph * v[2 * node];
        s1 += ph * v[2 * node + 1];
      }
      acc0 += exy * s0;
      acc1 += exy * s1;
    }
  const double w = std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3);
  return Sp2(w * acc0, w * acc1);
}

}  // namespace

double lambda_max(double R) {
  if (!(R > 0.0) || R >= 1.0)
    throw std::domain_error("lambda_max: support radius must lie in (0, 1)");
  double inf = std::numeric_limits<double>::infinity();
  double l_sing = inf, l_grid = inf;
  if (2 * R > 1)  // coth(pi l) > 2R  <=>  l < acoth(2R)/pi
    l_sing = 0.5 * std::log((2 * R + 1) / (2 * R - 1)) / M_PI;
  // f_{-4 pi l}(R) < 2R  <=>  e^{-4 pi l} > (1+R)(1-2R) / ((1-R)(1+2R))
  const double ratio = (1 + R) * (1 - 2 * R) / ((1 - R) * (1 + 2 * R));
  if (ratio > 0) l_grid = -std::log(ratio) / (4 * M_PI);
  return std::min(l_sing, l_grid);
}

WeylData modular_apply(double lambda, const SpectralData& s,
                       ModularDiagnostics* diag) {
  const GridSpec& g = s.f.g;
  const double n_in = std::sqrt(norm2(s));
  if (lambda == 0.0) {
    WeylData out = inverse_transform(s);
    if (diag) *diag = {n_in, n_in, out.R};
    return out;
  }
  // Two evaluation regimes. With a support certificate (R < 1, data inside
  // the unit ball) the transported support bound and the light-cone shell
  // rule zero-fill everything the flow provably cannot reach. Without one
  // (R >= 1, e.g. after the nonlocal helicity multiplier) the map is still
  // the same global conformal unitary, so evaluate wherever the flowed
  // point stays inside the periodic cell and rely on the decay of the data.
  const bool clipped = s.R < 1.0;
  if (clipped) {
    if (!(std::abs(lambda) < lambda_max(s.R)))
      throw std::domain_error(
          "modular_apply: |lambda| exceeds the admissible range for support "
          "radius R");
  } else if (!(std::abs(lambda) <= 0.25)) {
    throw std::domain_error(
        "modular_apply: |lambda| exceeds the admissible range for "
        "unconstrained data");
  }

  const double cl = std::cosh(M_PI * lambda), sl = std::sinh(M_PI * lambda);
  const double lam_flow = -2 * M_PI * lambda;
  const double r_sing = 1.0 / std::tanh(M_PI * std::abs(lambda));
  const double r_out =
      clipped ? f_profile(-2 * M_PI * std::abs(lambda), s.R) : 1.0;
  const double r_max =
      clipped ? std::min(r_out, r_sing) : g.L * std::sqrt(3.0);
  const double rho_max = g.L - g.h();  // flowed point must stay in the cell

  WeylData out;
  out.f = Field(g, 2);
  out.R = r_out;

  // Group the nodes inside the admissible radius by integer squared
  // lattice radius: a shell shares the flow time, scale factor and
  // therefore the propagated spectral table.
  const int N = g.N;
  std::vector<std::pair<long, long>> order;  // (i2, node)
  for (int ix = 0; ix < N; ++ix)
    for (int iy = 0; iy < N; ++iy)
      for (int iz = 0; iz < N; ++iz) {
        const long dx = ix - N / 2, dy = iy - N / 2, dz = iz - N / 2;
        const long i2 = dx * dx + dy * dy + dz * dz;
        const double r = g.h() * std::sqrt(static_cast<double>(i2));
        if (r <= r_max) order.emplace_back(i2, g.node(ix, iy, iz));
      }
  std::sort(order.begin(), order.end());

  size_t lo = 0;
  while (lo < order.size()) {
    size_t hi = lo;
    while (hi < order.size() && order[hi].first == order[lo].first) ++hi;
    const double r = g.h() * std::sqrt(static_cast<double>(order[lo].first));
    const FourVector xrep{0.0, Vec3(r, 0, 0)};
    const double tau_r = tau(lam_flow, xrep);
    if (tau_r <= kSingularTau) {  // at or beyond the singular sphere
      lo = hi;
      continue;
    }
    const double y0 = nu(lam_flow, xrep).x0;
    const double scale = 1.0 / tau_r;
    const double rho = r * scale;
    // Light-cone shell of the flowed point: the wave of data supported in
    // B_R vanishes unless | |y| - |y0| | <= R.
    if (clipped && std::abs(rho - std::abs(y0)) > s.R) {
      lo = hi;
      continue;
    }
    if (!clipped && rho > rho_max) {
      lo = hi;
      continue;
    }
    const Field prop = evolve(s, y0).f;
    const double inv_tau2 = scale * scale;
    parallel_over(static_cast<long>(hi - lo), [&](long b, long e) {
      for (long i = b; i < e; ++i) {
        const long node = order[lo + i].second;
        const int ix = static_cast<int>(node / (N * N));
        const int iy = static_cast<int>((node / N) % N);
        const int iz = static_cast<int>(node % N);
        const Vec3 x(g.coord(ix), g.coord(iy), g.coord(iz));
        const Sp2 val = plane_sum(prop, scale * x);
        // (cosh 1 + sinh x.sigma) in components
        const cd a = val[0], bb = val[1];
        const cd f0 = (cl + sl * x[2]) * a + sl * cd(x[0], -x[1]) * bb;
        const cd f1 = sl * cd(x[0], x[1]) * a + (cl - sl * x[2]) * bb;
        out.f.at(node, 0) = inv_tau2 * f0;
        out.f.at(node, 1) = inv_tau2 * f1;
      }
    });
    lo = hi;
  }
  // Hilbert norms on both sides (spectral, zero mode excluded), so the
  // drift measures unitarity rather than zero-mode bookkeeping.
  if (diag) *diag = {n_in, std::sqrt(norm2(transform(out))), r_out};
  return out;
}

WeylData modular_apply(double lambda, const WeylData& w,
                       ModularDiagnostics* diag) {
  return modular_apply(lambda, transform(w), diag);
}

ModularApplication modular_application(double lambda, const WeylData& w) {
  ModularApplication app;
  app.lambda = lambda;
  app.input = w;
  app.output = modular_apply(lambda, w, &app.diagnostics);
  return app;
}

WeylData modular_generator(const WeylData& w) {
  const GridSpec& g = w.f.g;
  const SpectralData s = transform(w);
  // sigma.grad in momentum space is i (p.sigma)
  Field gs(g, 2);
  const int N = g.N;
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      // Self-paired highest-frequency planes get a zero derivative
      // multiplier so that differentiation commutes with conjugation.
      const Vec3 p(kx == 0 ? 0.0 : g.mom(kx), ky == 0 ? 0.0 : g.mom(ky),
                   kz == 0 ? 0.0 : g.mom(kz));
      const cd a = s.f.at(node, 0), bb = s.f.at(node, 1);
      const cd sa = p[2] * a + cd(p[0], -p[1]) * bb;
      const cd sb = cd(p[0], p[1]) * a - p[2] * bb;
      gs.at(node, 0) = cd(0, 1) * sa;
      gs.at(node, 1) = cd(0, 1) * sb;
    }
  });
  Dft dft(g, 2);
  const Field sg = dft.inverse(gs);

  WeylData out;
  out.f = Field(g, 2);
  out.R = w.R;
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int ix = static_cast<int>(node / (N * N));
      const int iy = static_cast<int>((node / N) % N);
      const int iz = static_cast<int>(node % N);
      const Vec3 x(g.coord(ix), g.coord(iy), g.coord(iz));
      const double w2 = 1.0 - x.squaredNorm();
      const cd a = w.f.at(node, 0), bb = w.f.at(node, 1);
      const cd xa = x[2] * a + cd(x[0], -x[1]) * bb;
      const cd xb = cd(x[0], x[1]) * a - x[2] * bb;
      out.f.at(node, 0) = -M_PI * (w2 * sg.at(node, 0) - xa);
      out.f.at(node, 1) = -M_PI * (w2 * sg.at(node, 1) - xb);
    }
  });
  return out;
}

Sp2 e_lambda(double lambda, const TestFunctionSpec& f, const FourVector& x) {
  if (lambda == 0.0) return testfunction_value(f, x);
  const double lam = -2 * M_PI * lambda;
  const double t = tau(lam, x);
  const FourVector y = nu(lam, x);  // throws SingularPoint with tau ~ 0
  const double cl = std::cosh(M_PI * lambda), sl = std::sinh(M_PI * lambda);
  const Mat2 pre =
      (cl * Mat2::Identity() - sl * slash2(y, Slash::Under)).transpose() /
      (t * t);
  return pre * testfunction_value(f, y);
}

namespace {

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
void gauss_legendre(int n, std::vector<double>& xs, std::vector<double>& ws) {
  xs.assign(n, 0.0);
  ws.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    xs[i] = -z;
    xs[n - 1 - i] = z;
    ws[i] = ws[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

WeylData wave_from_elambda(double lambda, const TestFunctionSpec& f,
                           const GridSpec& g, int time_nodes) {
  // Bounds of the support of f in light-cone coordinates, from the raw
  // profile extents.
  double t_lo = std::numeric_limits<double>::infinity(), t_hi = -t_lo;
  double rho = 0;
  for (const auto& term : f.terms) {
    t_lo = std::min(t_lo, term.time.center - term.time.half_width);
    t_hi = std::max(t_hi, term.time.center + term.time.half_width);
    rho = std::max(rho, term.space.center.norm() + term.space.radius);
  }
  if (f.terms.empty()) throw std::invalid_argument("wave_from_elambda: empty f");
  const double lam_fwd = 2 * M_PI * lambda;
  // E_lambda f is supported in the forward transport of supp f; its time
  // extent follows from u -> f_{2 pi lambda}(u) on both cone coordinates.
  const double u1 = f_profile(lam_fwd, t_hi + rho);
  const double u0 = f_profile(lam_fwd, t_lo);
  const double v1 = f_profile(lam_fwd, t_hi);
  const double v0 = f_profile(lam_fwd, t_lo - rho);
  const double ta = 0.5 * (u0 + v0) - 1e-6, tb = 0.5 * (u1 + v1) + 1e-6;
  const double r_slice = 0.5 * (u1 - v0);  // spatial radius of the support

  std::vector<double> xs, ws;
  gauss_legendre(time_nodes, xs, ws);

  Dft dft(g, 2);
  Field fp(g, 2), fm(g, 2);  // accumulated F(p_+), F(p_-)
  const int N = g.N;
  Field slice(g, 2);
  for (int si = 0; si < time_nodes; ++si) {
    const double ts = 0.5 * (ta + tb) + 0.5 * (tb - ta) * xs[si];
    const double wt = 0.5 * (tb - ta) * ws[si];
    parallel_chunks(g.n3(), [&](long b, long e) {
      for (long node = b; node < e; ++node) {
        const int ix = static_cast<int>(node / (N * N));
        const int iy = static_cast<int>((node / N) % N);
        const int iz = static_cast<int>(node % N);
        const Vec3 x(g.coord(ix), g.coord(iy), g.coord(iz));
        const double r = x.norm();
        cd v0c(0, 0), v1c(0, 0);
        if (std::abs(ts) + r <= 1.02 && r <= r_slice + 0.02) {
          const Sp2 val = e_lambda(lambda, f, FourVector{ts, x});
          v0c = std::conj(val[0]);
          v1c = std::conj(val[1]);
        }
        slice.at(node, 0) = v0c;
        slice.at(node, 1) = v1c;
      }
    });
    const Field sh = dft.forward(slice);
    parallel_chunks(g.n3(), [&](long b, long e) {
      for (long node = b; node < e; ++node) {
        const int kx = static_cast<int>(node / (N * N));
        const int ky = static_cast<int>((node / N) % N);
        const int kz = static_cast<int>(node % N);
        const double ap =
            Vec3(g.mom(kx), g.mom(ky), g.mom(kz)).norm();
        const cd ep = wt * std::polar(1.0, ap * ts);
        const cd em = wt * std::polar(1.0, -ap * ts);
        fp.at(node, 0) += ep * sh.at(node, 0);
        fp.at(node, 1) += ep * sh.at(node, 1);
        fm.at(node, 0) += em * sh.at(node, 0);
        fm.at(node, 1) += em * sh.at(node, 1);
      }
    });
  }

  // (2|p|)^{-1} [pslash_+ F(p_+) - pslash_- F(p_-)]
  //   = (F_+ + F_-)/2 + (n.sigma)(F_+ - F_-)/2
  SpectralData s;
  s.f = Field(g, 2);
  s.R = std::min(1.0, r_slice);
  parallel_chunks(g.n3(), [&](long b, long e) {
    for (long node = b; node < e; ++node) {
      const int kx = static_cast<int>(node / (N * N));
      const int ky = static_cast<int>((node / N) % N);
      const int kz = static_cast<int>(node % N);
      const Vec3 p(g.mom(kx), g.mom(ky), g.mom(kz));
      const double ap = p.norm();
      const cd sp0 = 0.5 * (fp.at(node, 0) + fm.at(node, 0));
      const cd sp1 = 0.5 * (fp.at(node, 1) + fm.at(node, 1));
      if (ap == 0.0) {
        s.f.at(node, 0) = sp0;
        s.f.at(node, 1) = sp1;
        continue;
      }
      const double nx = p[0] / ap, ny = p[1] / ap, nz = p[2] / ap;
      const cd d0 = 0.5 * (fp.at(node, 0) - fm.at(node, 0));
      const cd d1 = 0.5 * (fp.at(node, 1) - fm.at(node, 1));
      s.f.at(node, 0) = sp0 + nz * d0 + cd(nx, -ny) * d1;
      s.f.at(node, 1) = sp1 + cd(nx, ny) * d0 - nz * d1;
    }
  });
  WeylData out = inverse_transform(s);
  out.R = s.R;
  return out;
}

std::vector<ConvergenceRow> generator_convergence(
    const WeylData& w, const std::vector<double>& lambdas) {
  std::vector<ConvergenceRow> rows;
  const SpectralData s = transform(w);
  const WeylData kw = modular_generator(w);
  const double kn = std::sqrt(norm2_position(kw));
  for (double l : lambdas) {
    ConvergenceRow row;
    row.lambda = l;
    if (kn == 0.0) {
      rows.push_back(row);
      continue;
    }
    const WeylData up = modular_apply(l, s);
    const WeylData um = modular_apply(-l, s);
    double df = 0, dc = 0;
    const long n = static_cast<long>(w.f.v.size());
    df = sum_compensated(n, [&](long i) {
      return std::norm((up.f.v[i] - w.f.v[i]) / l - kw.f.v[i]);
    });
    dc = sum_compensated(n, [&](long i) {
      return std::norm((up.f.v[i] - um.f.v[i]) / (2 * l) - kw.f.v[i]);
    });
    const double h3 = std::pow(w.f.g.h(), 3);
    row.err_forward = std::sqrt(df * h3) / kn;
    row.err_central = std::sqrt(dc * h3) / kn;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dcone
