#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "dcone/grid.hpp"

using namespace dcone;

namespace {
std::mt19937_64 rng(0x5eed0003);
double urand(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}
}  // namespace

TEST_CASE("grid spec validation and index maps") {
  GridSpec g{2.5, 48};
  g.validate();
  CHECK(g.h() == doctest::Approx(2 * 2.5 / 48));
  CHECK(g.coord(24) == 0.0);
  CHECK(g.mom(24) == 0.0);
  CHECK(g.zero_index() == 24);
  for (int k = 1; k < 48; ++k) CHECK(g.mom(g.neg_index(k)) == -g.mom(k));
  CHECK(g.neg_index(0) == 0);  // -p_max aliases itself

  CHECK_THROWS_AS((GridSpec{0.9, 48}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{2.5, 47}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{2.5, 12}.validate()), std::invalid_argument);
}

TEST_CASE("plane wave transforms to a single mode") {
  GridSpec g{2.0, 16};
  Dft dft(g, 1);
  const int kx = 11, ky = 5, kz = 8;
  const double px = g.mom(kx), py = g.mom(ky), pz = g.mom(kz);
  Field f(g, 1);
  for (int ix = 0; ix < g.N; ++ix)
    for (int iy = 0; iy < g.N; ++iy)
      for (int iz = 0; iz < g.N; ++iz)
        f.at(g.node(ix, iy, iz), 0) = std::polar(
            1.0, px * g.coord(ix) + py * g.coord(iy) + pz * g.coord(iz));
  Field F = dft.forward(f);
  const double vol = 8 * g.L * g.L * g.L;
  for (int ix = 0; ix < g.N; ++ix)
    for (int iy = 0; iy < g.N; ++iy)
      for (int iz = 0; iz < g.N; ++iz) {
        cd want = (ix == kx && iy == ky && iz == kz) ? cd(vol, 0) : cd(0, 0);
        CHECK(std::abs(F.at(g.node(ix, iy, iz), 0) - want) < 1e-9 * vol);
      }
}

TEST_CASE("round trip and Parseval are exact to roundoff") {
  GridSpec g{2.5, 24};
  Dft dft(g, 2);
  Field f(g, 2);
  for (auto& z : f.v) z = cd(urand(-1, 1), urand(-1, 1));
  Field F = dft.forward(f);
  Field f2 = dft.inverse(F);
  double maxd = 0;
  for (size_t i = 0; i < f.v.size(); ++i) maxd = std::max(maxd, std::abs(f.v[i] - f2.v[i]));
  CHECK(maxd < 1e-12);

  const double h3 = std::pow(g.h(), 3);
  const double w = std::pow(g.dp(), 3) / std::pow(2 * M_PI, 3);
  double npos = sum_compensated(static_cast<long>(f.v.size()),
                                [&](long i) { return std::norm(f.v[i]) * h3; });
  double nmom = sum_compensated(static_cast<long>(F.v.size()),
                                [&](long i) { return std::norm(F.v[i]) * w; });
  CHECK(std::abs(npos - nmom) < 1e-10 * npos);
}

TEST_CASE("gaussian transform matches the closed form") {
  GridSpec g{2.5, 32};
  Dft dft(g, 1);
  const double s = 0.4;
  Field f(g, 1);
  for (int ix = 0; ix < g.N; ++ix)
    for (int iy = 0; iy < g.N; ++iy)
      for (int iz = 0; iz < g.N; ++iz) {
        double r2 = g.coord(ix) * g.coord(ix) + g.coord(iy) * g.coord(iy) +
                    g.coord(iz) * g.coord(iz);
        f.at(g.node(ix, iy, iz), 0) = std::exp(-0.5 * r2 / (s * s));
      }
  Field F = dft.forward(f);
  const double amp = std::pow(s * std::sqrt(2 * M_PI), 3);
  double maxrel = 0;
  for (int ix = 0; ix < g.N; ++ix)
    for (int iy = 0; iy < g.N; ++iy)
      for (int iz = 0; iz < g.N; ++iz) {
        double p2 = g.mom(ix) * g.mom(ix) + g.mom(iy) * g.mom(iy) + g.mom(iz) * g.mom(iz);
        double want = amp * std::exp(-0.5 * s * s * p2);
        maxrel = std::max(maxrel,
                          std::abs(F.at(g.node(ix, iy, iz), 0) - want) / amp);
      }
  CHECK(maxrel < 1e-6);
}

TEST_CASE("chunked map covers every index once") {
  const long n = 100000;
  std::vector<int> hits(n, 0);
  parallel_chunks(n, [&](long b, long e) {
    for (long i = b; i < e; ++i) hits[i]++;
  });
  long bad = 0;
  for (long i = 0; i < n; ++i)
    if (hits[i] != 1) ++bad;
  CHECK(bad == 0);
}

TEST_CASE("compensated sums are worker-count independent") {
  const long n = 300000;
  std::vector<double> vals(n);
  for (long i = 0; i < n; ++i) vals[i] = urand(-1, 1) * std::pow(10.0, urand(-8, 8));
  auto term = [&](long i) { return vals[i]; };

  setenv("DCONELAB_THREADS", "1", 1);
  double s1 = sum_compensated(n, term);
  setenv("DCONELAB_THREADS", "7", 1);
  double s7 = sum_compensated(n, term);
  unsetenv("DCONELAB_THREADS");
  CHECK(s1 == s7);

  // sanity of the value itself against long-double accumulation
  long double ref = 0;
  for (long i = 0; i < n; ++i) ref += vals[i];
  CHECK(std::abs(s1 - static_cast<double>(ref)) < 1e-6 * std::abs(s1) + 1e-6);
}
