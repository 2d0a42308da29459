#include "dcone/grid.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace dcone {

void GridSpec::validate() const {
  if (!(L > 1.0)) throw std::invalid_argument("grid: L must exceed 1");
  if (N < 16 || N % 2 != 0) throw std::invalid_argument("grid: N must be even and >= 16");
}

int thread_count() {
  if (const char* env = std::getenv("DCONELAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {
constexpr long kChunk = 8192;
}

void parallel_chunks(long n, const std::function<void(long, long)>& fn) {
  if (n <= 0) return;
  const long nblocks = (n + kChunk - 1) / kChunk;
  const int nthreads = std::min<long>(thread_count(), nblocks);
  if (nthreads <= 1) {
    for (long b = 0; b < nblocks; ++b) fn(b * kChunk, std::min(n, (b + 1) * kChunk));
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1))
      fn(b * kChunk, std::min(n, (b + 1) * kChunk));
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

namespace {
struct Neumaier {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    c += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};
}  // namespace

double sum_compensated(long n, const std::function<double(long)>& term) {
  if (n <= 0) return 0.0;
  const long nblocks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nblocks, 0.0);
  parallel_chunks(n, [&](long b, long e) {
    Neumaier acc;
    for (long i = b; i < e; ++i) acc.add(term(i));
    partial[b / kChunk] = acc.get();
  });
  Neumaier total;
  for (double p : partial) total.add(p);
  return total.get();
}

cd sum_compensated_c(long n, const std::function<cd(long)>& term) {
  if (n <= 0) return cd(0, 0);
  const long nblocks = (n + kChunk - 1) / kChunk;
  std::vector<cd> partial(nblocks, cd(0, 0));
  parallel_chunks(n, [&](long b, long e) {
    Neumaier re, im;
    for (long i = b; i < e; ++i) {
      cd t = term(i);
      re.add(t.real());
      im.add(t.imag());
    }
    partial[b / kChunk] = cd(re.get(), im.get());
  });
  Neumaier re, im;
  for (cd p : partial) {
    re.add(p.real());
    im.add(p.imag());
  }
  return cd(re.get(), im.get());
}

Dft::Dft(const GridSpec& g, int ncomp) : g_(g), nc_(ncomp) {
  if (g.N < 4 || g.N % 2 != 0) throw std::invalid_argument("dft: N must be even and >= 4");
  const int N = g_.N;
  buf_ = reinterpret_cast<cd*>(fftw_malloc(sizeof(cd) * g_.n3() * nc_));
  if (!buf_) throw std::bad_alloc();
  int n[3] = {N, N, N};
  auto* fb = reinterpret_cast<fftw_complex*>(buf_);
  plan_fwd_ = fftw_plan_many_dft(3, n, nc_, fb, nullptr, nc_, 1, fb, nullptr, nc_, 1,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_many_dft(3, n, nc_, fb, nullptr, nc_, 1, fb, nullptr, nc_, 1,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("dft: planning failed");
}

Dft::~Dft() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  if (buf_) fftw_free(buf_);
}

// Index-to-coordinate offsets put x_j = (j - N/2) h and p_k = (k - N/2) dp,
// which turns the plain DFT into the continuum convention up to the
// checkerboard signs (-1)^{j+k} and a constant ((-1)^{N/2})^3.
Field Dft::run(const Field& in, bool fwd) {
  if (!(in.g == g_) || in.nc != nc_) throw std::invalid_argument("dft: field mismatch");
  const int N = g_.N;
  for (long node = 0, ix = 0; ix < N; ++ix)
    for (long iy = 0; iy < N; ++iy)
      for (long iz = 0; iz < N; ++iz, ++node) {
        const double sgn = ((ix + iy + iz) & 1) ? -1.0 : 1.0;
        for (int c = 0; c < nc_; ++c) buf_[node * nc_ + c] = sgn * in.at(node, c);
      }
  fftw_execute(static_cast<fftw_plan>(fwd ? plan_fwd_ : plan_bwd_));
  const double s0 = (N / 2 % 2 == 0) ? 1.0 : -1.0;  // ((-1)^{N/2})^3
  const double h = g_.h();
  const double scale = fwd ? s0 * h * h * h : s0 / (8.0 * g_.L * g_.L * g_.L);
  Field out(g_, nc_);
  for (long node = 0, ix = 0; ix < N; ++ix)
    for (long iy = 0; iy < N; ++iy)
      for (long iz = 0; iz < N; ++iz, ++node) {
        const double sgn = (((ix + iy + iz) & 1) ? -scale : scale);
        for (int c = 0; c < nc_; ++c) out.at(node, c) = sgn * buf_[node * nc_ + c];
      }
  return out;
}

Field Dft::forward(const Field& pos) { return run(pos, true); }
Field Dft::inverse(const Field& mom) { return run(mom, false); }

}  // namespace dcone
