#pragma once
// Cubic lattice [-L,L)^3, multi-component complex fields on it, discrete
// Fourier transforms in the continuum conventions
//   F(p) = h^3 sum_x f(x) e^{-i p.x},   f(x) = (2L)^{-3} sum_p F(p) e^{+i p.x},
// and deterministic (thread-count independent) compensated reductions.

#include <complex>
#include <functional>
#include <vector>

#include "dcone/smat.hpp"

namespace dcone {

struct GridSpec {
  double L = 2.5;
  int N = 48;

  double h() const { return 2.0 * L / N; }
  double dp() const { return M_PI / L; }
  long n3() const { return static_cast<long>(N) * N * N; }
  double coord(int i) const { return (i - N / 2) * h(); }
  double mom(int k) const { return (k - N / 2) * dp(); }
  int zero_index() const { return N / 2; }
  int neg_index(int k) const { return (N - k) % N; }  // index of -p (alias on the k=0 face)
  long node(int ix, int iy, int iz) const {
    return (static_cast<long>(ix) * N + iy) * N + iz;
  }
  // Config-boundary validation (CLI / state files). Internal code may use
  // coarser grids (any even N >= 4), e.g. for cross-checking oracles.
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

struct Field {
  GridSpec g;
  int nc = 0;
  std::vector<cd> v;

  Field() = default;
  Field(const GridSpec& gs, int ncomp)
      : g(gs), nc(ncomp), v(static_cast<size_t>(gs.n3()) * ncomp, cd(0, 0)) {}
  cd& at(long node, int c) { return v[static_cast<size_t>(node) * nc + c]; }
  const cd& at(long node, int c) const { return v[static_cast<size_t>(node) * nc + c]; }
};

// Worker count: DCONELAB_THREADS when set and positive, else hardware.
int thread_count();

// Runs fn(begin, end) over a fixed chunking of [0, n); chunk boundaries do
// not depend on the worker count, so disjoint-write kernels are
// reproducible bit for bit.
void parallel_chunks(long n, const std::function<void(long, long)>& fn);

// Neumaier-compensated sums evaluated blockwise in index order; the result
// is independent of the worker count.
double sum_compensated(long n, const std::function<double(long)>& term);
cd sum_compensated_c(long n, const std::function<cd(long)>& term);

// FFTW-backed transform pair for fields with ncomp interleaved components.
// Not safe for concurrent use of one instance.
class Dft {
 public:
  Dft(const GridSpec& g, int ncomp);
  ~Dft();
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  Field forward(const Field& pos);   // position -> momentum samples
  Field inverse(const Field& mom);   // momentum -> position samples

 private:
  GridSpec g_;
  int nc_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  cd* buf_ = nullptr;
  Field run(const Field& in, bool fwd);
};

}  // namespace dcone
