#pragma once
// Verification suites shared by the acceptance gate and the command-line
// front end: each suite exercises one layer of the library against its
// pinned tolerances and returns a structured report. Also hosts the
// trajectory tracer for the double-cone flow figure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcone/grid.hpp"
#include "dcone/report.hpp"
#include "dcone/smat.hpp"

namespace dcone {

CheckReport run_spinor_suite(std::uint64_t seed);
CheckReport run_flow_suite(std::uint64_t seed);
CheckReport run_wave_suite(std::uint64_t seed, const GridSpec& g = {2.5, 48});
CheckReport run_modular_suite(std::uint64_t seed, const GridSpec& g = {2.0, 48});
CheckReport run_entropy_suite(std::uint64_t seed, const GridSpec& g = {1.8, 48});

// Dispatch by suite name ("spinor", "flow", "wave", "modular", "entropy").
// Unset overrides keep the suite's native grid; the algebraic suites ignore
// grid settings. Throws std::invalid_argument on an unknown name.
CheckReport run_suite(const std::string& name, std::uint64_t seed,
                      std::optional<int> grid_n = std::nullopt,
                      std::optional<double> grid_l = std::nullopt);

struct TraceRow {
  int seed_index = 0;
  double lambda = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;
  int branch = 0;       // sign of the flow denominator at this sample
  bool marker = false;  // branch switch or singular crossing here
};

// Trajectories of the double-cone flow sampled at `steps` uniform lambda
// values in [-lambda_max, lambda_max], projected to the (x0, x1) plane.
// Requires steps >= 2 and lambda_max > 0. Singular crossings emit a marker
// row with NaN coordinates instead of throwing.
std::vector<TraceRow> flow_trace(double lambda_max, int steps,
                                 const std::vector<FourVector>& seeds);

}  // namespace dcone
