// Timing comparison of the OpenMP kernels against their serial reference
// paths. The two paths are required to agree bit-for-bit; this binary checks
// that while measuring the speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#include "bmcap/capacity.hpp"
#include "bmcap/coding_sim.hpp"
#include "bmcap/strategy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bmcap;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// |U| = 16 CSIT values with n0 = 1 gives 2^16 strategies; big enough for the
// row-parallel kernels to matter.
BlockChannelSpec wide_csit_spec() {
  BlockChannelSpec spec;
  spec.name = "bench-wide-csit";
  spec.x = {"x", 2};
  spec.y = {"y", 4};
  spec.s = {"s", 16};
  spec.u = {"u", 16};
  spec.v = {"v", 4};
  spec.n0 = 1;
  spec.channel_kernel.assign(spec.nx() * spec.ns() * spec.ny(), 0.0);
  spec.side_info_joint.assign(spec.ns() * spec.nu() * spec.nv(), 0.0);
  for (std::size_t xi = 0; xi < spec.nx(); ++xi)
    for (std::size_t si = 0; si < spec.ns(); ++si) {
      const std::size_t hit = (xi + si) % spec.ny();
      for (std::size_t yi = 0; yi < spec.ny(); ++yi)
        spec.channel_kernel[(xi * spec.ns() + si) * spec.ny() + yi] =
            (yi == hit) ? 0.7 : 0.1;
    }
  for (std::size_t si = 0; si < spec.ns(); ++si) {
    const std::size_t ui = si;
    const std::size_t vi = si % spec.nv();
    spec.side_info_joint[(si * spec.nu() + ui) * spec.nv() + vi] = 1.0 / 16.0;
  }
  return spec;
}

BlockChannelSpec inverter_pair_spec() {
  BlockChannelSpec spec;
  spec.name = "bench-inverter-pair";
  spec.x = {"x", 2};
  spec.y = {"y", 2};
  spec.s = {"s", 2};
  spec.u = {"u", 2};
  spec.v = {"v", 1};
  spec.n0 = 1;
  spec.channel_kernel = {1, 0, 0, 1, 0, 1, 1, 0};  // s=0 clean, s=1 flip
  spec.side_info_joint = {0.5, 0, 0, 0.5};
  return spec;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both columns run serially\n\n");
#endif

  const BlockChannelSpec wide = wide_csit_spec();

  auto t0 = std::chrono::steady_clock::now();
  EquivalentChannel serial_ch =
      build_equivalent_channel(wide, 65536, ExecMode::Serial);
  const double build_serial = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  EquivalentChannel parallel_ch =
      build_equivalent_channel(wide, 65536, ExecMode::Parallel);
  const double build_parallel = ms_since(t0);
  report("build_equivalent_channel", build_serial, build_parallel,
         serial_ch.kernel == parallel_ch.kernel);

  SolverOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 200;  // fixed iteration count; this measures the kernels

  opts.exec = ExecMode::Serial;
  t0 = std::chrono::steady_clock::now();
  CapacityResult serial_cap = blahut_arimoto(serial_ch, opts);
  const double ba_serial = ms_since(t0);

  opts.exec = ExecMode::Parallel;
  t0 = std::chrono::steady_clock::now();
  CapacityResult parallel_cap = blahut_arimoto(parallel_ch, opts);
  const double ba_parallel = ms_since(t0);
  report("blahut_arimoto (200 it)", ba_serial, ba_parallel,
         serial_cap.capacity_bits_per_use == parallel_cap.capacity_bits_per_use &&
             serial_cap.optimal_p_t == parallel_cap.optimal_p_t);

  const BlockChannelSpec sim_spec = inverter_pair_spec();
  SimOptions sim;
  sim.exec = ExecMode::Serial;
  t0 = std::chrono::steady_clock::now();
  SimulationReport serial_sim =
      estimate_error_rate(sim_spec, 0.8, 8, 20000, 42, sim);
  const double sim_serial = ms_since(t0);

  sim.exec = ExecMode::Parallel;
  t0 = std::chrono::steady_clock::now();
  SimulationReport parallel_sim =
      estimate_error_rate(sim_spec, 0.8, 8, 20000, 42, sim);
  const double sim_parallel = ms_since(t0);
  report("estimate_error_rate (20k)", sim_serial, sim_parallel,
         serial_sim.errors == parallel_sim.errors);

  return 0;
}
