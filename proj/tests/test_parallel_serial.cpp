// The OpenMP kernels must agree with the serial reference paths exactly:
// parallel loops fill disjoint slots and reductions stay ordered, so the
// results are bit-identical, not merely close.

#include "bmcap/capacity.hpp"
#include "bmcap/coding_sim.hpp"
#include "bmcap/rng.hpp"
#include "doctest.h"
#include "spec_gen.hpp"

using namespace bmcap;
using namespace bmcap::testgen;

TEST_CASE("equivalent channel: serial and OpenMP rows are identical") {
  Rng rng(81);
  for (int trial = 0; trial < 3; ++trial) {
    const Sizes sz{2, 2, 2, 2, 2, trial < 2 ? 1 : 2};
    const BlockChannelSpec spec = random_spec(rng, sz);
    const EquivalentChannel serial =
        build_equivalent_channel(spec, kDefaultStrategyCap, ExecMode::Serial);
    const EquivalentChannel parallel =
        build_equivalent_channel(spec, kDefaultStrategyCap, ExecMode::Parallel);
    CHECK(serial.kernel == parallel.kernel);
  }
}

TEST_CASE("solver: serial and OpenMP runs are identical") {
  Rng rng(82);
  for (int trial = 0; trial < 3; ++trial) {
    const BlockChannelSpec spec = random_spec(rng, {2, 3, 2, 2, 2, 1});
    const EquivalentChannel ch = build_equivalent_channel(spec);
    SolverOptions serial{1e-10, 100000, ExecMode::Serial};
    SolverOptions parallel{1e-10, 100000, ExecMode::Parallel};
    const CapacityResult a = blahut_arimoto(ch, serial);
    const CapacityResult b = blahut_arimoto(ch, parallel);
    CHECK(a.capacity_bits_per_use == b.capacity_bits_per_use);
    CHECK(a.iterations == b.iterations);
    CHECK(a.gap == b.gap);
    CHECK(a.optimal_p_t == b.optimal_p_t);
  }
}

TEST_CASE("simulation: serial and OpenMP trial batches are identical") {
  const BlockChannelSpec spec = inverter_pair_spec();
  SimOptions serial;
  serial.exec = ExecMode::Serial;
  SimOptions parallel;
  parallel.exec = ExecMode::Parallel;
  const SimulationReport a = estimate_error_rate(spec, 0.8, 4, 1500, 3, serial);
  const SimulationReport b =
      estimate_error_rate(spec, 0.8, 4, 1500, 3, parallel);
  CHECK(a.errors == b.errors);
  CHECK(a.p_e_hat == b.p_e_hat);

  SUBCASE("also with per-trial codebook resampling") {
    serial.resample_codebook = true;
    parallel.resample_codebook = true;
    const SimulationReport c =
        estimate_error_rate(spec, 0.5, 2, 400, 9, serial);
    const SimulationReport d =
        estimate_error_rate(spec, 0.5, 2, 400, 9, parallel);
    CHECK(c.errors == d.errors);
  }
}
