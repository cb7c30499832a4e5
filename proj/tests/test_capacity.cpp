#include "bmcap/capacity.hpp"

#include <cmath>

#include "bmcap/rng.hpp"
#include "doctest.h"
#include "spec_gen.hpp"
#include "stat_util.hpp"

using namespace bmcap;
using namespace bmcap::testgen;

namespace {

EquivalentChannel make_channel(std::vector<std::vector<double>> rows,
                               std::size_t ny, std::size_t nv, int n0 = 1) {
  EquivalentChannel ch;
  ch.t_count = rows.size();
  ch.ny = ny;
  ch.nv = nv;
  ch.n_outputs = ny * nv;
  ch.n0 = n0;
  for (const auto& row : rows)
    ch.kernel.insert(ch.kernel.end(), row.begin(), row.end());
  return ch;
}

}  // namespace

TEST_CASE("mutual information of a noiseless channel is log2 k") {
  for (std::size_t k : {2u, 4u, 8u}) {
    std::vector<double> kernel(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) kernel[i * k + i] = 1.0;
    const std::vector<double> p(k, 1.0 / double(k));
    CHECK(mutual_information(p, kernel.data(), k, k) ==
          doctest::Approx(std::log2(double(k))).epsilon(1e-12));
  }
}

TEST_CASE("mutual information of identical rows is zero") {
  const std::vector<double> kernel{0.3, 0.7, 0.3, 0.7};
  const std::vector<double> p{0.6, 0.4};
  CHECK(mutual_information(p, kernel.data(), 2, 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("binary symmetric channel matches 1 - H_b(eps)") {
  const double eps = 0.11;
  const std::vector<double> kernel{1 - eps, eps, eps, 1 - eps};
  const std::vector<double> p{0.5, 0.5};
  CHECK(mutual_information(p, kernel.data(), 2, 2) ==
        doctest::Approx(1.0 - teststat::binary_entropy(eps)).epsilon(1e-12));
}

TEST_CASE("conditional MI vanishes under independence") {
  // p(t, y, v) = p(t) p(y) p(v)
  const std::vector<double> pt{0.3, 0.7}, py{0.6, 0.4}, pv{0.2, 0.8};
  std::vector<double> joint;
  for (double a : pt)
    for (double b : py)
      for (double c : pv) joint.push_back(a * b * c);
  CHECK(conditional_mutual_information(joint, 2, 2, 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("conditional MI with constant V equals plain MI") {
  const std::vector<double> p{0.4, 0.6};
  const std::vector<double> kernel{0.9, 0.1, 0.2, 0.8};
  std::vector<double> joint(4);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t y = 0; y < 2; ++y)
      joint[t * 2 + y] = p[t] * kernel[t * 2 + y];
  CHECK(conditional_mutual_information(joint, 2, 2, 1) ==
        doctest::Approx(mutual_information(p, kernel.data(), 2, 2))
            .epsilon(1e-12));
}

TEST_CASE("I(T;Y,V) = I(T;Y|V) on equivalent channels") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    BlockChannelSpec spec = random_spec(rng, {2, 2, 2, 2, 2, 1});
    const EquivalentChannel ch = build_equivalent_channel(spec);
    const std::vector<double> p_t = random_distribution(rng, ch.t_count);
    const std::vector<double> joint = strategy_output_joint(p_t, ch);
    const double lhs = mutual_information(p_t, ch);
    const double rhs =
        conditional_mutual_information(joint, ch.t_count, ch.ny, ch.nv);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("solver: noiseless strategies reach log2(k)/n0 with uniform p") {
  std::vector<std::vector<double>> rows{
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const EquivalentChannel ch = make_channel(rows, 4, 1);
  const CapacityResult result = blahut_arimoto(ch);
  CHECK(result.converged);
  CHECK(result.capacity_bits_per_use == doctest::Approx(2.0).epsilon(1e-9));
  for (double p : result.optimal_p_t)
    CHECK(p == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("solver: identical rows give zero capacity") {
  std::vector<std::vector<double>> rows{{0.3, 0.7}, {0.3, 0.7}};
  const EquivalentChannel ch = make_channel(rows, 2, 1);
  const CapacityResult result = blahut_arimoto(ch);
  CHECK(result.converged);
  CHECK(result.capacity_bits_per_use == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solver rejects a non-stochastic kernel") {
  std::vector<std::vector<double>> rows{{0.5, 0.4}, {0.3, 0.7}};
  const EquivalentChannel ch = make_channel(rows, 2, 1);
  CHECK_THROWS_AS(blahut_arimoto(ch), std::invalid_argument);
}

TEST_CASE("oracle: noiseless 4-strategy channel reaches 2 bits") {
  std::vector<std::vector<double>> rows{
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  CHECK(brute_force_capacity(make_channel(rows, 4, 1)) ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("oracle: two identical rows give zero") {
  std::vector<std::vector<double>> rows{{0.4, 0.6}, {0.4, 0.6}};
  CHECK(brute_force_capacity(make_channel(rows, 2, 1)) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("oracle rejects more than 8 strategies") {
  std::vector<std::vector<double>> rows(9, std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(brute_force_capacity(make_channel(rows, 2, 1)),
                  std::invalid_argument);
}

TEST_CASE("solver and oracle agree on random 3-strategy channels") {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows;
    for (int t = 0; t < 3; ++t) rows.push_back(random_distribution(rng, 4));
    const EquivalentChannel ch = make_channel(rows, 4, 1);
    const CapacityResult ba = blahut_arimoto(ch);
    const double oracle = brute_force_capacity(ch, 0.01);
    CHECK(ba.converged);
    CHECK(std::abs(ba.capacity_bits_per_use - oracle) <= 1e-4);
  }
}

TEST_CASE("capacity_bm: inverter pair with CSIT is one clean bit") {
  const CapacityResult result = capacity_bm(inverter_pair_spec());
  CHECK(result.converged);
  CHECK(result.capacity_bits_per_use == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("capacity_bm: inverter pair without CSI is useless") {
  const CapacityResult result = capacity_bm(inverter_pair_spec(false));
  CHECK(result.converged);
  CHECK(result.capacity_bits_per_use == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("capacity_bm: perfect CSI decomposes into per-state capacities") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const BlockChannelSpec spec = random_perfect_csi_spec(rng);
    // Degenerate optima can stall the certified gap above tol within the
    // iteration budget (flagged, not raised); the value itself settles long
    // before, which is what the per-state identity tests.
    const CapacityResult result = capacity_bm(spec);
    const double expected = per_state_capacity_sum(spec);
    CHECK(std::abs(result.capacity_bits_per_use - expected) <= 1e-5);
  }
}

TEST_CASE("lower bound grows monotonically and bounds hold") {
  Rng rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const Sizes sz{2, 2, 2, 2, 2, trial < 3 ? 1 : 2};
    BlockChannelSpec spec = random_spec(rng, sz);
    const EquivalentChannel ch = build_equivalent_channel(spec);

    // Re-run the iteration manually to observe the per-iteration value.
    std::vector<double> p(ch.t_count, 1.0 / double(ch.t_count));
    double last = -1e-12;
    for (int iter = 0; iter < 200; ++iter) {
      const double value = mutual_information(p, ch);
      CHECK(value >= last - 1e-12);
      last = value;
      // one multiplicative update, mirroring the solver's step
      std::vector<double> out(ch.n_outputs, 0.0);
      for (std::size_t t = 0; t < ch.t_count; ++t)
        for (std::size_t o = 0; o < ch.n_outputs; ++o)
          out[o] += p[t] * ch.row(t)[o];
      std::vector<double> next(ch.t_count);
      double z = 0.0;
      for (std::size_t t = 0; t < ch.t_count; ++t) {
        double d = 0.0;
        for (std::size_t o = 0; o < ch.n_outputs; ++o) {
          const double w = ch.row(t)[o];
          if (w > 0.0) d += w * std::log(w / out[o]);
        }
        next[t] = p[t] * std::exp(d);
        z += next[t];
      }
      for (std::size_t t = 0; t < ch.t_count; ++t) p[t] = next[t] / z;
    }

    const CapacityResult result = blahut_arimoto(ch);
    double mass = 0.0;
    for (double p : result.optimal_p_t) mass += p;
    CHECK(std::abs(mass - 1.0) <= 1e-10);
    const double cap = result.capacity_bits_per_use;
    CHECK(cap >= 0.0);
    CHECK(cap <= std::log2(double(spec.x.size)) + 1e-9);
    CHECK(cap <= std::log2(double(spec.y.size) * spec.v.size) + 1e-9);
    CHECK(cap <= std::log2(double(ch.t_count)) / spec.n0 + 1e-9);
    CHECK(result.gap <= 1e-9);

    // Every fixed strategy distribution is dominated by the optimum.
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> p_t = random_distribution(rng, ch.t_count);
      const double rate = mutual_information(p_t, ch) / spec.n0;
      CHECK(rate <= cap + 1e-9);
    }
  }
}

TEST_CASE("Eq-identity at the optimum: conditioning on V costs nothing") {
  Rng rng(35);
  BlockChannelSpec spec = random_spec(rng, {2, 2, 2, 2, 2, 1});
  const EquivalentChannel ch = build_equivalent_channel(spec);
  const CapacityResult result = blahut_arimoto(ch);
  const std::vector<double> joint = strategy_output_joint(result.optimal_p_t, ch);
  const double i_joint = mutual_information(result.optimal_p_t, ch);
  const double i_cond =
      conditional_mutual_information(joint, ch.t_count, ch.ny, ch.nv);
  CHECK(std::abs(i_joint - i_cond) <= 1e-9);
}

TEST_CASE("garbling the CSIR never helps") {
  Rng rng(36);
  for (int trial = 0; trial < 5; ++trial) {
    BlockChannelSpec spec = random_spec(rng, {2, 2, 2, 2, 2, 1});
    const double base = capacity_bm(spec).capacity_bits_per_use;
    for (int g = 0; g < 2; ++g) {
      BlockChannelSpec garbled = garble_csir(spec, rng);
      const double worse = capacity_bm(garbled).capacity_bits_per_use;
      CHECK(worse <= base + 1e-6);
    }
  }
}

TEST_CASE("capacity_bm propagates the enumeration cap") {
  Rng rng(37);
  BlockChannelSpec spec = random_spec(rng, {2, 2, 2, 2, 2, 1});
  CHECK_THROWS_AS(capacity_bm(spec, {}, 2), CapExceededError);
}
