#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmcap/channel_model.hpp"
#include "bmcap/common.hpp"

namespace bmcap {

// A causal within-block strategy: one lookup table per position i = 1..n0,
// mapping each u-prefix of length i (lexicographic index) to an input symbol.
struct Strategy {
  int x_size = 1;
  int u_size = 1;
  // maps[i - 1] has u_size^i entries.
  std::vector<std::vector<int>> maps;

  int n0() const { return static_cast<int>(maps.size()); }
};

using StrategyIndex = std::uint64_t;

// Number of strategies, x_size^(sum of u_size^i). Throws CapExceededError if
// it exceeds cap (or does not fit in 64 bits).
std::uint64_t strategy_count(int x_size, int u_size, int n0,
                             std::uint64_t cap = kDefaultStrategyCap);

// Canonical bijection with [0, strategy_count). Digits are the table entries,
// position-major and lexicographic over u-prefixes within a position, first
// entry most significant.
Strategy index_to_strategy(StrategyIndex index, int x_size, int u_size,
                           int n0);
StrategyIndex strategy_to_index(const Strategy& strategy);

// x_i = t_i(u_1..u_i); reads only the prefix at each position.
std::vector<int> apply_strategy(const Strategy& strategy,
                                std::span<const int> u_tuple);

// Same map on flattened indices: u-tuple index -> x-tuple index.
std::size_t apply_strategy_index(const Strategy& strategy, std::size_t u_index,
                                 int n0);

// The state-free channel from strategy indices to (y, v)-tuples. Row t is the
// p(u)-average of observation rows at x = t(u). Rows sum to 1 and share one
// v-marginal (strategies carry no information about V).
struct EquivalentChannel {
  std::size_t t_count = 0;
  std::size_t n_outputs = 0;  // ny * nv
  std::size_t ny = 1, nv = 1;
  int n0 = 1;
  int x_size = 1, u_size = 1, y_size = 1, v_size = 1;
  std::string provenance;

  std::vector<double> kernel;  // kernel[t * n_outputs + (yi * nv + vi)]

  const double* row(std::size_t t) const {
    return kernel.data() + t * n_outputs;
  }
  double at(std::size_t t, std::size_t yi, std::size_t vi) const {
    return row(t)[yi * nv + vi];
  }
};

EquivalentChannel build_equivalent_channel(
    const BlockChannelSpec& spec, std::uint64_t cap = kDefaultStrategyCap,
    ExecMode exec = ExecMode::Parallel);

// p(x-tuple | u-tuple) induced by a strategy distribution: total p_t mass of
// strategies mapping this u-tuple to each x-tuple.
std::vector<double> induced_input_distribution(std::span<const double> p_t,
                                               std::span<const int> u_tuple,
                                               int x_size, int u_size, int n0);

}  // namespace bmcap
