#include "bmcap/strategy.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmcap {

namespace {

// Total number of table entries, sum over positions of u_size^i.
std::uint64_t digit_count(int u_size, int n0) {
  std::uint64_t total = 0, prefixes = 1;
  for (int i = 1; i <= n0; ++i) {
    prefixes *= static_cast<std::uint64_t>(u_size);
    total += prefixes;
  }
  return total;
}

}  // namespace

namespace {

constexpr std::uint64_t kU64Max = ~std::uint64_t{0};

// x_size^digits saturated at 2^64 - 1.
std::uint64_t strategy_count_saturated(int x_size, int u_size, int n0) {
  std::uint64_t count = 1;
  const std::uint64_t digits = digit_count(u_size, n0);
  for (std::uint64_t d = 0; d < digits; ++d) {
    if (count > kU64Max / static_cast<std::uint64_t>(x_size)) return kU64Max;
    count *= static_cast<std::uint64_t>(x_size);
  }
  return count;
}

}  // namespace

std::uint64_t strategy_count(int x_size, int u_size, int n0,
                             std::uint64_t cap) {
  if (x_size < 1 || u_size < 1 || n0 < 1)
    throw std::invalid_argument("strategy_count: sizes and n0 must be >= 1");
  const std::uint64_t count = strategy_count_saturated(x_size, u_size, n0);
  if (count > cap) {
    const std::string shown =
        count == kU64Max ? "at least 2^64 - 1" : std::to_string(count);
    throw CapExceededError("strategy enumeration needs " + shown +
                               " strategies, cap is " + std::to_string(cap),
                           count, cap);
  }
  return count;
}

Strategy index_to_strategy(StrategyIndex index, int x_size, int u_size,
                           int n0) {
  const std::uint64_t count = strategy_count_saturated(x_size, u_size, n0);
  if (index >= count)
    throw std::out_of_range("strategy index " + std::to_string(index) +
                            " out of range [0, " + std::to_string(count) + ")");

  Strategy t;
  t.x_size = x_size;
  t.u_size = u_size;
  t.maps.resize(n0);
  std::uint64_t prefixes = 1;
  for (int i = 0; i < n0; ++i) {
    prefixes *= static_cast<std::uint64_t>(u_size);
    t.maps[i].assign(prefixes, 0);
  }
  // Last entry is the least significant digit.
  for (int i = n0 - 1; i >= 0; --i) {
    for (std::size_t e = t.maps[i].size(); e-- > 0;) {
      t.maps[i][e] = static_cast<int>(index % x_size);
      index /= x_size;
    }
  }
  return t;
}

StrategyIndex strategy_to_index(const Strategy& strategy) {
  StrategyIndex index = 0;
  for (const auto& table : strategy.maps)
    for (int sym : table) {
      if (sym < 0 || sym >= strategy.x_size)
        throw std::out_of_range("strategy table entry out of alphabet range");
      index = index * strategy.x_size + static_cast<StrategyIndex>(sym);
    }
  return index;
}

std::vector<int> apply_strategy(const Strategy& strategy,
                                std::span<const int> u_tuple) {
  const int n0 = strategy.n0();
  if (u_tuple.size() != static_cast<std::size_t>(n0))
    throw std::invalid_argument("apply_strategy: u-tuple length != n0");
  std::vector<int> x(n0);
  std::size_t prefix = 0;
  for (int i = 0; i < n0; ++i) {
    prefix = prefix * strategy.u_size + static_cast<std::size_t>(u_tuple[i]);
    x[i] = strategy.maps[i][prefix];
  }
  return x;
}

std::size_t apply_strategy_index(const Strategy& strategy, std::size_t u_index,
                                 int n0) {
  std::vector<int> u(n0);
  index_to_tuple(u_index, strategy.u_size, std::span<int>(u));
  std::vector<int> x = apply_strategy(strategy, u);
  return tuple_to_index(x, strategy.x_size);
}

namespace {

void fill_equivalent_row(const ObservationKernel& obs, const Strategy& t,
                         int n0, double* row) {
  const std::size_t nyv = obs.nyv();
  for (std::size_t o = 0; o < nyv; ++o) row[o] = 0.0;
  for (std::size_t ui = 0; ui < obs.nu; ++ui) {
    const double pu = obs.csit_marginal[ui];
    if (pu == 0.0) continue;
    const std::size_t xi = apply_strategy_index(t, ui, n0);
    const double* src = obs.row(xi, ui);
    for (std::size_t o = 0; o < nyv; ++o) row[o] += pu * src[o];
  }
}

}  // namespace

EquivalentChannel build_equivalent_channel(const BlockChannelSpec& spec,
                                           std::uint64_t cap, ExecMode exec) {
  require_valid(spec);
  const std::uint64_t t_count =
      strategy_count(spec.x.size, spec.u.size, spec.n0, cap);
  const ObservationKernel obs = compose_observation_kernel(spec);

  EquivalentChannel ch;
  ch.t_count = t_count;
  ch.ny = obs.ny;
  ch.nv = obs.nv;
  ch.n_outputs = obs.nyv();
  ch.n0 = spec.n0;
  ch.x_size = spec.x.size;
  ch.u_size = spec.u.size;
  ch.y_size = spec.y.size;
  ch.v_size = spec.v.size;
  ch.provenance = spec.name;
  ch.kernel.assign(t_count * ch.n_outputs, 0.0);

  const std::int64_t rows = static_cast<std::int64_t>(t_count);
  if (exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < rows; ++t) {
      Strategy strat = index_to_strategy(static_cast<StrategyIndex>(t),
                                         spec.x.size, spec.u.size, spec.n0);
      fill_equivalent_row(obs, strat, spec.n0,
                          ch.kernel.data() + t * ch.n_outputs);
    }
  } else {
    for (std::int64_t t = 0; t < rows; ++t) {
      Strategy strat = index_to_strategy(static_cast<StrategyIndex>(t),
                                         spec.x.size, spec.u.size, spec.n0);
      fill_equivalent_row(obs, strat, spec.n0,
                          ch.kernel.data() + t * ch.n_outputs);
    }
  }
  return ch;
}

std::vector<double> induced_input_distribution(std::span<const double> p_t,
                                               std::span<const int> u_tuple,
                                               int x_size, int u_size,
                                               int n0) {
  const std::size_t nx = tuple_count(x_size, n0);
  std::vector<double> p_x(nx, 0.0);
  for (std::size_t t = 0; t < p_t.size(); ++t) {
    if (p_t[t] == 0.0) continue;
    Strategy strat =
        index_to_strategy(static_cast<StrategyIndex>(t), x_size, u_size, n0);
    std::vector<int> x = apply_strategy(strat, u_tuple);
    p_x[tuple_to_index(x, x_size)] += p_t[t];
  }
  return p_x;
}

}  // namespace bmcap
