#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bmcap/capacity.hpp"
#include "bmcap/channel_model.hpp"
#include "bmcap/common.hpp"
#include "bmcap/rng.hpp"
#include "bmcap/strategy.hpp"

namespace bmcap {

// Random code over strategy indices: 2^ceil(n R) words of J entries each,
// drawn i.i.d. from a strategy distribution.
struct Codebook {
  double rate_bits = 0.0;
  int blocks = 0;  // J
  std::uint64_t word_count = 0;
  std::vector<StrategyIndex> words;  // word_count * blocks, row-major
  std::uint64_t seed = 0;

  std::span<const StrategyIndex> word(std::uint64_t w) const {
    return {words.data() + w * static_cast<std::uint64_t>(blocks),
            static_cast<std::size_t>(blocks)};
  }
};

Codebook generate_codebook(std::span<const double> p_t, double rate_bits,
                           int blocks, int n0, std::uint64_t seed,
                           std::uint64_t word_cap = kDefaultWordCap);

// One draw of (s, u, v) tuple indices from the side-information joint.
std::array<std::size_t, 3> sample_side_info(const BlockChannelSpec& spec,
                                            Rng& rng);

// One y-tuple index from the channel row at (x, s).
std::size_t sample_output(const BlockChannelSpec& spec, std::size_t x_index,
                          std::size_t s_index, Rng& rng);

// Sends message w: per block, draws the side information, applies the
// word's strategy to the realized u-tuple (causal by construction), and
// draws the output. Returns the (y, v) symbol sequences of length J * n0.
std::pair<std::vector<int>, std::vector<int>> simulate_transmission(
    const BlockChannelSpec& spec, const Codebook& codebook, std::uint64_t w,
    std::uint64_t seed);

// Maximum-likelihood decoding over the equivalent channel; the decoder sees
// only (y, v). Ties resolve to the lowest message index.
std::uint64_t decode_ml(std::span<const int> ys, std::span<const int> vs,
                        const Codebook& codebook,
                        const EquivalentChannel& channel);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

WilsonInterval wilson_interval(long errors, long trials,
                               double z = 1.959963984540054);

struct SimulationReport {
  double rate_bits = 0.0;
  int blocks = 0;
  long trials = 0;
  long errors = 0;
  double p_e_hat = 0.0;
  WilsonInterval ci_95;
  std::uint64_t seed = 0;
};

struct SimOptions {
  bool resample_codebook = false;  // fresh codebook per trial if set
  std::uint64_t word_cap = kDefaultWordCap;
  std::uint64_t strategy_cap = kDefaultStrategyCap;
  ExecMode exec = ExecMode::Parallel;
  SolverOptions solver;
  // Codeword distribution; defaults to the solver optimum when empty.
  std::vector<double> p_t;
};

// Monte Carlo error-rate estimate: uniform messages, one stream per trial
// (stream 0 is the codebook), so parallel and serial runs agree exactly.
SimulationReport estimate_error_rate(const BlockChannelSpec& spec,
                                     double rate_bits, int blocks, long trials,
                                     std::uint64_t seed,
                                     const SimOptions& opts = {});

}  // namespace bmcap
