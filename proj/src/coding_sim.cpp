#include "bmcap/coding_sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmcap {

Codebook generate_codebook(std::span<const double> p_t, double rate_bits,
                           int blocks, int n0, std::uint64_t seed,
                           std::uint64_t word_cap) {
  if (rate_bits < 0.0)
    throw std::invalid_argument("generate_codebook: rate must be >= 0");
  if (blocks < 1)
    throw std::invalid_argument("generate_codebook: J must be >= 1");

  const double n = static_cast<double>(blocks) * static_cast<double>(n0);
  // ceil(n R) with a hair of slack so exact integer products stay exact.
  const double bits = std::ceil(n * rate_bits - 1e-9);
  if (bits >= 63.0)
    throw CapExceededError("codebook would need 2^" +
                               std::to_string(static_cast<long>(bits)) +
                               " words, cap is " + std::to_string(word_cap),
                           ~std::uint64_t{0}, word_cap);
  const std::uint64_t word_count = std::uint64_t{1}
                                   << static_cast<unsigned>(bits);
  if (word_count > word_cap)
    throw CapExceededError("codebook needs " + std::to_string(word_count) +
                               " words, cap is " + std::to_string(word_cap),
                           word_count, word_cap);

  Codebook book;
  book.rate_bits = rate_bits;
  book.blocks = blocks;
  book.word_count = word_count;
  book.seed = seed;
  book.words.resize(word_count * static_cast<std::uint64_t>(blocks));

  Rng rng(seed, 0);
  for (auto& entry : book.words)
    entry = static_cast<StrategyIndex>(rng.categorical(p_t));
  return book;
}

std::array<std::size_t, 3> sample_side_info(const BlockChannelSpec& spec,
                                            Rng& rng) {
  const std::size_t idx = rng.categorical(spec.side_info_joint);
  const std::size_t nu = spec.nu(), nv = spec.nv();
  return {idx / (nu * nv), (idx / nv) % nu, idx % nv};
}

std::size_t sample_output(const BlockChannelSpec& spec, std::size_t x_index,
                          std::size_t s_index, Rng& rng) {
  const std::size_t ny = spec.ny();
  const double* row =
      spec.channel_kernel.data() + (x_index * spec.ns() + s_index) * ny;
  return rng.categorical({row, ny});
}

namespace {

std::pair<std::vector<int>, std::vector<int>> simulate_with_rng(
    const BlockChannelSpec& spec, const Codebook& codebook, std::uint64_t w,
    Rng& rng) {
  if (w >= codebook.word_count)
    throw std::out_of_range("simulate_transmission: message index " +
                            std::to_string(w) + " out of range");
  const int n0 = spec.n0;
  const int blocks = codebook.blocks;
  std::vector<int> ys(static_cast<std::size_t>(blocks) * n0);
  std::vector<int> vs(static_cast<std::size_t>(blocks) * n0);
  std::vector<int> u_tuple(n0);

  for (int j = 0; j < blocks; ++j) {
    const auto [si, ui, vi] = sample_side_info(spec, rng);
    index_to_tuple(ui, spec.u.size, std::span<int>(u_tuple));
    Strategy strat = index_to_strategy(codebook.word(w)[j], spec.x.size,
                                       spec.u.size, n0);
    const std::vector<int> x_tuple = apply_strategy(strat, u_tuple);
    const std::size_t xi = tuple_to_index(x_tuple, spec.x.size);
    const std::size_t yi = sample_output(spec, xi, si, rng);

    const std::size_t off = static_cast<std::size_t>(j) * n0;
    index_to_tuple(yi, spec.y.size, std::span<int>(ys).subspan(off, n0));
    index_to_tuple(vi, spec.v.size, std::span<int>(vs).subspan(off, n0));
  }
  return {std::move(ys), std::move(vs)};
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> simulate_transmission(
    const BlockChannelSpec& spec, const Codebook& codebook, std::uint64_t w,
    std::uint64_t seed) {
  Rng rng(seed);
  return simulate_with_rng(spec, codebook, w, rng);
}

std::uint64_t decode_ml(std::span<const int> ys, std::span<const int> vs,
                        const Codebook& codebook,
                        const EquivalentChannel& channel) {
  const int n0 = channel.n0;
  const std::size_t n =
      static_cast<std::size_t>(codebook.blocks) * static_cast<std::size_t>(n0);
  if (ys.size() != n || vs.size() != n)
    throw std::invalid_argument("decode_ml: sequence length must be J*n0");

  // Flatten received blocks to output-column indices once.
  std::vector<std::size_t> out_cols(codebook.blocks);
  for (int j = 0; j < codebook.blocks; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * n0;
    const std::size_t yi = tuple_to_index(ys.subspan(off, n0), channel.y_size);
    const std::size_t vi = tuple_to_index(vs.subspan(off, n0), channel.v_size);
    out_cols[j] = yi * channel.nv + vi;
  }

  std::uint64_t best_w = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::uint64_t w = 0; w < codebook.word_count; ++w) {
    const auto word = codebook.word(w);
    double ll = 0.0;
    for (int j = 0; j < codebook.blocks; ++j)
      ll += std::log(channel.row(word[j])[out_cols[j]]);
    if (ll > best_ll) {
      best_ll = ll;
      best_w = w;
    }
  }
  return best_w;
}

WilsonInterval wilson_interval(long errors, long trials, double z) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The endpoints are exact 0/1 at the boundary counts; rounding must not
  // push the interval off the point estimate.
  const double low = errors == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = errors == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

namespace {

bool run_one_trial(const BlockChannelSpec& spec, const Codebook& book,
                   const EquivalentChannel& channel, std::uint64_t seed,
                   std::uint64_t trial) {
  Rng rng(seed, trial + 1);
  const std::uint64_t w = rng.below(book.word_count);
  auto [ys, vs] = simulate_with_rng(spec, book, w, rng);
  return decode_ml(ys, vs, book, channel) != w;
}

}  // namespace

SimulationReport estimate_error_rate(const BlockChannelSpec& spec,
                                     double rate_bits, int blocks, long trials,
                                     std::uint64_t seed,
                                     const SimOptions& opts) {
  if (trials < 1)
    throw std::invalid_argument("estimate_error_rate: trials must be >= 1");
  require_valid(spec);

  EquivalentChannel channel =
      build_equivalent_channel(spec, opts.strategy_cap, opts.exec);
  std::vector<double> p_t = opts.p_t;
  if (p_t.empty()) {
    p_t = blahut_arimoto(channel, opts.solver).optimal_p_t;
  } else if (p_t.size() != channel.t_count) {
    throw std::invalid_argument(
        "estimate_error_rate: p_t length does not match strategy count");
  }

  Codebook fixed;
  if (!opts.resample_codebook)
    fixed = generate_codebook(p_t, rate_bits, blocks, spec.n0, seed,
                              opts.word_cap);

  long errors = 0;
  if (opts.exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static) reduction(+ : errors)
    for (long k = 0; k < trials; ++k) {
      const Codebook book =
          opts.resample_codebook
              ? generate_codebook(p_t, rate_bits, blocks, spec.n0,
                                  splitmix64(seed) ^ (std::uint64_t(k) + 1),
                                  opts.word_cap)
              : Codebook{};
      const Codebook& use = opts.resample_codebook ? book : fixed;
      errors += run_one_trial(spec, use, channel, seed,
                              static_cast<std::uint64_t>(k))
                    ? 1
                    : 0;
    }
  } else {
    for (long k = 0; k < trials; ++k) {
      const Codebook book =
          opts.resample_codebook
              ? generate_codebook(p_t, rate_bits, blocks, spec.n0,
                                  splitmix64(seed) ^ (std::uint64_t(k) + 1),
                                  opts.word_cap)
              : Codebook{};
      const Codebook& use = opts.resample_codebook ? book : fixed;
      errors += run_one_trial(spec, use, channel, seed,
                              static_cast<std::uint64_t>(k))
                    ? 1
                    : 0;
    }
  }

  SimulationReport report;
  report.rate_bits = rate_bits;
  report.blocks = blocks;
  report.trials = trials;
  report.errors = errors;
  report.p_e_hat = static_cast<double>(errors) / static_cast<double>(trials);
  report.ci_95 = wilson_interval(errors, trials);
  report.seed = seed;
  return report;
}

}  // namespace bmcap
