#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bmcap {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// One generator per logical stream, derived from (seed, counter). Streams are
// assigned by counter so parallel and sequential execution draw identical
// randomness per trial.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t counter = 0)
      : eng_(splitmix64(splitmix64(seed) ^ splitmix64(~counter))) {}

  // Uniform double in [0, 1), 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1);
    std::uint64_t r;
    do {
      r = eng_() & mask;
    } while (r >= n);
    return r;
  }

  // Sample an index from an (unnormalized is fine) probability vector by
  // CDF walk; the final bucket absorbs rounding slack.
  std::size_t categorical(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    double x = unit() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (x < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bmcap
