#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bmcap/channel_model.hpp"
#include "bmcap/common.hpp"
#include "bmcap/strategy.hpp"

namespace bmcap {

// I(input; output) in bits for a row-stochastic kernel, 0 log 0 = 0.
double mutual_information(std::span<const double> p_in, const double* kernel,
                          std::size_t rows, std::size_t cols);

double mutual_information(std::span<const double> p_t,
                          const EquivalentChannel& channel);

// I(T; Y | V) in bits from a joint table over (t, y, v),
// joint[(t * ny + y) * nv + v].
double conditional_mutual_information(std::span<const double> joint,
                                      std::size_t nt, std::size_t ny,
                                      std::size_t nv);

// Joint p(t, y, v) = p_t(t) * channel row, for the conditional form above.
std::vector<double> strategy_output_joint(std::span<const double> p_t,
                                          const EquivalentChannel& channel);

struct SolverOptions {
  double tol = 1e-9;  // upper-lower bound gap, bits per channel use
  int max_iter = 100000;
  ExecMode exec = ExecMode::Parallel;
};

struct CapacityResult {
  double capacity_bits_per_use = 0.0;
  std::vector<double> optimal_p_t;
  int iterations = 0;
  double gap = 0.0;  // bits per channel use
  bool converged = false;
  int n0 = 1;
};

// Alternating maximization of I(T; Y, V) over strategy distributions.
// Stops when the standard per-iteration upper/lower capacity bound gap drops
// below tol; the reported value is the final lower bound over n0. The lower
// bound is nondecreasing across iterations.
CapacityResult blahut_arimoto(const EquivalentChannel& channel,
                              const SolverOptions& opts = {});

// Test oracle: simplex grid search refined by pairwise-exchange coordinate
// ascent, entirely independent of the alternating-maximization path. Only
// meant for small channels; rejects t_count > 8. The grid is coarsened when
// the requested resolution would enumerate more than ~2e5 points; accuracy
// comes from the ascent refinement, bounded by the final line-search width
// times the variation of I along exchange directions. Returns bits per use.
double brute_force_capacity(const EquivalentChannel& channel,
                            double resolution = 0.01);

// Full pipeline: observation kernel -> equivalent channel -> solver.
CapacityResult capacity_bm(const BlockChannelSpec& spec,
                           const SolverOptions& opts = {},
                           std::uint64_t cap = kDefaultStrategyCap);

namespace detail {

// Generic alternating-maximization core on a row-stochastic kernel,
// value in bits (not normalized by block length).
struct BaCore {
  double value_bits = 0.0;
  std::vector<double> p;
  int iterations = 0;
  double gap_bits = 0.0;
  bool converged = false;
  std::vector<double> lower_bound_trace;  // bits, one entry per iteration
};

BaCore ba_core(const double* kernel, std::size_t rows, std::size_t cols,
               double tol_bits, int max_iter, ExecMode exec);

}  // namespace detail

}  // namespace bmcap
