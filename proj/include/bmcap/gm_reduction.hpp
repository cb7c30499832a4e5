#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bmcap/capacity.hpp"
#include "bmcap/channel_model.hpp"

namespace bmcap {

// CSIT as a function of CSIR: k[v-tuple index] = u-tuple index, defined where
// p(v) > 0.
struct DeterministicCsitMap {
  std::vector<std::size_t> k;
  std::vector<bool> defined;
};

// Returns the map when every positive-probability v-tuple pins its u-tuple
// (conditional mass >= 1 - 1e-12 on one u); otherwise nullopt.
std::optional<DeterministicCsitMap> detect_deterministic_csit(
    const BlockChannelSpec& spec);

struct GmResult {
  double capacity_bits_per_use = 0.0;
  std::vector<double> per_u_capacity;           // bits, given u
  std::vector<std::vector<double>> per_u_p_x;   // maximizing p(x|u)
  bool converged = false;
};

// Multiplexed-coding capacity sum_u p(u) max_{p(x|u)} I(X; Y, V | u), one
// alternating maximization per CSIT value. Only defined for n0 = 1 with
// deterministic CSIT; rejects anything else. For n0 = 1 the causal input
// constraint is vacuous, so this is an independent route to the capacity.
GmResult capacity_gm(const BlockChannelSpec& spec,
                     const SolverOptions& opts = {});

// Recovers a strategy distribution inducing a given conditional p(x|u)
// (n0 = 1): the product construction p_t(t) = prod_u p(t(u)|u), a feasible
// point of the inversion constraints.
std::vector<double> strategy_distribution_from_conditional(
    const std::vector<std::vector<double>>& p_x_given_u, int x_size,
    int u_size);

struct SandwichSample {
  double i_strategy_bits = 0.0;  // I(T; Y | V) at the sampled p_t
  double i_input_bits = 0.0;     // I(X; Y | V) at the induced p(x|u)
  double upper_slack = 0.0;      // i_input - i_strategy  (data processing)
  double lower_slack = 0.0;      // i_strategy - i_input  (deterministic image)
};

struct ReductionReport {
  double capacity_strategy = 0.0;  // general solver, bits per use
  bool solvers_converged = false;
  bool gm_applicable = false;      // n0 == 1
  double capacity_multiplexed = 0.0;
  double abs_difference = 0.0;
  std::vector<SandwichSample> samples;
  // Inversion at the multiplexed optimum (n0 = 1 only).
  double inversion_residual = 0.0;     // max |induced - target| over (u, x)
  double inversion_rate_bits = 0.0;    // I(T; Y | V) at the recovered p_t
  double inversion_slack = 0.0;        // inversion_rate - optimum
  DeterministicCsitMap csit_map;
};

// Numerical check that the general capacity collapses to the multiplexed
// formula under deterministic CSIT: compares both capacities (n0 = 1), and
// for sampled strategy distributions evaluates both sides of the
// equality sandwich, reporting all slacks.
ReductionReport verify_reduction(const BlockChannelSpec& spec,
                                 double tol = 1e-9, int n_samples = 20,
                                 std::uint64_t seed = 1,
                                 const SolverOptions& opts = {});

// I(X; Y | V) in bits for a conditional input law p(x|u) on the composed
// observation kernel (joint over (x, y, v), u marginalized out).
double input_conditional_information(const ObservationKernel& kernel,
                                     const std::vector<std::vector<double>>&
                                         p_x_given_u);

}  // namespace bmcap
