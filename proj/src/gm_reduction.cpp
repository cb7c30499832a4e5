#include "bmcap/gm_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmcap/rng.hpp"
#include "bmcap/tuple_index.hpp"

namespace bmcap {

namespace {

constexpr double kPointMassThreshold = 1.0 - 1e-12;

}  // namespace

std::optional<DeterministicCsitMap> detect_deterministic_csit(
    const BlockChannelSpec& spec) {
  require_valid(spec);
  const std::size_t ns = spec.ns(), nu = spec.nu(), nv = spec.nv();

  DeterministicCsitMap map;
  map.k.assign(nv, 0);
  map.defined.assign(nv, false);

  for (std::size_t vi = 0; vi < nv; ++vi) {
    double pv = 0.0;
    std::vector<double> mass(nu, 0.0);
    for (std::size_t si = 0; si < ns; ++si)
      for (std::size_t ui = 0; ui < nu; ++ui) {
        const double p = spec.joint(si, ui, vi);
        mass[ui] += p;
        pv += p;
      }
    if (pv <= 0.0) continue;
    std::size_t best = 0;
    for (std::size_t ui = 1; ui < nu; ++ui)
      if (mass[ui] > mass[best]) best = ui;
    if (mass[best] / pv < kPointMassThreshold) return std::nullopt;
    map.k[vi] = best;
    map.defined[vi] = true;
  }
  return map;
}

GmResult capacity_gm(const BlockChannelSpec& spec, const SolverOptions& opts) {
  require_valid(spec);
  if (spec.n0 != 1)
    throw std::invalid_argument(
        "capacity_gm: only defined for n0 = 1 (the causal input constraint "
        "couples CSIT values for longer blocks)");
  if (!detect_deterministic_csit(spec))
    throw std::invalid_argument(
        "capacity_gm: CSIT is not a deterministic function of the CSIR");

  const ObservationKernel obs = compose_observation_kernel(spec);
  const std::size_t nyv = obs.nyv();

  GmResult result;
  result.capacity_bits_per_use = 0.0;
  result.per_u_capacity.assign(obs.nu, 0.0);
  result.per_u_p_x.assign(obs.nu,
                          std::vector<double>(obs.nx, 1.0 / double(obs.nx)));
  result.converged = true;

  std::vector<double> w(obs.nx * nyv);
  for (std::size_t ui = 0; ui < obs.nu; ++ui) {
    const double pu = obs.csit_marginal[ui];
    if (pu <= 0.0) continue;
    for (std::size_t xi = 0; xi < obs.nx; ++xi)
      for (std::size_t o = 0; o < nyv; ++o)
        w[xi * nyv + o] = obs.row(xi, ui)[o];
    detail::BaCore core =
        detail::ba_core(w.data(), obs.nx, nyv, opts.tol, opts.max_iter,
                        opts.exec);
    result.per_u_capacity[ui] = core.value_bits;
    result.per_u_p_x[ui] = std::move(core.p);
    result.capacity_bits_per_use += pu * core.value_bits;
    result.converged = result.converged && core.converged;
  }
  return result;
}

std::vector<double> strategy_distribution_from_conditional(
    const std::vector<std::vector<double>>& p_x_given_u, int x_size,
    int u_size) {
  if (p_x_given_u.size() != static_cast<std::size_t>(u_size))
    throw std::invalid_argument("conditional table must have one row per u");
  const std::uint64_t t_count =
      strategy_count(x_size, u_size, 1, kDefaultStrategyCap);

  // Independent choices per CSIT value: p_t(t) = prod_u p(t(u) | u). Summing
  // over strategies pinned at one (u0, x0) telescopes to p(x0 | u0), so this
  // is a feasible inversion of the induced-distribution constraints.
  std::vector<double> p_t(t_count, 1.0);
  for (std::uint64_t t = 0; t < t_count; ++t) {
    std::uint64_t rest = t;
    for (int u = u_size - 1; u >= 0; --u) {
      const int x = static_cast<int>(rest % x_size);
      rest /= x_size;
      p_t[t] *= p_x_given_u[static_cast<std::size_t>(u)]
                           [static_cast<std::size_t>(x)];
    }
  }
  return p_t;
}

double input_conditional_information(
    const ObservationKernel& kernel,
    const std::vector<std::vector<double>>& p_x_given_u) {
  const std::size_t nx = kernel.nx, nu = kernel.nu, ny = kernel.ny,
                    nv = kernel.nv;
  std::vector<double> joint(nx * ny * nv, 0.0);
  for (std::size_t ui = 0; ui < nu; ++ui) {
    const double pu = kernel.csit_marginal[ui];
    if (pu == 0.0) continue;
    for (std::size_t xi = 0; xi < nx; ++xi) {
      const double px = pu * p_x_given_u[ui][xi];
      if (px == 0.0) continue;
      const double* row = kernel.row(xi, ui);
      for (std::size_t yi = 0; yi < ny; ++yi)
        for (std::size_t vi = 0; vi < nv; ++vi)
          joint[(xi * ny + yi) * nv + vi] += px * row[yi * nv + vi];
    }
  }
  return conditional_mutual_information(joint, nx, ny, nv);
}

ReductionReport verify_reduction(const BlockChannelSpec& spec, double tol,
                                 int n_samples, std::uint64_t seed,
                                 const SolverOptions& opts) {
  auto map = detect_deterministic_csit(spec);
  if (!map)
    throw std::invalid_argument(
        "verify_reduction: CSIT is not a deterministic function of the CSIR");

  SolverOptions solver = opts;
  solver.tol = std::min(solver.tol, tol);

  const ObservationKernel obs = compose_observation_kernel(spec);
  EquivalentChannel channel =
      build_equivalent_channel(spec, kDefaultStrategyCap, solver.exec);
  CapacityResult general = blahut_arimoto(channel, solver);

  ReductionReport report;
  report.csit_map = *map;
  report.capacity_strategy = general.capacity_bits_per_use;
  report.solvers_converged = general.converged;
  report.gm_applicable = (spec.n0 == 1);

  // Fixed-distribution sandwich: at any strategy distribution, the strategy
  // channel and the induced input law carry the same conditional information
  // when the CSIT is a function of the CSIR. Both slacks should vanish.
  Rng rng(seed);
  std::vector<int> u_tuple(spec.n0);
  for (int i = 0; i < n_samples; ++i) {
    std::vector<double> p_t(channel.t_count);
    double total = 0.0;
    for (auto& p : p_t) {
      p = -std::log(1.0 - rng.unit());
      total += p;
    }
    for (auto& p : p_t) p /= total;

    SandwichSample sample;
    std::vector<double> joint = strategy_output_joint(p_t, channel);
    sample.i_strategy_bits = conditional_mutual_information(
        joint, channel.t_count, channel.ny, channel.nv);

    std::vector<std::vector<double>> induced(obs.nu);
    for (std::size_t ui = 0; ui < obs.nu; ++ui) {
      index_to_tuple(ui, spec.u.size, std::span<int>(u_tuple));
      induced[ui] = induced_input_distribution(p_t, u_tuple, spec.x.size,
                                               spec.u.size, spec.n0);
    }
    sample.i_input_bits = input_conditional_information(obs, induced);
    sample.upper_slack = sample.i_input_bits - sample.i_strategy_bits;
    sample.lower_slack = sample.i_strategy_bits - sample.i_input_bits;
    report.samples.push_back(sample);
  }

  if (report.gm_applicable) {
    GmResult gm = capacity_gm(spec, solver);
    report.capacity_multiplexed = gm.capacity_bits_per_use;
    report.abs_difference =
        std::abs(report.capacity_strategy - report.capacity_multiplexed);
    report.solvers_converged = report.solvers_converged && gm.converged;

    // Recover a strategy distribution for the multiplexed optimum and check
    // it reproduces the target conditionals and rate.
    std::vector<double> p_t = strategy_distribution_from_conditional(
        gm.per_u_p_x, spec.x.size, spec.u.size);
    double residual = 0.0;
    for (std::size_t ui = 0; ui < obs.nu; ++ui) {
      if (obs.csit_marginal[ui] == 0.0) continue;
      index_to_tuple(ui, spec.u.size, std::span<int>(u_tuple));
      std::vector<double> induced = induced_input_distribution(
          p_t, u_tuple, spec.x.size, spec.u.size, spec.n0);
      for (std::size_t xi = 0; xi < obs.nx; ++xi)
        residual = std::max(residual,
                            std::abs(induced[xi] - gm.per_u_p_x[ui][xi]));
    }
    report.inversion_residual = residual;

    std::vector<double> joint = strategy_output_joint(p_t, channel);
    report.inversion_rate_bits = conditional_mutual_information(
        joint, channel.t_count, channel.ny, channel.nv);
    const double input_at_opt =
        input_conditional_information(obs, gm.per_u_p_x);
    report.inversion_slack = report.inversion_rate_bits - input_at_opt;
  }
  return report;
}

}  // namespace bmcap
