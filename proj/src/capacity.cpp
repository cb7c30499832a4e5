#include "bmcap/capacity.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmcap {

namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

double mutual_information(std::span<const double> p_in, const double* kernel,
                          std::size_t rows, std::size_t cols) {
  std::vector<double> out(cols, 0.0);
  for (std::size_t t = 0; t < rows; ++t) {
    const double pt = p_in[t];
    if (pt == 0.0) continue;
    const double* row = kernel + t * cols;
    for (std::size_t o = 0; o < cols; ++o) out[o] += pt * row[o];
  }
  double nats = 0.0;
  for (std::size_t t = 0; t < rows; ++t) {
    const double pt = p_in[t];
    if (pt == 0.0) continue;
    const double* row = kernel + t * cols;
    for (std::size_t o = 0; o < cols; ++o) {
      const double w = row[o];
      if (w > 0.0) nats += pt * w * std::log(w / out[o]);
    }
  }
  return nats / kLn2;
}

double mutual_information(std::span<const double> p_t,
                          const EquivalentChannel& channel) {
  return mutual_information(p_t, channel.kernel.data(), channel.t_count,
                            channel.n_outputs);
}

double conditional_mutual_information(std::span<const double> joint,
                                      std::size_t nt, std::size_t ny,
                                      std::size_t nv) {
  std::vector<double> pv(nv, 0.0), ptv(nt * nv, 0.0), pyv(ny * nv, 0.0);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t v = 0; v < nv; ++v) {
        const double p = joint[(t * ny + y) * nv + v];
        pv[v] += p;
        ptv[t * nv + v] += p;
        pyv[y * nv + v] += p;
      }
  double nats = 0.0;
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t v = 0; v < nv; ++v) {
        const double p = joint[(t * ny + y) * nv + v];
        if (p > 0.0)
          nats += p * std::log(p * pv[v] / (ptv[t * nv + v] * pyv[y * nv + v]));
      }
  return nats / kLn2;
}

std::vector<double> strategy_output_joint(std::span<const double> p_t,
                                          const EquivalentChannel& channel) {
  std::vector<double> joint(channel.t_count * channel.n_outputs);
  for (std::size_t t = 0; t < channel.t_count; ++t) {
    const double* row = channel.row(t);
    for (std::size_t o = 0; o < channel.n_outputs; ++o)
      joint[t * channel.n_outputs + o] = p_t[t] * row[o];
  }
  return joint;
}

namespace detail {

// One alternating-maximization pass: output distribution, per-input
// divergences, multiplicative update. Parallel loops write disjoint array
// slots; every reduction runs serially over the arrays, so Serial and
// Parallel produce bit-identical iterates.

namespace {

void output_distribution(const double* kernel, const double* p,
                         std::size_t rows, std::size_t cols, double* out,
                         ExecMode exec) {
  const std::int64_t n = static_cast<std::int64_t>(cols);
  if (exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t o = 0; o < n; ++o) {
      double acc = 0.0;
      for (std::size_t t = 0; t < rows; ++t)
        acc += p[t] * kernel[t * cols + o];
      out[o] = acc;
    }
  } else {
    for (std::int64_t o = 0; o < n; ++o) {
      double acc = 0.0;
      for (std::size_t t = 0; t < rows; ++t)
        acc += p[t] * kernel[t * cols + o];
      out[o] = acc;
    }
  }
}

double divergence_row(const double* row, const double* out, std::size_t cols) {
  double d = 0.0;
  for (std::size_t o = 0; o < cols; ++o) {
    const double w = row[o];
    // The max() guards against output mass underflowing to zero beneath a
    // still-positive kernel entry; it never triggers on healthy channels.
    if (w > 0.0) d += w * std::log(w / std::max(out[o], DBL_MIN));
  }
  return d;
}

void divergence_terms(const double* kernel, const double* out,
                      std::size_t rows, std::size_t cols, double* div,
                      ExecMode exec) {
  const std::int64_t n = static_cast<std::int64_t>(rows);
  if (exec == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < n; ++t)
      div[t] = divergence_row(kernel + t * cols, out, cols);
  } else {
    for (std::int64_t t = 0; t < n; ++t)
      div[t] = divergence_row(kernel + t * cols, out, cols);
  }
}

}  // namespace

BaCore ba_core(const double* kernel, std::size_t rows, std::size_t cols,
               double tol_bits, int max_iter, ExecMode exec) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("ba_core: empty channel");
  if (tol_bits <= 0.0) throw std::invalid_argument("ba_core: tol must be > 0");

  // Drop columns carrying no mass under any input.
  std::vector<std::size_t> live;
  live.reserve(cols);
  for (std::size_t o = 0; o < cols; ++o) {
    for (std::size_t t = 0; t < rows; ++t)
      if (kernel[t * cols + o] > 0.0) {
        live.push_back(o);
        break;
      }
  }
  std::vector<double> w(rows * live.size());
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t o = 0; o < live.size(); ++o)
      w[t * live.size() + o] = kernel[t * cols + live[o]];
  const std::size_t ncols = live.size();

  BaCore res;
  res.p.assign(rows, 1.0 / static_cast<double>(rows));
  std::vector<double> log_p(rows, -std::log(static_cast<double>(rows)));
  std::vector<double> out(ncols), div(rows);

  double lower_nats = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    output_distribution(w.data(), res.p.data(), rows, ncols, out.data(), exec);
    divergence_terms(w.data(), out.data(), rows, ncols, div.data(), exec);

    lower_nats = 0.0;
    double upper_nats = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < rows; ++t) {
      lower_nats += res.p[t] * div[t];
      upper_nats = std::max(upper_nats, div[t]);
    }
    res.lower_bound_trace.push_back(lower_nats / kLn2);
    res.iterations = iter;
    res.gap_bits = (upper_nats - lower_nats) / kLn2;
    if (res.gap_bits <= tol_bits) {
      res.converged = true;
      break;
    }
    if (iter == max_iter) break;

    // p <- p * exp(div) / Z, in log domain so starving inputs never hit
    // exact zero.
    double lse_max = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < rows; ++t) {
      log_p[t] += div[t];
      lse_max = std::max(lse_max, log_p[t]);
    }
    double z = 0.0;
    for (std::size_t t = 0; t < rows; ++t) z += std::exp(log_p[t] - lse_max);
    const double lse = lse_max + std::log(z);
    for (std::size_t t = 0; t < rows; ++t) {
      log_p[t] -= lse;
      res.p[t] = std::exp(log_p[t]);
    }
  }
  res.value_bits = lower_nats / kLn2;
  return res;
}

}  // namespace detail

CapacityResult blahut_arimoto(const EquivalentChannel& channel,
                              const SolverOptions& opts) {
  for (std::size_t t = 0; t < channel.t_count; ++t) {
    double sum = 0.0;
    for (std::size_t o = 0; o < channel.n_outputs; ++o) {
      const double p = channel.row(t)[o];
      if (p < 0.0 || !std::isfinite(p))
        throw std::invalid_argument("blahut_arimoto: invalid kernel entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("blahut_arimoto: kernel row " +
                                  std::to_string(t) + " sums to " +
                                  std::to_string(sum));
  }

  const double n0 = static_cast<double>(channel.n0);
  detail::BaCore core =
      detail::ba_core(channel.kernel.data(), channel.t_count,
                      channel.n_outputs, opts.tol * n0, opts.max_iter,
                      opts.exec);

  CapacityResult result;
  result.capacity_bits_per_use = core.value_bits / n0;
  result.optimal_p_t = std::move(core.p);
  result.iterations = core.iterations;
  result.gap = core.gap_bits / n0;
  result.converged = core.converged;
  result.n0 = channel.n0;
  return result;
}

namespace {

// Self-contained I(p; W) in nats for the oracle path.
double oracle_information_nats(const std::vector<double>& p, const double* w,
                               std::size_t rows, std::size_t cols) {
  std::vector<double> out(cols, 0.0);
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t o = 0; o < cols; ++o) out[o] += p[t] * w[t * cols + o];
  double nats = 0.0;
  for (std::size_t t = 0; t < rows; ++t) {
    if (p[t] == 0.0) continue;
    for (std::size_t o = 0; o < cols; ++o) {
      const double v = w[t * cols + o];
      if (v > 0.0) nats += p[t] * v * std::log(v / out[o]);
    }
  }
  return nats;
}

// Enumerate compositions of m into k parts and evaluate the objective.
void best_grid_point(const double* w, std::size_t rows, std::size_t cols,
                     unsigned m, std::vector<double>& best_p,
                     double& best_val) {
  std::vector<unsigned> comp(rows, 0);
  comp[0] = m;
  std::vector<double> p(rows);
  while (true) {
    for (std::size_t t = 0; t < rows; ++t)
      p[t] = static_cast<double>(comp[t]) / static_cast<double>(m);
    const double val = oracle_information_nats(p, w, rows, cols);
    if (val > best_val) {
      best_val = val;
      best_p = p;
    }
    // Next composition in colex order.
    std::size_t i = 0;
    while (i + 1 < rows && comp[i] == 0) ++i;
    if (i + 1 == rows) break;
    const unsigned head = comp[i];
    comp[i] = 0;
    comp[0] = head - 1;
    ++comp[i + 1];
  }
}

std::uint64_t composition_count(unsigned m, std::size_t k) {
  // C(m + k - 1, k - 1), saturating.
  unsigned __int128 n = 1;
  for (std::size_t i = 1; i < k; ++i) {
    n = n * (m + i) / i;
    if (n > std::uint64_t{1} << 62) return std::uint64_t{1} << 62;
  }
  return static_cast<std::uint64_t>(n);
}

}  // namespace

double brute_force_capacity(const EquivalentChannel& channel,
                            double resolution) {
  if (channel.t_count > 8)
    throw std::invalid_argument(
        "brute_force_capacity: refuses channels with more than 8 strategies");
  if (resolution <= 0.0 || resolution > 1.0)
    throw std::invalid_argument("brute_force_capacity: bad resolution");

  const std::size_t rows = channel.t_count;
  const std::size_t cols = channel.n_outputs;
  const double* w = channel.kernel.data();

  unsigned m = std::max(1u, static_cast<unsigned>(std::lround(1.0 / resolution)));
  while (m > 1 && composition_count(m, rows) > 200000) m /= 2;

  std::vector<double> p;
  double best = -1.0;
  best_grid_point(w, rows, cols, m, p, best);

  // Pairwise-exchange ascent: golden-section over moving mass between two
  // coordinates. The objective is concave along every such segment, so the
  // sweep converges to the simplex optimum from any grid start.
  constexpr double golden = 0.6180339887498949;
  std::vector<double> trial(rows);
  for (int sweep = 0; sweep < 1000; ++sweep) {
    double improved = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = i + 1; j < rows; ++j) {
        const double mass = p[i] + p[j];
        if (mass <= 0.0) continue;
        trial = p;
        auto eval = [&](double theta) {
          trial[i] = theta;
          trial[j] = mass - theta;
          return oracle_information_nats(trial, w, rows, cols);
        };
        double lo = 0.0, hi = mass;
        double a = hi - golden * (hi - lo), b = lo + golden * (hi - lo);
        double fa = eval(a), fb = eval(b);
        for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
          if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + golden * (hi - lo);
            fb = eval(b);
          } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - golden * (hi - lo);
            fa = eval(a);
          }
        }
        const double theta = 0.5 * (lo + hi);
        const double val = eval(theta);
        if (val > best) {
          improved += val - best;
          best = val;
          p = trial;
        }
      }
    }
    if (improved < 1e-13) break;
  }
  return best / kLn2 / static_cast<double>(channel.n0);
}

CapacityResult capacity_bm(const BlockChannelSpec& spec,
                           const SolverOptions& opts, std::uint64_t cap) {
  require_valid(spec);
  EquivalentChannel channel = build_equivalent_channel(spec, cap, opts.exec);
  return blahut_arimoto(channel, opts);
}

}  // namespace bmcap
