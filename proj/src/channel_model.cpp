#include "bmcap/channel_model.hpp"

#include <cmath>
#include <sstream>

namespace bmcap {

namespace {

constexpr double kIngestTol = 1e-12;

std::string tuple_str(std::size_t index, std::size_t radix, int len) {
  std::vector<int> t = index_to_tuple(index, radix, len);
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < len; ++i) os << (i ? "," : "") << t[i];
  os << ")";
  return os.str();
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  " << v.where << ": " << v.what;
  return os.str();
}

ValidationReport validate_spec(const BlockChannelSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string where, std::string what) {
    report.violations.push_back({std::move(where), std::move(what)});
  };

  for (const Alphabet* a : {&spec.x, &spec.y, &spec.s, &spec.u, &spec.v}) {
    if (a->size < 1)
      add("alphabet " + a->name, "size must be >= 1, got " +
                                     std::to_string(a->size));
  }
  if (spec.n0 < 1)
    add("n0", "block length must be >= 1, got " + std::to_string(spec.n0));
  if (!report.ok()) return report;  // dimensions below would be meaningless

  const std::size_t nx = spec.nx(), ny = spec.ny(), ns = spec.ns(),
                    nu = spec.nu(), nv = spec.nv();

  if (spec.channel_kernel.size() != nx * ns * ny) {
    add("channel_kernel",
        "expected " + std::to_string(nx * ns * ny) + " entries, got " +
            std::to_string(spec.channel_kernel.size()));
    return report;
  }
  if (spec.side_info_joint.size() != ns * nu * nv) {
    add("side_info_joint",
        "expected " + std::to_string(ns * nu * nv) + " entries, got " +
            std::to_string(spec.side_info_joint.size()));
    return report;
  }

  for (std::size_t xi = 0; xi < nx; ++xi) {
    for (std::size_t si = 0; si < ns; ++si) {
      double sum = 0.0;
      for (std::size_t yi = 0; yi < ny; ++yi) {
        double p = spec.channel(xi, si, yi);
        if (p < 0.0 || !std::isfinite(p))
          add("channel_kernel x=" + tuple_str(xi, spec.x.size, spec.n0) +
                  " s=" + tuple_str(si, spec.s.size, spec.n0) +
                  " y=" + tuple_str(yi, spec.y.size, spec.n0),
              "negative or non-finite entry " + std::to_string(p));
        sum += p;
      }
      if (std::abs(sum - 1.0) > kIngestTol)
        add("channel_kernel x=" + tuple_str(xi, spec.x.size, spec.n0) +
                " s=" + tuple_str(si, spec.s.size, spec.n0),
            "row sums to " + std::to_string(sum));
    }
  }

  double total = 0.0;
  for (std::size_t si = 0; si < ns; ++si)
    for (std::size_t ui = 0; ui < nu; ++ui)
      for (std::size_t vi = 0; vi < nv; ++vi) {
        double p = spec.joint(si, ui, vi);
        if (p < 0.0 || !std::isfinite(p))
          add("side_info_joint s=" + tuple_str(si, spec.s.size, spec.n0) +
                  " u=" + tuple_str(ui, spec.u.size, spec.n0) +
                  " v=" + tuple_str(vi, spec.v.size, spec.n0),
              "negative or non-finite entry " + std::to_string(p));
        total += p;
      }
  if (std::abs(total - 1.0) > kIngestTol)
    add("side_info_joint", "total mass is " + std::to_string(total));

  return report;
}

void require_valid(const BlockChannelSpec& spec) {
  ValidationReport report = validate_spec(spec);
  if (!report.ok())
    throw ValidationError("spec '" + spec.name + "' is invalid: " +
                          report.summary());
}

std::vector<double> csit_marginal(const BlockChannelSpec& spec) {
  const std::size_t ns = spec.ns(), nu = spec.nu(), nv = spec.nv();
  std::vector<double> marginal(nu, 0.0);
  for (std::size_t si = 0; si < ns; ++si)
    for (std::size_t ui = 0; ui < nu; ++ui)
      for (std::size_t vi = 0; vi < nv; ++vi)
        marginal[ui] += spec.joint(si, ui, vi);
  return marginal;
}

ObservationKernel compose_observation_kernel(const BlockChannelSpec& spec) {
  ObservationKernel k;
  k.n0 = spec.n0;
  k.x_size = spec.x.size;
  k.u_size = spec.u.size;
  k.y_size = spec.y.size;
  k.v_size = spec.v.size;
  k.nx = spec.nx();
  k.nu = spec.nu();
  k.ny = spec.ny();
  k.nv = spec.nv();
  k.csit_marginal = csit_marginal(spec);

  const std::size_t ns = spec.ns();
  const std::size_t nyv = k.nyv();
  k.table.assign(k.nx * k.nu * nyv, 0.0);

  for (std::size_t ui = 0; ui < k.nu; ++ui) {
    if (k.csit_marginal[ui] > 0.0) continue;
    k.zero_mass_u.push_back(ui);
  }

  for (std::size_t xi = 0; xi < k.nx; ++xi) {
    for (std::size_t ui = 0; ui < k.nu; ++ui) {
      double* row = k.table.data() + (xi * k.nu + ui) * nyv;
      const double pu = k.csit_marginal[ui];
      if (pu <= 0.0) {
        // Unreachable CSIT value; keep the kernel total with a uniform row.
        const double unif = 1.0 / static_cast<double>(nyv);
        for (std::size_t o = 0; o < nyv; ++o) row[o] = unif;
        continue;
      }
      for (std::size_t si = 0; si < ns; ++si) {
        for (std::size_t vi = 0; vi < k.nv; ++vi) {
          const double w = spec.joint(si, ui, vi) / pu;
          if (w == 0.0) continue;
          for (std::size_t yi = 0; yi < k.ny; ++yi)
            row[yi * k.nv + vi] += spec.channel(xi, si, yi) * w;
        }
      }
    }
  }
  return k;
}

BlockEvaluator::BlockEvaluator(const ObservationKernel& kernel, int blocks)
    : kernel_(&kernel), blocks_(blocks) {
  if (blocks < 1) throw std::invalid_argument("extend_blocks: J must be >= 1");
}

double BlockEvaluator::log_prob(std::span<const int> xs,
                                std::span<const int> us,
                                std::span<const int> ys,
                                std::span<const int> vs) const {
  const std::size_t n =
      static_cast<std::size_t>(blocks_) * static_cast<std::size_t>(kernel_->n0);
  if (xs.size() != n || us.size() != n || ys.size() != n || vs.size() != n)
    throw std::invalid_argument(
        "extend_blocks evaluator: sequence length must be J*n0 = " +
        std::to_string(n));

  const int n0 = kernel_->n0;
  double logp = 0.0;
  for (int j = 0; j < blocks_; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * n0;
    const std::size_t xi =
        tuple_to_index(xs.subspan(off, n0), kernel_->x_size);
    const std::size_t ui =
        tuple_to_index(us.subspan(off, n0), kernel_->u_size);
    const std::size_t yi =
        tuple_to_index(ys.subspan(off, n0), kernel_->y_size);
    const std::size_t vi =
        tuple_to_index(vs.subspan(off, n0), kernel_->v_size);
    logp += std::log(kernel_->at(xi, ui, yi, vi));
  }
  return logp;
}

}  // namespace bmcap
