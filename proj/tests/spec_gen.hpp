// Shared test fixtures: hand-built reference channels and random spec
// generators. Test-only; nothing here is used by the library.
#pragma once

#include <cstdint>
#include <vector>

#include "bmcap/capacity.hpp"
#include "bmcap/channel_model.hpp"
#include "bmcap/rng.hpp"

namespace bmcap::testgen {

// Random distribution via normalized exponentials; rounding residual goes to
// the largest entry so the sum is exactly representable as 1 within 1e-15.
inline std::vector<double> random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) {
    v = -std::log(1.0 - rng.unit());
    total += v;
  }
  double sum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] /= total;
    sum += p[i];
    if (p[i] > p[largest]) largest = i;
  }
  p[largest] += 1.0 - sum;
  return p;
}

struct Sizes {
  int x = 2, y = 2, s = 2, u = 2, v = 2, n0 = 1;
};

inline BlockChannelSpec random_spec(Rng& rng, const Sizes& sz) {
  BlockChannelSpec spec;
  spec.name = "random";
  spec.x = {"x", sz.x};
  spec.y = {"y", sz.y};
  spec.s = {"s", sz.s};
  spec.u = {"u", sz.u};
  spec.v = {"v", sz.v};
  spec.n0 = sz.n0;
  const std::size_t nx = spec.nx(), ny = spec.ny(), ns = spec.ns(),
                    nu = spec.nu(), nv = spec.nv();
  spec.channel_kernel.resize(nx * ns * ny);
  for (std::size_t row = 0; row < nx * ns; ++row) {
    std::vector<double> d = random_distribution(rng, ny);
    std::copy(d.begin(), d.end(), spec.channel_kernel.begin() + row * ny);
  }
  spec.side_info_joint = random_distribution(rng, ns * nu * nv);
  return spec;
}

// CSIT a deterministic function of the CSIR: joint over (s, v) with
// u pinned to k(v).
inline BlockChannelSpec random_deterministic_csit_spec(Rng& rng,
                                                       const Sizes& sz) {
  BlockChannelSpec spec = random_spec(rng, sz);
  spec.name = "random-det-csit";
  const std::size_t ns = spec.ns(), nu = spec.nu(), nv = spec.nv();
  std::vector<std::size_t> k(nv);
  for (auto& u : k) u = rng.below(nu);
  std::vector<double> sv = random_distribution(rng, ns * nv);
  spec.side_info_joint.assign(ns * nu * nv, 0.0);
  for (std::size_t si = 0; si < ns; ++si)
    for (std::size_t vi = 0; vi < nv; ++vi)
      spec.side_info_joint[(si * nu + k[vi]) * nv + vi] = sv[si * nv + vi];
  return spec;
}

// Two equiprobable states; state 0 is a clean bit pipe, state 1 flips the
// bit. With U = S and no CSIR the compensating strategy makes it noiseless.
inline BlockChannelSpec inverter_pair_spec(bool with_csit = true) {
  BlockChannelSpec spec;
  spec.name = with_csit ? "inverter-pair" : "inverter-pair-no-csi";
  spec.x = {"x", 2};
  spec.y = {"y", 2};
  spec.s = {"s", 2};
  spec.u = {"u", with_csit ? 2 : 1};
  spec.v = {"v", 1};
  spec.n0 = 1;
  // layout is [(x * ns + s) * ny + y]
  spec.channel_kernel = {
      1, 0,  // x=0, s=0
      0, 1,  // x=0, s=1
      0, 1,  // x=1, s=0
      1, 0,  // x=1, s=1
  };
  if (with_csit) {
    spec.side_info_joint = {0.5, 0, 0, 0.5};  // u = s, v constant
  } else {
    spec.side_info_joint = {0.5, 0.5};
  }
  return spec;
}

// U = V = S with a random state law and random per-state binary channels.
inline BlockChannelSpec random_perfect_csi_spec(Rng& rng) {
  BlockChannelSpec spec;
  spec.name = "random-perfect-csi";
  spec.x = {"x", 2};
  spec.y = {"y", 2};
  spec.s = {"s", 2};
  spec.u = {"u", 2};
  spec.v = {"v", 2};
  spec.n0 = 1;
  spec.channel_kernel.resize(8);
  for (std::size_t row = 0; row < 4; ++row) {
    std::vector<double> d = random_distribution(rng, 2);
    spec.channel_kernel[row * 2] = d[0];
    spec.channel_kernel[row * 2 + 1] = d[1];
  }
  std::vector<double> ps = random_distribution(rng, 2);
  spec.side_info_joint.assign(8, 0.0);
  for (std::size_t si = 0; si < 2; ++si)
    spec.side_info_joint[(si * 2 + si) * 2 + si] = ps[si];
  return spec;
}

// Post-process the CSIR through a random stochastic map, keeping |V|.
inline BlockChannelSpec garble_csir(const BlockChannelSpec& spec, Rng& rng) {
  BlockChannelSpec out = spec;
  out.name = spec.name + "-garbled";
  const std::size_t ns = spec.ns(), nu = spec.nu(), nv = spec.nv();
  std::vector<std::vector<double>> g(nv);
  for (auto& row : g) row = random_distribution(rng, nv);
  out.side_info_joint.assign(ns * nu * nv, 0.0);
  for (std::size_t si = 0; si < ns; ++si)
    for (std::size_t ui = 0; ui < nu; ++ui)
      for (std::size_t vi = 0; vi < nv; ++vi) {
        const double p = spec.joint(si, ui, vi);
        if (p == 0.0) continue;
        for (std::size_t wi = 0; wi < nv; ++wi)
          out.side_info_joint[(si * nu + ui) * nv + wi] += p * g[vi][wi];
      }
  return out;
}

// Per-state capacity of p(y|x,s), an independent route for the U=V=S anchor.
inline double per_state_capacity_sum(const BlockChannelSpec& spec,
                                     double tol = 1e-10) {
  const std::size_t nx = spec.nx(), ny = spec.ny(), ns = spec.ns();
  std::vector<double> ps(ns, 0.0);
  for (std::size_t si = 0; si < ns; ++si)
    for (std::size_t ui = 0; ui < spec.nu(); ++ui)
      for (std::size_t vi = 0; vi < spec.nv(); ++vi)
        ps[si] += spec.joint(si, ui, vi);
  double total = 0.0;
  std::vector<double> w(nx * ny);
  for (std::size_t si = 0; si < ns; ++si) {
    if (ps[si] == 0.0) continue;
    for (std::size_t xi = 0; xi < nx; ++xi)
      for (std::size_t yi = 0; yi < ny; ++yi)
        w[xi * ny + yi] = spec.channel(xi, si, yi);
    detail::BaCore core =
        detail::ba_core(w.data(), nx, ny, tol, 200000, ExecMode::Serial);
    total += ps[si] * core.value_bits;
  }
  return total / spec.n0;
}

}  // namespace bmcap::testgen
