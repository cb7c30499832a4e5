#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bmcap/common.hpp"
#include "bmcap/tuple_index.hpp"

namespace bmcap {

struct Alphabet {
  std::string name;
  int size = 1;
};

// A finite state-dependent block-memoryless channel: block length n0, a
// kernel p(y-tuple | x-tuple, s-tuple) and a joint side-information law
// p(s-tuple, u-tuple, v-tuple). U is the transmitter-side observation, V the
// receiver-side one. All tuple axes are flattened mixed-radix, position 1
// most significant.
struct BlockChannelSpec {
  Alphabet x, y, s, u, v;
  int n0 = 1;
  std::string name;

  // channel_kernel[(xi * ns() + si) * ny() + yi] = p(y | x, s)
  std::vector<double> channel_kernel;
  // side_info_joint[(si * nu() + ui) * nv() + vi] = p(s, u, v)
  std::vector<double> side_info_joint;

  std::size_t nx() const { return tuple_count(x.size, n0); }
  std::size_t ny() const { return tuple_count(y.size, n0); }
  std::size_t ns() const { return tuple_count(s.size, n0); }
  std::size_t nu() const { return tuple_count(u.size, n0); }
  std::size_t nv() const { return tuple_count(v.size, n0); }

  double channel(std::size_t xi, std::size_t si, std::size_t yi) const {
    return channel_kernel[(xi * ns() + si) * ny() + yi];
  }
  double joint(std::size_t si, std::size_t ui, std::size_t vi) const {
    return side_info_joint[(si * nu() + ui) * nv() + vi];
  }
};

struct Violation {
  std::string where;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks dimensions, nonnegativity and row sums (tolerance 1e-12 on ingest).
// Reports every violation; never throws.
ValidationReport validate_spec(const BlockChannelSpec& spec);

// Throws ValidationError with the full report text if the spec is invalid.
void require_valid(const BlockChannelSpec& spec);

// p(u-tuple) = sum over (s, v) of the joint.
std::vector<double> csit_marginal(const BlockChannelSpec& spec);

// The state-averaged observation law p(y, v | x, u) together with p(u).
// Rows for u-tuples with p(u) = 0 are filled uniform and listed in
// zero_mass_u; they carry no weight downstream.
struct ObservationKernel {
  int n0 = 1;
  int x_size = 1, u_size = 1, y_size = 1, v_size = 1;
  std::size_t nx = 1, nu = 1, ny = 1, nv = 1;

  // table[(xi * nu + ui) * (ny * nv) + yi * nv + vi]
  std::vector<double> table;
  std::vector<double> csit_marginal;
  std::vector<std::size_t> zero_mass_u;

  std::size_t nyv() const { return ny * nv; }
  const double* row(std::size_t xi, std::size_t ui) const {
    return table.data() + (xi * nu + ui) * nyv();
  }
  double at(std::size_t xi, std::size_t ui, std::size_t yi,
            std::size_t vi) const {
    return row(xi, ui)[yi * nv + vi];
  }
};

ObservationKernel compose_observation_kernel(const BlockChannelSpec& spec);

// Product evaluator over J independent blocks, log domain.
class BlockEvaluator {
 public:
  BlockEvaluator(const ObservationKernel& kernel, int blocks);

  // Sequences are per-symbol, length J * n0 each; throws on length mismatch.
  double log_prob(std::span<const int> xs, std::span<const int> us,
                  std::span<const int> ys, std::span<const int> vs) const;

  int blocks() const { return blocks_; }

 private:
  const ObservationKernel* kernel_;
  int blocks_;
};

inline BlockEvaluator extend_blocks(const ObservationKernel& kernel,
                                    int blocks) {
  return BlockEvaluator(kernel, blocks);
}

}  // namespace bmcap
