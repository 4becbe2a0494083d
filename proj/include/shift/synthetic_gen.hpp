#pragma once

// Ground truth for the synthetic experiments: a central distribution, sparse
// per-cluster perturbations of it, and categorical sampling.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "shift/core_model.hpp"
#include "shift/random.hpp"

namespace shift {

Distribution uniform_central(std::size_t dim);

// p_k proportional to beta^k, k = 0..d-1.
Distribution truncated_geometric_central(std::size_t dim, double beta);

struct PerturbationRecord {
  std::uint32_t cluster_id = 0;
  std::vector<std::uint32_t> changed_indices;  // ascending, s distinct entries
  double original_mass = 0.0;
};

struct PerturbedCluster {
  Distribution dist;
  PerturbationRecord record;
};

// Picks s distinct entries uniformly, redraws them i.i.d. Uniform[0, 1] and
// rescales the draws to the mass those entries had before. Other entries are
// copied bit-for-bit. s = 0 returns the center unchanged.
PerturbedCluster perturb_sparse(const Distribution& center, std::size_t s,
                                std::uint64_t rng_seed,
                                std::uint32_t cluster_id = 0);

// Walker/Vose alias table for O(1) categorical draws.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Distribution& p);

  template <class Generator>
  std::uint32_t operator()(Generator& rng) const {
    const auto slot = static_cast<std::uint32_t>(
        (static_cast<Uint128>(rng()) * accept_.size()) >> 64);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < accept_[slot] ? slot : alias_[slot];
  }

  std::size_t dim() const noexcept { return accept_.size(); }

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

// n i.i.d. draws from Cat(p); identical for identical seeds.
std::vector<std::uint32_t> sample_cluster(const Distribution& p, std::size_t n,
                                          std::uint64_t rng_seed);

// One row per distribution, d comma-separated columns, 17 significant digits.
void write_truth_csv(std::ostream& out, std::span<const Distribution> truths);
std::vector<Distribution> read_truth_csv(std::istream& in);

}  // namespace shift
