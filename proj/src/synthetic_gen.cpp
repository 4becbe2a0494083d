#include "shift/synthetic_gen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "shift/random.hpp"

namespace shift {

namespace {

constexpr int kMaxDegenerateRedraws = 32;

}  // namespace

Distribution uniform_central(std::size_t dim) {
  if (dim < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "uniform center needs d >= 2",
                static_cast<double>(dim));
  }
  return validate_distribution(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

Distribution truncated_geometric_central(std::size_t dim, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kBetaOutOfRange, "beta must lie in (0, 1)", beta);
  }
  if (dim < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "geometric center needs d >= 2",
                static_cast<double>(dim));
  }
  const double scale =
      (1.0 - beta) / -std::expm1(static_cast<double>(dim) * std::log(beta));
  std::vector<double> probs(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    probs[k] = scale * std::pow(beta, static_cast<double>(k));
  }
  return validate_distribution(std::move(probs));
}

PerturbedCluster perturb_sparse(const Distribution& center, std::size_t s,
                                std::uint64_t rng_seed,
                                std::uint32_t cluster_id) {
  const std::size_t dim = center.dim();
  if (s > dim) {
    throw Error(ErrorCode::kSBudgetExceedsDim,
                "s = " + std::to_string(s) + " exceeds d = " + std::to_string(dim),
                static_cast<double>(s));
  }
  Rng rng(rng_seed);

  // Partial Fisher-Yates: the first s slots become a uniform s-subset.
  std::vector<std::uint32_t> order(dim);
  std::iota(order.begin(), order.end(), 0u);
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t j = i + uniform_index(rng, dim - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint32_t> chosen(order.begin(), order.begin() + s);
  std::sort(chosen.begin(), chosen.end());

  double mass = 0.0;
  for (auto k : chosen) mass += center[k];

  std::vector<double> draws(s);
  double draw_sum = 0.0;
  for (int attempt = 0; s > 0; ++attempt) {
    if (attempt == kMaxDegenerateRedraws) {
      throw Error(ErrorCode::kDegenerateDraw,
                  "uniform redraws kept summing to ~0", draw_sum);
    }
    draw_sum = 0.0;
    for (auto& u : draws) {
      u = uniform01(rng);
      draw_sum += u;
    }
    if (draw_sum >= 1e-300) break;
  }

  std::vector<double> probs(center.probs().begin(), center.probs().end());
  for (std::size_t i = 0; i < s; ++i) {
    probs[chosen[i]] = (draws[i] / draw_sum) * mass;
  }
  return {validate_distribution(std::move(probs)),
          PerturbationRecord{cluster_id, std::move(chosen), mass}};
}

CategoricalSampler::CategoricalSampler(const Distribution& p)
    : accept_(p.dim(), 1.0), alias_(p.dim()) {
  const std::size_t dim = p.dim();
  std::iota(alias_.begin(), alias_.end(), 0u);
  std::vector<double> scaled(dim);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t k = 0; k < dim; ++k) {
    scaled[k] = p[k] * static_cast<double>(dim);
    (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t lo = small.back();
    small.pop_back();
    const std::uint32_t hi = large.back();
    accept_[lo] = scaled[lo];
    alias_[lo] = hi;
    scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0;
    if (scaled[hi] < 1.0) {
      large.pop_back();
      small.push_back(hi);
    }
  }
  // Leftovers differ from 1 only by rounding.
  for (auto k : small) accept_[k] = 1.0;
  for (auto k : large) accept_[k] = 1.0;
}

std::vector<std::uint32_t> sample_cluster(const Distribution& p, std::size_t n,
                                          std::uint64_t rng_seed) {
  if (n == 0) {
    throw Error(ErrorCode::kEmptyCluster, "sample size must be >= 1");
  }
  const CategoricalSampler sampler(p);
  Rng rng(rng_seed);
  std::vector<std::uint32_t> out(n);
  for (auto& x : out) x = sampler(rng);
  return out;
}

void write_truth_csv(std::ostream& out, std::span<const Distribution> truths) {
  char buffer[32];
  for (const auto& dist : truths) {
    for (std::size_t k = 0; k < dist.dim(); ++k) {
      if (k > 0) out.put(',');
      const auto res = std::to_chars(buffer, buffer + sizeof(buffer), dist[k],
                                     std::chars_format::general, 17);
      out.write(buffer, res.ptr - buffer);
    }
    out.put('\n');
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write truth CSV");
}

std::vector<Distribution> read_truth_csv(std::istream& in) {
  std::vector<Distribution> truths;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* cursor = line.data();
    const char* end = line.data() + line.size();
    while (cursor < end) {
      double value = 0.0;
      const auto res = std::from_chars(cursor, end, value);
      if (res.ec != std::errc()) {
        throw Error(ErrorCode::kIo, "bad number in truth CSV row " +
                                        std::to_string(truths.size()));
      }
      row.push_back(value);
      cursor = res.ptr;
      if (cursor < end && *cursor == ',') ++cursor;
    }
    truths.push_back(validate_distribution(std::move(row)));
  }
  return truths;
}

}  // namespace shift
