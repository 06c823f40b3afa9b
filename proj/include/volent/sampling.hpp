#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "volent/metric_graph.hpp"

namespace volent {

using Rng = std::mt19937_64;

/// Symmetric Dirichlet(1) draw over unoriented-edge lengths, rescaled so the
/// volume is exactly 1.
MetricGraph random_normalized_metric(const MetricGraph& g, Rng& rng);

/// (1 - t) * current + t * target per unoriented edge, renormalized to volume 1.
MetricGraph interpolate_lengths(const MetricGraph& g, std::span<const double> target, double t);

struct MinimalitySample {
  std::size_t samples = 0;
  double h_min = 0.0;
  double lowest = 0.0;        // smallest sampled entropy
  std::size_t violations = 0; // samples below h_min - tolerance
};

/// Solves the entropy of `samples` random normalized metrics and compares each
/// against the closed-form minimum. Sample i uses seed (seed, i).
MinimalitySample sample_minimality(const MetricGraph& g, std::size_t samples, std::uint64_t seed,
                                   double tolerance = 1e-9);

}  // namespace volent
