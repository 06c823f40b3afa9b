#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volent/config.hpp"
#include "volent/metric_graph.hpp"
#include "volent/rational.hpp"
#include "volent/spectral.hpp"

namespace volent {

struct Bracket {
  double lo = 0.0;  // Perron root of A'(lo) exceeds 1
  double hi = 0.0;  // Perron root of A'(hi) is below 1
};

/// Volume entropy and the positive fixed-point vector of
/// x_e = sum_f m_ef exp(-h l(f)) x_f.
struct EntropySolution {
  double h = 0.0;
  std::vector<double> vector;  // per oriented edge, max entry 1
  Bracket bracket;
  double residual = 0.0;
  double lambda = 0.0;         // Perron root at h
  std::size_t iterations = 0;  // power iterations over the whole solve
  std::size_t evaluations = 0; // Perron root evaluations
};

/// Unique h > 0 with Perron root 1 for a general multiplicity pattern.
/// The pattern must be irreducible with Perron root above 1 at h = 0.
EntropySolution solve_entropy(const EdgeAdjacency& pattern, std::span<const double> lengths,
                              const EntropyOptions& options = {});

/// Throws HypothesisViolation when the graph has terminal vertices or is a
/// cycle, NumericalFailure when the solve misses its tolerances.
EntropySolution volume_entropy(const MetricGraph& g, const EntropyOptions& options = {});

struct ResidualReport {
  double max = 0.0;
  double mean = 0.0;
  EdgeIndex worst_edge = 0;
};

/// Residuals of x_e - sum_f m_ef exp(-h l(f)) x_f over every edge.
ResidualReport verify_fixed_point(const EdgeAdjacency& pattern, std::span<const double> lengths,
                                  double h, std::span<const double> x);
ResidualReport verify_fixed_point(const MetricGraph& g, double h, std::span<const double> x);

/// h_vol(g) * vol(g); invariant under scaling.
double entropy_volume_product(const MetricGraph& g, const EntropyOptions& options = {});

}  // namespace volent
