#pragma once

#include <optional>
#include <span>
#include <vector>

#include "volent/config.hpp"
#include "volent/metric_graph.hpp"
#include "volent/rational.hpp"

// Exact non-backtracking path counting. Deliberately depends on nothing but
// the graph model: it is the independent check on the spectral solver.

namespace volent {

/// Paths e_1 ... e_n without backtracking whose length sum crosses r at the
/// last edge: sum_{j<n} l(e_j) < r <= sum_{j<=n} l(e_j).
struct PathCount {
  Rational r;
  BigInt count;
  /// Count per terminal oriented edge; sums to `count`.
  std::vector<BigInt> by_terminal_edge;
};

/// N_r(x0): paths starting at vertex x0. Throws HypothesisViolation when the
/// graph fails the entropy hypotheses, std::invalid_argument for r <= 0, and
/// NumericalFailure when the integer grid exceeds options.max_cells.
PathCount count_paths(const MetricGraph& g, VertexIndex x0, const Rational& r,
                      const OracleOptions& options = {});

/// N_r(e, f): paths starting with e and ending with f.
BigInt count_paths_between(const MetricGraph& g, EdgeIndex first, EdgeIndex last,
                           const Rational& r, const OracleOptions& options = {});

/// Counts for several radii from one sweep; radii need not be sorted.
std::vector<BigInt> count_paths_at(const MetricGraph& g, VertexIndex x0,
                                   std::span<const Rational> radii,
                                   const OracleOptions& options = {});

struct GrowthEstimate {
  double h_est = 0.0;
  /// Half-width of the plausible interval around h_est: slope standard error
  /// plus the a-priori width log(N_r / N_{r - l_max}) / r at r_max.
  double error_band = 0.0;
  double slope_stderr = 0.0;
  double apriori_width = 0.0;
  std::vector<Rational> radii;
  std::vector<BigInt> counts;
};

/// Least-squares slope of log N_r against r on `grid_points` evenly spaced
/// radii in [r_max / 2, r_max]. An estimate, never exact.
GrowthEstimate estimate_entropy(const MetricGraph& g, VertexIndex x0, const Rational& r_max,
                                const OracleOptions& options = {});

}  // namespace volent
