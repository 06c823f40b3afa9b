#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "volent/metric_graph.hpp"
#include "volent/rational.hpp"

namespace volent {

enum class Canonicity {
  unique,             // every vertex has valency >= 3; the minimizer is unique
  chain_totals_only,  // pulled back through series reduction; only chain sums are canonical
};

/// Entropy-minimizing normalized metric on a graph and the Perron data that
/// realizes it.
struct MinimalMetricResult {
  double h_min = 0.0;
  std::vector<double> lengths;  // per unoriented edge; volume 1
  std::vector<double> perron;   // x_e per oriented edge, max entry 1
  /// z_x = exp(-h l(f)) x_f for any f leaving x, max entry 1. Empty at
  /// valency-2 vertices, where it depends on the direction.
  std::vector<std::optional<double>> z;
  Canonicity canonical = Canonicity::unique;
  std::optional<SeriesReduction> reduction;
};

/// (1/2) sum_x (k_x + 1) log k_x. Lengths of g are ignored.
/// Throws HypothesisViolation if some valency is below 3.
double minimal_entropy(const MetricGraph& g);

/// l(e) = log(k_i k_t) / sum_x (k_x + 1) log k_x together with h_min and the
/// Perron vector built from the ratio rule
///   exp(-h l(e)) x_e / exp(-h l(f)) x_f = sqrt(k_t(e) / k_i(e)),  i(f) = t(e).
MinimalMetricResult minimal_metric(const MetricGraph& g);

/// Series-reduces g, minimizes the reduction and spreads every chain's optimal
/// total evenly over its pieces.
MinimalMetricResult minimize_with_reduction(const MetricGraph& g);

struct BiregularMinimum {
  double h = 0.0;
  Rational length;  // common edge length 2 / |EX|
};

/// (|EX| / 4) log(k1 k2) for a (k1+1, k2+1)-biregular graph with |EX| oriented
/// edges. Throws std::invalid_argument unless k1, k2 >= 2 and |EX| is positive
/// and even.
BiregularMinimum biregular_minimum(std::uint64_t k1, std::uint64_t k2, std::uint64_t edge_count);

/// Outgoing edges at the split vertex: `stay` remain at x, `move` go to the new
/// vertex y. x and y are joined by a new edge of length new_length.
struct VertexPartition {
  std::vector<EdgeIndex> stay;
  std::vector<EdgeIndex> move;
};

/// Replaces x by x and y joined by a new edge; preserves the rank of the
/// fundamental group. Requires valency(x) >= 4 and both classes of size >= 2
/// covering the outgoing edges at x exactly (HypothesisViolation otherwise).
MetricGraph split_vertex(const MetricGraph& g, VertexIndex x, const VertexPartition& partition,
                         std::optional<Rational> new_length = std::nullopt);

/// Splits vertices of valency >= 4 by peeling their first two outgoing edges
/// until the graph is trivalent. Element 0 is g itself.
std::vector<MetricGraph> trivalent_resolution(const MetricGraph& g);

/// Rank of the fundamental group, |E| - |V| + 1 over unoriented edges.
std::int64_t free_rank(const MetricGraph& g);

/// 3 (r - 1) log 2. Throws std::invalid_argument for r < 2.
double min_entropy_free_rank(std::int64_t r);

}  // namespace volent
