#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volent/config.hpp"
#include "volent/entropy.hpp"
#include "volent/metric_graph.hpp"
#include "volent/rational.hpp"
#include "volent/spectral.hpp"

namespace volent {

/// Finite graph of finite groups, described by group orders only.
struct GraphOfGroups {
  MetricGraph graph;
  std::vector<std::uint64_t> vertex_order;  // |G_x| per vertex
  std::vector<std::uint64_t> edge_order;    // |G_e| per unoriented edge
  bool has_lengths = true;                  // false: graph carries placeholder unit lengths

  std::uint64_t order_of_edge(EdgeIndex e) const { return edge_order[e / 2]; }
};

/// Validates that orders are positive and |G_e| divides both endpoint orders.
/// Throws InvalidGraph otherwise.
GraphOfGroups make_graph_of_groups(MetricGraph graph, std::vector<std::uint64_t> vertex_order,
                                   std::vector<std::uint64_t> edge_order,
                                   bool has_lengths = true);

/// All groups trivial.
GraphOfGroups trivial_groups(const MetricGraph& g);

/// sum_{i(e) = x} |G_x| / |G_e|: the valency of any lift of x in the Bass-Serre tree.
std::uint64_t degree(const GraphOfGroups& gog, VertexIndex x);

/// (1/2) sum_e l(e) / |G_e|. Throws InvalidGraph if lengths are missing.
Rational gog_volume(const GraphOfGroups& gog);

/// Number of non-backtracking continuations in the Bass-Serre tree:
///   m_ef = |G_t(e)| / |G_f|       for i(f) = t(e), f != reversal(e)
///   m_e,reversal(e) = |G_t(e)| / |G_e| - 1
/// Reduces to the plain edge adjacency matrix for trivial groups.
EdgeAdjacency multiplicity_adjacency(const GraphOfGroups& gog);

/// Entropy of the tree metric: Perron root 1 of m_ef exp(-h l(f)).
/// Requires degree >= 3 everywhere and lengths.
EntropySolution gog_entropy(const GraphOfGroups& gog, const EntropyOptions& options = {});

/// (1/2) sum_x (k_x + 1) log k_x / |G_x| with k_x + 1 the degree.
double gog_minimal_entropy(const GraphOfGroups& gog);

struct GogMinimalMetric {
  double h_min = 0.0;
  std::vector<double> lengths;  // per unoriented edge, gog volume 1
};

/// l(e) proportional to log(k_i(e) k_t(e)), scaled to gog volume 1.
GogMinimalMetric gog_minimal_metric(const GraphOfGroups& gog);

/// Order-level data of a covering (Y, H) -> (X, G).
struct CoveringMap {
  GraphOfGroups source;
  GraphOfGroups target;
  std::vector<VertexIndex> vertex_map;  // per source vertex
  std::vector<EdgeIndex> edge_map;      // per source oriented edge
};

struct CoveringReport {
  bool valid = false;
  std::optional<std::uint64_t> sheets;
  std::string violation;  // first failed condition with its witness
};

/// Checks that edge_map commutes with reversal and endpoints, the local fiber
/// condition at every source vertex, and that the sheet count is one integer
/// over every target vertex and edge.
CoveringReport check_covering(const CoveringMap& cover);

struct CoveringInequalityReport {
  std::uint64_t sheets = 0;
  double lhs = 0.0;  // h_vol(Y, H, d) vol(Y, H, d)
  double rhs = 0.0;  // n h_min(X, G)
  double gap = 0.0;
  bool equality = false;
  bool proportional = false;
  /// l_Y(f) / l_0(phi(f)) when all ratios agree; the minimizer l_0 has volume 1.
  std::optional<double> lambda;
  double lambda_spread = 0.0;  // (max - min) / mean of those ratios
};

/// Compares both sides of the covering inequality for the metric on the
/// source. Equality is declared when the gap is below 1e-6 and the source
/// lengths are proportional to the lifted minimizer.
CoveringInequalityReport covering_inequality(const CoveringMap& cover,
                                             const EntropyOptions& options = {});
CoveringInequalityReport covering_inequality(const CoveringMap& cover,
                                             std::span<const Rational> source_lengths,
                                             const EntropyOptions& options = {});

}  // namespace volent
