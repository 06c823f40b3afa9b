#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volent/rational.hpp"

namespace volent {

using VertexIndex = std::size_t;
/// Index of an oriented edge. Unoriented edge j owns oriented edges 2j (u to v)
/// and 2j+1 (v to u), so the reversal of e is e ^ 1.
using EdgeIndex = std::size_t;

struct EdgeSpec {
  std::string u;
  std::string v;
  Rational length;
  std::string id;  // empty: assigned "e<position>"
};

/// Plain description of a graph as read from a document.
struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
};

struct OrientedEdge {
  EdgeIndex id;
  EdgeIndex reversal;
  VertexIndex origin;
  VertexIndex terminus;
};

/// Finite connected multigraph with oriented edges and exact positive lengths
/// on unoriented edges. Loops and parallel edges are allowed. Immutable once
/// built; obtain instances through build_graph.
class MetricGraph {
 public:
  std::size_t vertex_count() const { return vertex_names_.size(); }
  /// Number of oriented edges |EX|.
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t unoriented_count() const { return lengths_.size(); }

  const std::string& vertex_name(VertexIndex v) const { return vertex_names_[v]; }
  /// Identifier of the unoriented edge j.
  const std::string& unoriented_name(std::size_t j) const { return edge_names_[j]; }
  /// "id" for the stored orientation, "~id" for its reversal.
  std::string edge_name(EdgeIndex e) const;
  std::optional<VertexIndex> find_vertex(const std::string& name) const;
  std::optional<std::size_t> find_unoriented(const std::string& id) const;
  /// Accepts both "id" and "~id".
  std::optional<EdgeIndex> find_edge(const std::string& name) const;

  const OrientedEdge& edge(EdgeIndex e) const { return edges_[e]; }
  static EdgeIndex reversal(EdgeIndex e) { return e ^ 1U; }
  static std::size_t unoriented(EdgeIndex e) { return e / 2; }
  VertexIndex origin(EdgeIndex e) const { return edges_[e].origin; }
  VertexIndex terminus(EdgeIndex e) const { return edges_[e].terminus; }

  const Rational& length(EdgeIndex e) const { return lengths_[e / 2]; }
  double length_value(EdgeIndex e) const { return length_values_[e / 2]; }
  /// Lengths indexed by oriented edge, as doubles.
  std::vector<double> oriented_lengths() const;
  std::span<const Rational> unoriented_lengths() const { return lengths_; }

  /// Oriented edges e with origin(e) == v, in increasing index order.
  std::span<const EdgeIndex> outgoing(VertexIndex v) const { return outgoing_[v]; }
  std::size_t valency(VertexIndex v) const { return outgoing_[v].size(); }
  /// k_x = valency - 1.
  std::size_t k(VertexIndex v) const { return valency(v) - 1; }

  const Rational& l_max() const { return l_max_; }
  const Rational& l_min() const { return l_min_; }

  /// Description that rebuilds this exact graph.
  GraphSpec to_spec() const;

 private:
  friend MetricGraph build_graph(const GraphSpec& spec);

  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<OrientedEdge> edges_;
  std::vector<Rational> lengths_;
  std::vector<double> length_values_;
  std::vector<std::vector<EdgeIndex>> outgoing_;
  Rational l_max_;
  Rational l_min_;
};

/// Materializes both orientations of every unoriented edge. Throws InvalidGraph
/// for non-positive lengths, unknown endpoints, duplicate names, isolated
/// vertices or a disconnected graph (the message lists the components).
MetricGraph build_graph(const GraphSpec& spec);

/// Same topology and names, new unoriented lengths (indexed like the graph).
MetricGraph with_lengths(const MetricGraph& g, std::span<const Rational> lengths);
MetricGraph with_lengths(const MetricGraph& g, std::span<const double> lengths);

struct HypothesisReport {
  bool no_terminal_vertex = true;
  std::vector<VertexIndex> terminal_vertices;
  bool not_a_cycle = true;
  std::string cycle_witness;  // empty when not_a_cycle
  bool connected = true;
  std::vector<std::vector<VertexIndex>> components;

  bool ok() const { return no_terminal_vertex && not_a_cycle && connected; }
  std::string describe(const MetricGraph& g) const;
};

/// Checks: no valency-1 vertex, some vertex of valency at least three, connected.
HypothesisReport validate_entropy_hypotheses(const MetricGraph& g);

/// Throws HypothesisViolation carrying the report text unless every check passes.
void require_entropy_hypotheses(const MetricGraph& g);

/// Sum of unoriented edge lengths.
Rational volume(const MetricGraph& g);

MetricGraph normalize(const MetricGraph& g);

/// Multiplies every length by alpha. Throws std::invalid_argument if alpha <= 0.
MetricGraph scale_metric(const MetricGraph& g, const Rational& alpha);

/// Result of eliminating valency-2 vertices.
struct SeriesReduction {
  MetricGraph graph;
  /// chains[j] lists the original oriented edges, in travel order, that the
  /// reduced oriented edge 2j replaces.
  std::vector<std::vector<EdgeIndex>> chains;
  /// vertex_origin[v] is the original index of reduced vertex v.
  std::vector<VertexIndex> vertex_origin;
};

/// Replaces each maximal chain through valency-2 vertices by one edge whose
/// length is the chain total. A chain returning to its start vertex becomes a
/// loop. Throws HypothesisViolation on terminal vertices or a cycle.
SeriesReduction series_reduce(const MetricGraph& g);

}  // namespace volent
