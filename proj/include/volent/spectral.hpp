#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "volent/config.hpp"
#include "volent/metric_graph.hpp"

namespace volent {

/// Sparse nonnegative integer matrix over oriented edges (CSR by row).
///
/// For a plain graph every stored entry is 1 and marks a non-backtracking
/// continuation: entry (e, f) exists iff t(e) = i(f) and f != reversal(e).
/// Graphs of groups reuse the structure with larger multiplicities.
class EdgeAdjacency {
 public:
  EdgeAdjacency() = default;
  EdgeAdjacency(std::size_t order, std::vector<std::size_t> row_start,
                std::vector<EdgeIndex> columns, std::vector<std::uint64_t> multiplicity);

  std::size_t order() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t nonzeros() const { return columns_.size(); }

  std::span<const EdgeIndex> row(EdgeIndex e) const {
    return {columns_.data() + row_start_[e], row_start_[e + 1] - row_start_[e]};
  }
  std::span<const std::uint64_t> row_multiplicity(EdgeIndex e) const {
    return {multiplicity_.data() + row_start_[e], row_start_[e + 1] - row_start_[e]};
  }
  /// Multiplicity of (e, f); zero when absent.
  std::uint64_t at(EdgeIndex e, EdgeIndex f) const;
  std::uint64_t row_sum(EdgeIndex e) const;

  std::span<const std::size_t> row_start() const { return row_start_; }
  std::span<const EdgeIndex> columns() const { return columns_; }
  std::span<const std::uint64_t> multiplicities() const { return multiplicity_; }

 private:
  std::vector<std::size_t> row_start_;
  std::vector<EdgeIndex> columns_;
  std::vector<std::uint64_t> multiplicity_;
};

/// Non-backtracking edge adjacency matrix, rows and columns in edge-index order.
EdgeAdjacency edge_adjacency(const MetricGraph& g);

/// Strongly connected components of the digraph e -> f over stored entries,
/// each sorted, listed by smallest member.
std::vector<std::vector<EdgeIndex>> strongly_connected_components(const EdgeAdjacency& a);

struct IrreducibilityReport {
  bool irreducible = false;
  /// Filled only when the matrix is reducible.
  std::vector<std::vector<EdgeIndex>> components;
};

/// Strong connectivity of the non-backtracking digraph, cross-checked against
/// the valency criterion (irreducible iff some vertex has valency >= 3).
/// Requires a graph without terminal vertices (HypothesisViolation otherwise);
/// throws InternalConsistencyError if the two routes disagree.
IrreducibilityReport is_irreducible(const MetricGraph& g);

/// Entries m_ef * exp(-h * length(f)) over the pattern of an EdgeAdjacency.
struct WeightedEdgeMatrix {
  EdgeAdjacency base;
  double h = 0.0;
  std::vector<double> values;  // aligned with base.columns()

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
};

/// Throws std::invalid_argument if h < 0. lengths are per oriented edge.
WeightedEdgeMatrix weighted_matrix(const EdgeAdjacency& a, std::span<const double> lengths,
                                   double h);
WeightedEdgeMatrix weighted_matrix(const MetricGraph& g, double h);

struct PerronResult {
  double radius = 0.0;
  std::vector<double> vector;  // max entry 1
  std::size_t iterations = 0;
  double residual = 0.0;       // ||M v - radius v||_inf
  bool shifted = false;        // converged on M + I after detecting oscillation
};

/// Perron root and vector by power iteration from the all-ones vector.
/// Falls back to iterating M + I when the plain sequence oscillates. Throws
/// NumericalFailure if the iteration cap is hit or the vector loses
/// positivity, and HypothesisViolation for a reducible matrix.
PerronResult spectral_radius(const WeightedEdgeMatrix& m,
                             const PowerIterationOptions& options = {});

}  // namespace volent
