#include "volent/gog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "volent/errors.hpp"

namespace volent {

namespace {

void require_degree_three(const GraphOfGroups& gog, const char* what) {
  for (VertexIndex x = 0; x < gog.graph.vertex_count(); ++x) {
    const std::uint64_t d = degree(gog, x);
    if (d < 3) {
      throw HypothesisViolation(std::string(what) + ": vertex '" + gog.graph.vertex_name(x) +
                                "' has degree " + std::to_string(d) + " < 3");
    }
  }
}

double log_k(const GraphOfGroups& gog, VertexIndex x) {
  return std::log(static_cast<double>(degree(gog, x) - 1));
}

}  // namespace

GraphOfGroups make_graph_of_groups(MetricGraph graph, std::vector<std::uint64_t> vertex_order,
                                   std::vector<std::uint64_t> edge_order, bool has_lengths) {
  if (vertex_order.size() != graph.vertex_count() ||
      edge_order.size() != graph.unoriented_count()) {
    throw InvalidGraph("group order tables do not match the graph");
  }
  for (VertexIndex x = 0; x < graph.vertex_count(); ++x) {
    if (vertex_order[x] == 0) {
      throw InvalidGraph("vertex group of '" + graph.vertex_name(x) + "' has order 0");
    }
  }
  for (std::size_t j = 0; j < graph.unoriented_count(); ++j) {
    const std::uint64_t ge = edge_order[j];
    if (ge == 0) throw InvalidGraph("edge group of '" + graph.unoriented_name(j) + "' has order 0");
    for (VertexIndex x : {graph.origin(2 * j), graph.terminus(2 * j)}) {
      if (vertex_order[x] % ge != 0) {
        throw InvalidGraph("edge group order " + std::to_string(ge) + " of '" +
                           graph.unoriented_name(j) + "' does not divide vertex group order " +
                           std::to_string(vertex_order[x]) + " of '" + graph.vertex_name(x) +
                           "'");
      }
    }
  }
  return {std::move(graph), std::move(vertex_order), std::move(edge_order), has_lengths};
}

GraphOfGroups trivial_groups(const MetricGraph& g) {
  return make_graph_of_groups(g, std::vector<std::uint64_t>(g.vertex_count(), 1),
                              std::vector<std::uint64_t>(g.unoriented_count(), 1));
}

std::uint64_t degree(const GraphOfGroups& gog, VertexIndex x) {
  std::uint64_t d = 0;
  for (EdgeIndex e : gog.graph.outgoing(x)) d += gog.vertex_order[x] / gog.order_of_edge(e);
  return d;
}

Rational gog_volume(const GraphOfGroups& gog) {
  if (!gog.has_lengths) throw InvalidGraph("graph of groups has no edge lengths");
  Rational total = 0;
  for (std::size_t j = 0; j < gog.graph.unoriented_count(); ++j) {
    // Both orientations contribute l / |G_e|; the 1/2 cancels.
    total += gog.graph.unoriented_lengths()[j] / gog.edge_order[j];
  }
  return total;
}

EdgeAdjacency multiplicity_adjacency(const GraphOfGroups& gog) {
  const MetricGraph& g = gog.graph;
  const std::size_t n = g.edge_count();
  std::vector<std::size_t> row_start{0};
  std::vector<EdgeIndex> columns;
  std::vector<std::uint64_t> multiplicity;
  for (EdgeIndex e = 0; e < n; ++e) {
    const VertexIndex t = g.terminus(e);
    const EdgeIndex back = MetricGraph::reversal(e);
    for (EdgeIndex f : g.outgoing(t)) {
      std::uint64_t m = gog.vertex_order[t] / gog.order_of_edge(f);
      if (f == back) m -= 1;
      if (m == 0) continue;
      columns.push_back(f);
      multiplicity.push_back(m);
    }
    row_start.push_back(columns.size());
  }
  return EdgeAdjacency(n, std::move(row_start), std::move(columns), std::move(multiplicity));
}

EntropySolution gog_entropy(const GraphOfGroups& gog, const EntropyOptions& options) {
  if (!gog.has_lengths) throw InvalidGraph("graph of groups has no edge lengths");
  require_degree_three(gog, "graph-of-groups entropy");
  const EdgeAdjacency pattern = multiplicity_adjacency(gog);
  if (strongly_connected_components(pattern).size() != 1) {
    throw HypothesisViolation("multiplicity matrix is reducible");
  }
  const std::vector<double> lengths = gog.graph.oriented_lengths();
  return solve_entropy(pattern, lengths, options);
}

double gog_minimal_entropy(const GraphOfGroups& gog) {
  require_degree_three(gog, "graph-of-groups minimal entropy");
  double sum = 0.0;
  for (VertexIndex x = 0; x < gog.graph.vertex_count(); ++x) {
    sum += static_cast<double>(degree(gog, x)) * log_k(gog, x) /
           static_cast<double>(gog.vertex_order[x]);
  }
  return 0.5 * sum;
}

GogMinimalMetric gog_minimal_metric(const GraphOfGroups& gog) {
  GogMinimalMetric out;
  out.h_min = gog_minimal_entropy(gog);
  const MetricGraph& g = gog.graph;
  out.lengths.resize(g.unoriented_count());
  double weighted = 0.0;  // (1/2) sum over oriented edges of log(k_i k_t) / |G_e|
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) {
    const double w = log_k(gog, g.origin(2 * j)) + log_k(gog, g.terminus(2 * j));
    out.lengths[j] = w;
    weighted += w / static_cast<double>(gog.edge_order[j]);
  }
  for (double& l : out.lengths) l /= weighted;
  return out;
}

CoveringReport check_covering(const CoveringMap& cover) {
  const MetricGraph& y = cover.source.graph;
  const MetricGraph& x = cover.target.graph;
  CoveringReport report;
  auto fail = [&](std::string why) {
    report.valid = false;
    report.violation = std::move(why);
    return report;
  };

  if (cover.vertex_map.size() != y.vertex_count() || cover.edge_map.size() != y.edge_count()) {
    return fail("vertex or edge map does not cover the source graph");
  }
  for (VertexIndex v = 0; v < y.vertex_count(); ++v) {
    if (cover.vertex_map[v] >= x.vertex_count()) {
      return fail("vertex '" + y.vertex_name(v) + "' maps outside the target");
    }
  }
  for (EdgeIndex f = 0; f < y.edge_count(); ++f) {
    const EdgeIndex e = cover.edge_map[f];
    if (e >= x.edge_count()) return fail("edge '" + y.edge_name(f) + "' maps outside the target");
    if (cover.edge_map[MetricGraph::reversal(f)] != MetricGraph::reversal(e)) {
      return fail("edge map does not commute with reversal at '" + y.edge_name(f) + "'");
    }
    if (cover.vertex_map[y.origin(f)] != x.origin(e) ||
        cover.vertex_map[y.terminus(f)] != x.terminus(e)) {
      return fail("edge map does not commute with endpoints at '" + y.edge_name(f) + "' -> '" +
                  x.edge_name(e) + "'");
    }
  }

  const auto& hy = cover.source.vertex_order;
  const auto& gx = cover.target.vertex_order;
  // Local condition: sum_{i(f) = v, phi(f) = e} |H_v| / |H_f| = |G_phi(v)| / |G_e|.
  for (VertexIndex v = 0; v < y.vertex_count(); ++v) {
    const VertexIndex image = cover.vertex_map[v];
    for (EdgeIndex e : x.outgoing(image)) {
      Rational sum = 0;
      for (EdgeIndex f : y.outgoing(v)) {
        if (cover.edge_map[f] == e) sum += Rational(hy[v]) / cover.source.order_of_edge(f);
      }
      const Rational expected = Rational(gx[image]) / cover.target.order_of_edge(e);
      if (sum != expected) {
        return fail("local fiber condition fails at vertex '" + y.vertex_name(v) +
                    "' over edge '" + x.edge_name(e) + "': " + to_string(sum) + " != " +
                    to_string(expected));
      }
    }
  }

  std::optional<Rational> n;
  auto agree = [&](const Rational& value) {
    if (!n) n = value;
    return *n == value;
  };
  for (VertexIndex t = 0; t < x.vertex_count(); ++t) {
    Rational sum = 0;
    for (VertexIndex v = 0; v < y.vertex_count(); ++v) {
      if (cover.vertex_map[v] == t) sum += Rational(gx[t]) / hy[v];
    }
    if (!agree(sum)) {
      return fail("sheet count over vertex '" + x.vertex_name(t) + "' is " + to_string(sum) +
                  ", expected " + to_string(*n));
    }
  }
  for (EdgeIndex e = 0; e < x.edge_count(); ++e) {
    Rational sum = 0;
    for (EdgeIndex f = 0; f < y.edge_count(); ++f) {
      if (cover.edge_map[f] == e) {
        sum += Rational(cover.target.order_of_edge(e)) / cover.source.order_of_edge(f);
      }
    }
    if (!agree(sum)) {
      return fail("sheet count over edge '" + x.edge_name(e) + "' is " + to_string(sum) +
                  ", expected " + to_string(*n));
    }
  }
  if (!n || *n <= 0 || boost::multiprecision::denominator(*n) != 1) {
    return fail("sheet count " + (n ? to_string(*n) : std::string("undefined")) +
                " is not a positive integer");
  }
  report.valid = true;
  report.sheets = boost::multiprecision::numerator(*n).convert_to<std::uint64_t>();
  return report;
}

CoveringInequalityReport covering_inequality(const CoveringMap& cover,
                                             const EntropyOptions& options) {
  const auto lengths = cover.source.graph.unoriented_lengths();
  return covering_inequality(cover, lengths, options);
}

CoveringInequalityReport covering_inequality(const CoveringMap& cover,
                                             std::span<const Rational> source_lengths,
                                             const EntropyOptions& options) {
  const CoveringReport check = check_covering(cover);
  if (!check.valid) throw InvalidGraph("not a covering: " + check.violation);
  require_degree_three(cover.source, "covering source");
  require_degree_three(cover.target, "covering target");

  GraphOfGroups source = cover.source;
  source.graph = with_lengths(cover.source.graph, source_lengths);
  source.has_lengths = true;

  CoveringInequalityReport report;
  report.sheets = *check.sheets;
  report.lhs = gog_entropy(source, options).h * to_double(gog_volume(source));
  report.rhs = static_cast<double>(report.sheets) * gog_minimal_entropy(cover.target);
  report.gap = report.lhs - report.rhs;

  const GogMinimalMetric minimizer = gog_minimal_metric(cover.target);
  double lo = INFINITY, hi = 0.0, sum = 0.0;
  const MetricGraph& y = source.graph;
  for (std::size_t j = 0; j < y.unoriented_count(); ++j) {
    const double ratio =
        y.length_value(2 * j) / minimizer.lengths[cover.edge_map[2 * j] / 2];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
  }
  const double mean = sum / static_cast<double>(y.unoriented_count());
  report.lambda_spread = (hi - lo) / mean;
  report.proportional = report.lambda_spread <= 1e-6;
  if (report.proportional) report.lambda = mean;
  report.equality = std::abs(report.gap) < 1e-6 && report.proportional;
  return report;
}

}  // namespace volent
