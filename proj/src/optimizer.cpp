#include "volent/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "volent/errors.hpp"

namespace volent {

namespace {

void require_branch_vertices(const MetricGraph& g) {
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    if (g.valency(x) < 3) {
      throw HypothesisViolation("vertex '" + g.vertex_name(x) + "' has valency " +
                                std::to_string(g.valency(x)) + " < 3");
    }
  }
}

double log_k(const MetricGraph& g, VertexIndex x) {
  return std::log(static_cast<double>(g.k(x)));
}

void normalize_max(std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  for (double& x : v) x /= m;
}

// y_e = exp(-h l(e)) x_e propagated over consecutive edge pairs. Every pair
// must agree with the ratio rule; the graph is connected so one seed suffices.
std::vector<double> ratio_rule_y(const MetricGraph& g) {
  const std::size_t n = g.edge_count();
  std::vector<double> y(n, 0.0);
  std::vector<bool> seen(n, false);
  auto ratio = [&](EdgeIndex e) {  // y_e / y_f for i(f) = t(e)
    return std::sqrt(static_cast<double>(g.k(g.terminus(e))) /
                     static_cast<double>(g.k(g.origin(e))));
  };
  std::queue<EdgeIndex> queue;
  y[0] = 1.0;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    const EdgeIndex e = queue.front();
    queue.pop();
    // Successors f of e: y_f = y_e / ratio(e).
    for (EdgeIndex f : g.outgoing(g.terminus(e))) {
      const double value = y[e] / ratio(e);
      if (!seen[f]) {
        y[f] = value;
        seen[f] = true;
        queue.push(f);
      } else if (std::abs(y[f] - value) > 1e-12 * value) {
        throw InternalConsistencyError("ratio rule is inconsistent on a cycle");
      }
    }
    // Predecessors d of e (t(d) = i(e)): y_d = y_e * ratio(d).
    for (EdgeIndex out : g.outgoing(g.origin(e))) {
      const EdgeIndex d = MetricGraph::reversal(out);
      const double value = y[e] * ratio(d);
      if (!seen[d]) {
        y[d] = value;
        seen[d] = true;
        queue.push(d);
      } else if (std::abs(y[d] - value) > 1e-12 * value) {
        throw InternalConsistencyError("ratio rule is inconsistent on a cycle");
      }
    }
  }
  return y;
}

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  return base;
}

}  // namespace

double minimal_entropy(const MetricGraph& g) {
  require_branch_vertices(g);
  double sum = 0.0;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    sum += static_cast<double>(g.valency(x)) * log_k(g, x);
  }
  return 0.5 * sum;
}

MinimalMetricResult minimal_metric(const MetricGraph& g) {
  const double h = minimal_entropy(g);  // validates valencies
  const double denominator = 2.0 * h;   // sum_x (k_x + 1) log k_x

  MinimalMetricResult result;
  result.h_min = h;
  result.lengths.resize(g.unoriented_count());
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) {
    const EdgeIndex e = 2 * j;
    result.lengths[j] = (log_k(g, g.origin(e)) + log_k(g, g.terminus(e))) / denominator;
  }

  std::vector<double> y = ratio_rule_y(g);
  result.perron.resize(g.edge_count());
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    result.perron[e] = std::exp(h * result.lengths[e / 2]) * y[e];
  }
  normalize_max(result.perron);

  std::vector<double> z(g.vertex_count());
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    const EdgeIndex f = g.outgoing(x).front();
    z[x] = std::exp(-h * result.lengths[f / 2]) * result.perron[f];
  }
  normalize_max(z);
  result.z.assign(z.begin(), z.end());
  return result;
}

MinimalMetricResult minimize_with_reduction(const MetricGraph& g) {
  SeriesReduction reduction = series_reduce(g);
  const MinimalMetricResult reduced = minimal_metric(reduction.graph);
  const double h = reduced.h_min;

  MinimalMetricResult result;
  result.h_min = h;
  result.lengths.assign(g.unoriented_count(), 0.0);
  result.perron.assign(g.edge_count(), 0.0);
  bool has_chain = false;
  for (std::size_t j = 0; j < reduction.chains.size(); ++j) {
    const auto& chain = reduction.chains[j];
    has_chain |= chain.size() > 1;
    const double piece = reduced.lengths[j] / static_cast<double>(chain.size());
    for (EdgeIndex e : chain) result.lengths[e / 2] = piece;

    // The last piece has the same successors as the reduced edge; earlier
    // pieces have a single successor each.
    auto fill = [&](const std::vector<EdgeIndex>& path, double x_last) {
      result.perron[path.back()] = x_last;
      for (std::size_t i = path.size() - 1; i-- > 0;) {
        result.perron[path[i]] = std::exp(-h * piece) * result.perron[path[i + 1]];
      }
    };
    fill(chain, reduced.perron[2 * j]);
    std::vector<EdgeIndex> backwards;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      backwards.push_back(MetricGraph::reversal(*it));
    }
    fill(backwards, reduced.perron[2 * j + 1]);
  }
  normalize_max(result.perron);

  result.z.assign(g.vertex_count(), std::nullopt);
  std::vector<double> z;
  std::vector<VertexIndex> where;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    if (g.valency(x) < 3) continue;
    const EdgeIndex f = g.outgoing(x).front();
    z.push_back(std::exp(-h * result.lengths[f / 2]) * result.perron[f]);
    where.push_back(x);
  }
  normalize_max(z);
  for (std::size_t i = 0; i < where.size(); ++i) result.z[where[i]] = z[i];

  result.canonical = has_chain ? Canonicity::chain_totals_only : Canonicity::unique;
  result.reduction = std::move(reduction);
  return result;
}

BiregularMinimum biregular_minimum(std::uint64_t k1, std::uint64_t k2, std::uint64_t edge_count) {
  if (k1 < 2 || k2 < 2) throw std::invalid_argument("biregular minimum needs k1, k2 >= 2");
  if (edge_count == 0 || edge_count % 2 != 0) {
    throw std::invalid_argument("oriented edge count must be positive and even");
  }
  BiregularMinimum out;
  out.h = static_cast<double>(edge_count) / 4.0 *
          std::log(static_cast<double>(k1) * static_cast<double>(k2));
  out.length = Rational(2, static_cast<long long>(edge_count));
  return out;
}

MetricGraph split_vertex(const MetricGraph& g, VertexIndex x, const VertexPartition& partition,
                         std::optional<Rational> new_length) {
  if (x >= g.vertex_count()) throw std::out_of_range("vertex index out of range");
  if (g.valency(x) < 4) {
    throw HypothesisViolation("cannot split vertex '" + g.vertex_name(x) + "': valency " +
                              std::to_string(g.valency(x)) + " < 4");
  }
  if (partition.stay.size() < 2 || partition.move.size() < 2) {
    throw HypothesisViolation("each side of the partition needs at least two edges");
  }
  std::vector<EdgeIndex> all(partition.stay);
  all.insert(all.end(), partition.move.begin(), partition.move.end());
  std::sort(all.begin(), all.end());
  const auto out = g.outgoing(x);
  if (!std::equal(all.begin(), all.end(), out.begin(), out.end())) {
    throw HypothesisViolation("partition must cover the outgoing edges at '" +
                              g.vertex_name(x) + "' exactly once");
  }

  GraphSpec spec = g.to_spec();
  std::set<std::string> vertex_names(spec.vertices.begin(), spec.vertices.end());
  const std::string y = fresh_name(g.vertex_name(x) + "'", vertex_names);
  spec.vertices.push_back(y);
  for (EdgeIndex e : partition.move) {
    EdgeSpec& es = spec.edges[e / 2];
    // Orientation 2j leaves u, 2j+1 leaves v.
    if (e % 2 == 0) {
      es.u = y;
    } else {
      es.v = y;
    }
  }
  std::set<std::string> edge_names;
  for (const EdgeSpec& es : spec.edges) edge_names.insert(es.id);
  spec.edges.push_back({g.vertex_name(x), y, new_length.value_or(g.l_min()),
                        fresh_name("split_" + g.vertex_name(x), edge_names)});
  return build_graph(spec);
}

std::vector<MetricGraph> trivalent_resolution(const MetricGraph& g) {
  require_branch_vertices(g);
  std::vector<MetricGraph> steps{g};
  while (true) {
    const MetricGraph& current = steps.back();
    std::optional<VertexIndex> target;
    for (VertexIndex x = 0; x < current.vertex_count() && !target; ++x) {
      if (current.valency(x) >= 4) target = x;
    }
    if (!target) break;
    const auto out = current.outgoing(*target);
    VertexPartition partition{{out.begin() + 2, out.end()}, {out[0], out[1]}};
    steps.push_back(split_vertex(current, *target, partition));
  }
  return steps;
}

std::int64_t free_rank(const MetricGraph& g) {
  return static_cast<std::int64_t>(g.unoriented_count()) -
         static_cast<std::int64_t>(g.vertex_count()) + 1;
}

double min_entropy_free_rank(std::int64_t r) {
  if (r < 2) throw std::invalid_argument("free rank must be at least 2");
  return 3.0 * static_cast<double>(r - 1) * std::log(2.0);
}

}  // namespace volent
