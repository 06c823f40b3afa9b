#include "volent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "volent/errors.hpp"

namespace volent {

EdgeAdjacency::EdgeAdjacency(std::size_t order, std::vector<std::size_t> row_start,
                             std::vector<EdgeIndex> columns,
                             std::vector<std::uint64_t> multiplicity)
    : row_start_(std::move(row_start)),
      columns_(std::move(columns)),
      multiplicity_(std::move(multiplicity)) {
  if (row_start_.size() != order + 1 || columns_.size() != multiplicity_.size() ||
      row_start_.back() != columns_.size()) {
    throw std::invalid_argument("inconsistent CSR layout");
  }
}

std::uint64_t EdgeAdjacency::at(EdgeIndex e, EdgeIndex f) const {
  const auto cols = row(e);
  auto it = std::lower_bound(cols.begin(), cols.end(), f);
  if (it == cols.end() || *it != f) return 0;
  return row_multiplicity(e)[static_cast<std::size_t>(it - cols.begin())];
}

std::uint64_t EdgeAdjacency::row_sum(EdgeIndex e) const {
  const auto m = row_multiplicity(e);
  return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

EdgeAdjacency edge_adjacency(const MetricGraph& g) {
  const std::size_t n = g.edge_count();
  std::vector<std::size_t> row_start{0};
  std::vector<EdgeIndex> columns;
  for (EdgeIndex e = 0; e < n; ++e) {
    const EdgeIndex back = MetricGraph::reversal(e);
    for (EdgeIndex f : g.outgoing(g.terminus(e))) {
      if (f != back) columns.push_back(f);
    }
    row_start.push_back(columns.size());
  }
  std::vector<std::uint64_t> ones(columns.size(), 1);
  return EdgeAdjacency(n, std::move(row_start), std::move(columns), std::move(ones));
}

std::vector<std::vector<EdgeIndex>> strongly_connected_components(const EdgeAdjacency& a) {
  // Iterative Tarjan.
  const std::size_t n = a.order();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<EdgeIndex> stack;
  std::vector<std::vector<EdgeIndex>> components;
  std::size_t counter = 0;

  struct Frame {
    EdgeIndex node;
    std::size_t next;
  };
  for (EdgeIndex root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& frame = call.back();
      const auto succ = a.row(frame.node);
      if (frame.next < succ.size()) {
        const EdgeIndex w = succ[frame.next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[frame.node] = std::min(low[frame.node], index[w]);
        }
        continue;
      }
      const EdgeIndex v = frame.node;
      if (low[v] == index[v]) {
        std::vector<EdgeIndex> component;
        EdgeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call.pop_back();
      if (!call.empty()) {
        low[call.back().node] = std::min(low[call.back().node], low[v]);
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return components;
}

IrreducibilityReport is_irreducible(const MetricGraph& g) {
  const HypothesisReport hyp = validate_entropy_hypotheses(g);
  if (!hyp.no_terminal_vertex || !hyp.connected) {
    throw HypothesisViolation("irreducibility test needs a connected graph without terminal "
                              "vertices: " + hyp.describe(g));
  }
  IrreducibilityReport report;
  auto components = strongly_connected_components(edge_adjacency(g));
  report.irreducible = components.size() == 1;
  if (!report.irreducible) report.components = std::move(components);

  bool has_branch = false;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) has_branch |= g.valency(x) >= 3;
  if (has_branch != report.irreducible) {
    throw InternalConsistencyError(
        "strong connectivity of the edge digraph disagrees with the valency criterion");
  }
  return report;
}

void WeightedEdgeMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const auto starts = base.row_start();
  const auto cols = base.columns();
  const std::size_t n = base.order();
  for (std::size_t e = 0; e < n; ++e) {
    double sum = 0.0;
    for (std::size_t k = starts[e]; k < starts[e + 1]; ++k) sum += values[k] * x[cols[k]];
    y[e] = sum;
  }
}

WeightedEdgeMatrix weighted_matrix(const EdgeAdjacency& a, std::span<const double> lengths,
                                   double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
  if (lengths.size() != a.order()) throw std::invalid_argument("length vector size mismatch");
  WeightedEdgeMatrix m{a, h, {}};
  const auto cols = a.columns();
  const auto mult = a.multiplicities();
  m.values.resize(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    m.values[k] = static_cast<double>(mult[k]) * std::exp(-h * lengths[cols[k]]);
  }
  return m;
}

WeightedEdgeMatrix weighted_matrix(const MetricGraph& g, double h) {
  return weighted_matrix(edge_adjacency(g), g.oriented_lengths(), h);
}

namespace {

struct IterationState {
  std::vector<double> x;
  std::vector<double> y;
  double estimate = 0.0;
  double residual = 0.0;
};

double max_entry(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

// Evaluates M + shift*I at the current iterate: Rayleigh quotient (reported
// for M) and max-norm residual. The product is left in y.
void evaluate(const WeightedEdgeMatrix& m, double shift, IterationState& s) {
  m.multiply(s.x, s.y);
  double xy = 0.0, xx = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    s.y[i] += shift * s.x[i];
    xy += s.x[i] * s.y[i];
    xx += s.x[i] * s.x[i];
  }
  const double rq = xy / xx;
  double res = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) res = std::max(res, std::abs(s.y[i] - rq * s.x[i]));
  s.estimate = rq - shift;
  s.residual = res;  // x has max entry 1
}

void advance(IterationState& s) {
  const double scale = max_entry(s.y);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw NumericalFailure("power iteration collapsed to the zero vector");
  }
  for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] = s.y[i] / scale;
}

}  // namespace

PerronResult spectral_radius(const WeightedEdgeMatrix& m, const PowerIterationOptions& options) {
  const std::size_t n = m.base.order();
  if (n == 0) throw HypothesisViolation("empty matrix");
  if (strongly_connected_components(m.base).size() != 1) {
    throw HypothesisViolation("matrix is reducible");
  }

  IterationState s{std::vector<double>(n, 1.0), std::vector<double>(n, 0.0), 0.0, 0.0};
  PerronResult result;
  double shift = 0.0;
  double previous = -1.0;
  int alternations = 0;
  double last_delta = 0.0;
  std::size_t plain_steps = 0;

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    evaluate(m, shift, s);
    const double delta = s.estimate - previous;
    const double threshold = options.residual_tolerance * std::max(1.0, s.estimate);
    if (it > 1 && std::abs(delta) <= options.rayleigh_tolerance * std::abs(s.estimate) &&
        s.residual <= threshold) {
      result.iterations = it;
      break;
    }
    if (shift == 0.0) {
      ++plain_steps;
      // Period-2 style oscillation: estimate deltas alternate in sign without
      // shrinking.
      if (it > 2 && delta * last_delta < 0.0 && std::abs(delta) > 0.5 * std::abs(last_delta)) {
        ++alternations;
      } else {
        alternations = 0;
      }
      if (alternations >= 8 || plain_steps >= options.plain_budget) {
        // Shift on the scale of the root so that -lambda maps well inside
        // the dominant circle even when the entries are tiny.
        shift = s.estimate > 0.0 ? s.estimate : 1.0;
        s.x.assign(n, 1.0);
        previous = -1.0;
        last_delta = 0.0;
        continue;
      }
    }
    last_delta = delta;
    previous = s.estimate;
    advance(s);
  }
  if (result.iterations == 0) {
    std::ostringstream msg;
    msg << "power iteration did not converge in " << options.max_iterations
        << " iterations (residual " << s.residual << ")";
    throw NumericalFailure(msg.str());
  }

  result.radius = s.estimate;
  result.shifted = shift != 0.0;
  result.vector = s.x;
  // Residual of M itself on the final normalized vector.
  std::vector<double> mv(n);
  m.multiply(result.vector, mv);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res = std::max(res, std::abs(mv[i] - result.radius * result.vector[i]));
  }
  result.residual = res;
  if (*std::min_element(result.vector.begin(), result.vector.end()) <= 0.0) {
    throw NumericalFailure("Perron vector is not strictly positive");
  }
  return result;
}

}  // namespace volent
