#include "volent/metric_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "volent/errors.hpp"

namespace volent {

namespace {

std::vector<std::vector<VertexIndex>> connected_components(
    std::size_t vertex_count, const std::vector<std::pair<VertexIndex, VertexIndex>>& ends) {
  std::vector<std::vector<VertexIndex>> adjacency(vertex_count);
  for (const auto& [u, v] : ends) {
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  std::vector<bool> seen(vertex_count, false);
  std::vector<std::vector<VertexIndex>> components;
  for (VertexIndex start = 0; start < vertex_count; ++start) {
    if (seen[start]) continue;
    std::vector<VertexIndex> component;
    std::queue<VertexIndex> queue;
    queue.push(start);
    seen[start] = true;
    while (!queue.empty()) {
      const VertexIndex x = queue.front();
      queue.pop();
      component.push_back(x);
      for (VertexIndex y : adjacency[x]) {
        if (!seen[y]) {
          seen[y] = true;
          queue.push(y);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::string join_names(const std::vector<std::string>& names,
                       const std::vector<VertexIndex>& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ", ";
    out += names[indices[i]];
  }
  return out;
}

}  // namespace

std::string MetricGraph::edge_name(EdgeIndex e) const {
  const std::string& base = edge_names_[e / 2];
  return (e % 2 == 0) ? base : "~" + base;
}

std::optional<VertexIndex> MetricGraph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<VertexIndex>(it - vertex_names_.begin());
}

std::optional<std::size_t> MetricGraph::find_unoriented(const std::string& id) const {
  auto it = std::find(edge_names_.begin(), edge_names_.end(), id);
  if (it == edge_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - edge_names_.begin());
}

std::optional<EdgeIndex> MetricGraph::find_edge(const std::string& name) const {
  const bool reversed = !name.empty() && name.front() == '~';
  auto j = find_unoriented(reversed ? name.substr(1) : name);
  if (!j) return std::nullopt;
  return 2 * *j + (reversed ? 1 : 0);
}

std::vector<double> MetricGraph::oriented_lengths() const {
  std::vector<double> out(edges_.size());
  for (EdgeIndex e = 0; e < edges_.size(); ++e) out[e] = length_values_[e / 2];
  return out;
}

GraphSpec MetricGraph::to_spec() const {
  GraphSpec spec;
  spec.vertices = vertex_names_;
  spec.edges.reserve(lengths_.size());
  for (std::size_t j = 0; j < lengths_.size(); ++j) {
    const OrientedEdge& e = edges_[2 * j];
    spec.edges.push_back(
        {vertex_names_[e.origin], vertex_names_[e.terminus], lengths_[j], edge_names_[j]});
  }
  return spec;
}

MetricGraph build_graph(const GraphSpec& spec) {
  MetricGraph g;
  std::map<std::string, VertexIndex> vertex_of;
  for (const std::string& name : spec.vertices) {
    if (name.empty()) throw InvalidGraph("empty vertex name");
    if (!vertex_of.emplace(name, g.vertex_names_.size()).second) {
      throw InvalidGraph("duplicate vertex '" + name + "'");
    }
    g.vertex_names_.push_back(name);
  }
  if (g.vertex_names_.empty()) throw InvalidGraph("graph has no vertices");

  std::map<std::string, std::size_t> edge_of;
  std::vector<std::pair<VertexIndex, VertexIndex>> ends;
  for (std::size_t j = 0; j < spec.edges.size(); ++j) {
    const EdgeSpec& es = spec.edges[j];
    std::string id = es.id.empty() ? "e" + std::to_string(j) : es.id;
    if (id.front() == '~') throw InvalidGraph("edge id '" + id + "' may not start with '~'");
    if (!edge_of.emplace(id, j).second) throw InvalidGraph("duplicate edge id '" + id + "'");
    auto u = vertex_of.find(es.u);
    auto v = vertex_of.find(es.v);
    if (u == vertex_of.end() || v == vertex_of.end()) {
      const std::string& missing = u == vertex_of.end() ? es.u : es.v;
      throw InvalidGraph("edge '" + id + "' references unknown vertex '" + missing + "'");
    }
    if (es.length <= 0) {
      throw InvalidGraph("non-positive length " + to_string(es.length) + " on edge '" + id +
                         "'");
    }
    g.edge_names_.push_back(std::move(id));
    g.lengths_.push_back(es.length);
    g.length_values_.push_back(to_double(es.length));
    ends.emplace_back(u->second, v->second);
  }

  g.outgoing_.assign(g.vertex_names_.size(), {});
  for (std::size_t j = 0; j < ends.size(); ++j) {
    const auto [u, v] = ends[j];
    g.edges_.push_back({2 * j, 2 * j + 1, u, v});
    g.edges_.push_back({2 * j + 1, 2 * j, v, u});
    g.outgoing_[u].push_back(2 * j);
    g.outgoing_[v].push_back(2 * j + 1);
  }
  for (auto& out : g.outgoing_) std::sort(out.begin(), out.end());

  for (VertexIndex x = 0; x < g.vertex_names_.size(); ++x) {
    if (g.outgoing_[x].empty()) {
      throw InvalidGraph("vertex '" + g.vertex_names_[x] + "' has no incident edge");
    }
  }
  const auto components = connected_components(g.vertex_names_.size(), ends);
  if (components.size() > 1) {
    std::string message = "disconnected graph with " + std::to_string(components.size()) +
                          " components:";
    for (const auto& c : components) message += " {" + join_names(g.vertex_names_, c) + "}";
    throw InvalidGraph(message);
  }

  g.l_max_ = *std::max_element(g.lengths_.begin(), g.lengths_.end());
  g.l_min_ = *std::min_element(g.lengths_.begin(), g.lengths_.end());
  return g;
}

MetricGraph with_lengths(const MetricGraph& g, std::span<const Rational> lengths) {
  if (lengths.size() != g.unoriented_count()) {
    throw std::invalid_argument("length vector does not match the edge count");
  }
  GraphSpec spec = g.to_spec();
  for (std::size_t j = 0; j < lengths.size(); ++j) spec.edges[j].length = lengths[j];
  return build_graph(spec);
}

MetricGraph with_lengths(const MetricGraph& g, std::span<const double> lengths) {
  std::vector<Rational> exact;
  exact.reserve(lengths.size());
  for (double l : lengths) exact.push_back(from_double(l));
  return with_lengths(g, exact);
}

std::string HypothesisReport::describe(const MetricGraph& g) const {
  std::ostringstream out;
  out << "no terminal vertex: " << (no_terminal_vertex ? "pass" : "FAIL");
  if (!no_terminal_vertex) {
    out << " (";
    for (std::size_t i = 0; i < terminal_vertices.size(); ++i) {
      out << (i ? ", " : "") << g.vertex_name(terminal_vertices[i]);
    }
    out << ")";
  }
  out << "; not a cycle: " << (not_a_cycle ? "pass" : "FAIL (" + cycle_witness + ")");
  out << "; connected: " << (connected ? "pass" : "FAIL");
  return out.str();
}

HypothesisReport validate_entropy_hypotheses(const MetricGraph& g) {
  HypothesisReport report;
  bool has_branch = false;
  bool all_two = true;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    const std::size_t val = g.valency(x);
    if (val == 1) report.terminal_vertices.push_back(x);
    if (val >= 3) has_branch = true;
    if (val != 2) all_two = false;
  }
  report.no_terminal_vertex = report.terminal_vertices.empty();
  report.not_a_cycle = has_branch;
  if (!has_branch) {
    report.cycle_witness = all_two ? "graph is a cycle" : "no vertex of valency at least three";
  }
  std::vector<std::pair<VertexIndex, VertexIndex>> ends;
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) {
    ends.emplace_back(g.origin(2 * j), g.terminus(2 * j));
  }
  report.components = connected_components(g.vertex_count(), ends);
  report.connected = report.components.size() == 1;
  return report;
}

void require_entropy_hypotheses(const MetricGraph& g) {
  const HypothesisReport report = validate_entropy_hypotheses(g);
  if (!report.ok()) throw HypothesisViolation("hypotheses violated: " + report.describe(g));
}

Rational volume(const MetricGraph& g) {
  Rational total = 0;
  for (const Rational& l : g.unoriented_lengths()) total += l;
  return total;
}

MetricGraph normalize(const MetricGraph& g) {
  const Rational vol = volume(g);
  if (vol == 1) return g;
  return scale_metric(g, Rational(1) / vol);
}

MetricGraph scale_metric(const MetricGraph& g, const Rational& alpha) {
  if (alpha <= 0) throw std::invalid_argument("scale factor must be positive");
  std::vector<Rational> lengths(g.unoriented_lengths().begin(), g.unoriented_lengths().end());
  for (Rational& l : lengths) l *= alpha;
  return with_lengths(g, lengths);
}

SeriesReduction series_reduce(const MetricGraph& g) {
  const HypothesisReport report = validate_entropy_hypotheses(g);
  if (!report.no_terminal_vertex) {
    throw HypothesisViolation("series reduction needs a graph without terminal vertices: " +
                              report.describe(g));
  }
  if (!report.not_a_cycle) {
    throw HypothesisViolation("series reduction of a cycle would erase every vertex");
  }

  SeriesReduction out{};
  std::vector<std::optional<VertexIndex>> new_index(g.vertex_count());
  GraphSpec spec;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    if (g.valency(x) >= 3) {
      new_index[x] = spec.vertices.size();
      spec.vertices.push_back(g.vertex_name(x));
      out.vertex_origin.push_back(x);
    }
  }

  std::vector<bool> used(g.edge_count(), false);
  for (VertexIndex x : out.vertex_origin) {
    for (EdgeIndex first : g.outgoing(x)) {
      if (used[first]) continue;
      std::vector<EdgeIndex> chain{first};
      Rational total = g.length(first);
      EdgeIndex current = first;
      while (!new_index[g.terminus(current)]) {
        // Valency 2 at the terminus: the continuation is the other outgoing edge.
        const auto out_edges = g.outgoing(g.terminus(current));
        const EdgeIndex back = MetricGraph::reversal(current);
        current = out_edges[0] == back ? out_edges[1] : out_edges[0];
        chain.push_back(current);
        total += g.length(current);
      }
      for (EdgeIndex e : chain) {
        used[e] = true;
        used[MetricGraph::reversal(e)] = true;
      }
      spec.edges.push_back({g.vertex_name(x), g.vertex_name(g.terminus(current)), total,
                            g.unoriented_name(MetricGraph::unoriented(first))});
      out.chains.push_back(std::move(chain));
    }
  }
  out.graph = build_graph(spec);
  return out;
}

}  // namespace volent
