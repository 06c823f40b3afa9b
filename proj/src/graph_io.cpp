#include "volent/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace volent {

namespace {

[[noreturn]] void field_error(const std::string& pointer, const std::string& what) {
  throw DocumentError("at " + pointer + ": " + what);
}

const Json& require(const Json& doc, const std::string& key, const std::string& pointer) {
  if (!doc.is_object()) field_error(pointer, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) field_error(pointer + "/" + key, "missing field");
  return *it;
}

std::string require_string(const Json& value, const std::string& pointer) {
  if (!value.is_string()) field_error(pointer, "expected a string");
  return value.get<std::string>();
}

Rational parse_length(const Json& value, const std::string& pointer) {
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      field_error(pointer, e.what());
    }
  }
  field_error(pointer, "length must be an integer or a \"p/q\" string");
}

std::uint64_t parse_order(const Json& value, const std::string& pointer) {
  if (!value.is_number_integer() || value.get<long long>() <= 0) {
    field_error(pointer, "group order must be a positive integer");
  }
  return value.get<std::uint64_t>();
}

struct ParsedGraph {
  GraphSpec spec;
  bool has_lengths = true;
};

ParsedGraph parse_graph(const Json& doc, const std::string& pointer, bool lengths_optional) {
  ParsedGraph out;
  const Json& vertices = require(doc, "vertices", pointer);
  if (!vertices.is_array()) field_error(pointer + "/vertices", "expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out.spec.vertices.push_back(
        require_string(vertices[i], pointer + "/vertices/" + std::to_string(i)));
  }
  const Json& edges = require(doc, "edges", pointer);
  if (!edges.is_array()) field_error(pointer + "/edges", "expected an array");
  std::size_t with_length = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = pointer + "/edges/" + std::to_string(i);
    const Json& edge = edges[i];
    EdgeSpec es;
    es.u = require_string(require(edge, "u", at), at + "/u");
    es.v = require_string(require(edge, "v", at), at + "/v");
    if (auto id = edge.find("id"); id != edge.end()) es.id = require_string(*id, at + "/id");
    if (auto len = edge.find("length"); len != edge.end()) {
      es.length = parse_length(*len, at + "/length");
      ++with_length;
    } else if (!lengths_optional) {
      field_error(at + "/length", "missing field");
    } else {
      es.length = 1;
    }
    out.spec.edges.push_back(std::move(es));
  }
  if (with_length != 0 && with_length != edges.size()) {
    field_error(pointer + "/edges", "either every edge or no edge may carry a length");
  }
  out.has_lengths = with_length == edges.size();
  return out;
}

MetricGraph build_at(const GraphSpec& spec, const std::string& pointer) {
  try {
    return build_graph(spec);
  } catch (const DocumentError&) {
    throw;
  } catch (const InvalidGraph& e) {
    throw InvalidGraph(pointer.empty() ? e.what() : "in " + pointer + ": " + e.what());
  }
}

GraphOfGroups parse_gog(const Json& doc, const std::string& pointer) {
  ParsedGraph parsed = parse_graph(doc, pointer, true);
  MetricGraph g = build_at(parsed.spec, pointer);
  std::vector<std::uint64_t> vertex_order(g.vertex_count(), 1);
  std::vector<std::uint64_t> edge_order(g.unoriented_count(), 1);
  if (auto groups = doc.find("groups"); groups != doc.end()) {
    const std::string at = pointer + "/groups";
    if (!groups->is_object()) field_error(at, "expected an object");
    if (auto vo = groups->find("vertex_orders"); vo != groups->end()) {
      if (!vo->is_object()) field_error(at + "/vertex_orders", "expected an object");
      for (const auto& [name, value] : vo->items()) {
        const std::string here = at + "/vertex_orders/" + name;
        auto x = g.find_vertex(name);
        if (!x) field_error(here, "unknown vertex");
        vertex_order[*x] = parse_order(value, here);
      }
    }
    if (auto eo = groups->find("edge_orders"); eo != groups->end()) {
      if (!eo->is_object()) field_error(at + "/edge_orders", "expected an object");
      for (const auto& [name, value] : eo->items()) {
        const std::string here = at + "/edge_orders/" + name;
        auto j = g.find_unoriented(name);
        if (!j) field_error(here, "unknown edge");
        edge_order[*j] = parse_order(value, here);
      }
    }
  }
  return make_graph_of_groups(std::move(g), std::move(vertex_order), std::move(edge_order),
                              parsed.has_lengths);
}

}  // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw DocumentError("syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + e.what());
  }
}

Json load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_document(text.str());
}

MetricGraph graph_from_json(const Json& doc) {
  return build_at(parse_graph(doc, "", false).spec, "");
}

GraphOfGroups gog_from_json(const Json& doc) { return parse_gog(doc, ""); }

CoveringMap covering_from_json(const Json& doc) {
  CoveringMap cover{parse_gog(require(doc, "source", ""), "/source"),
                    parse_gog(require(doc, "target", ""), "/target"),
                    {},
                    {}};
  const MetricGraph& y = cover.source.graph;
  const MetricGraph& x = cover.target.graph;

  const Json& vmap = require(doc, "vmap", "");
  if (!vmap.is_object()) field_error("/vmap", "expected an object");
  std::vector<std::optional<VertexIndex>> vertices(y.vertex_count());
  for (const auto& [name, value] : vmap.items()) {
    const std::string at = "/vmap/" + name;
    auto from = y.find_vertex(name);
    if (!from) field_error(at, "unknown source vertex");
    auto to = x.find_vertex(require_string(value, at));
    if (!to) field_error(at, "unknown target vertex '" + value.get<std::string>() + "'");
    vertices[*from] = *to;
  }
  for (VertexIndex v = 0; v < y.vertex_count(); ++v) {
    if (!vertices[v]) field_error("/vmap/" + y.vertex_name(v), "missing entry");
    cover.vertex_map.push_back(*vertices[v]);
  }

  const Json& emap = require(doc, "emap", "");
  if (!emap.is_object()) field_error("/emap", "expected an object");
  std::vector<std::optional<EdgeIndex>> edges(y.unoriented_count());
  for (const auto& [name, value] : emap.items()) {
    const std::string at = "/emap/" + name;
    auto from = y.find_unoriented(name);
    if (!from) field_error(at, "unknown source edge");
    std::string target;
    bool reversed = false;
    if (value.is_object()) {
      target = require_string(require(value, "edge", at), at + "/edge");
      if (auto r = value.find("reversed"); r != value.end()) {
        if (!r->is_boolean()) field_error(at + "/reversed", "expected a boolean");
        reversed = r->get<bool>();
      }
    } else {
      target = require_string(value, at);
    }
    auto to = x.find_unoriented(target);
    if (!to) field_error(at, "unknown target edge '" + target + "'");
    edges[*from] = 2 * *to + (reversed ? 1 : 0);
  }
  cover.edge_map.resize(y.edge_count());
  for (std::size_t j = 0; j < y.unoriented_count(); ++j) {
    if (!edges[j]) field_error("/emap/" + y.unoriented_name(j), "missing entry");
    cover.edge_map[2 * j] = *edges[j];
    cover.edge_map[2 * j + 1] = MetricGraph::reversal(*edges[j]);
  }
  return cover;
}

Json to_json(const MetricGraph& g) {
  Json doc;
  doc["vertices"] = Json::array();
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) doc["vertices"].push_back(g.vertex_name(x));
  doc["edges"] = Json::array();
  for (std::size_t j = 0; j < g.unoriented_count(); ++j) {
    doc["edges"].push_back({{"id", g.unoriented_name(j)},
                            {"u", g.vertex_name(g.origin(2 * j))},
                            {"v", g.vertex_name(g.terminus(2 * j))},
                            {"length", to_string(g.unoriented_lengths()[j])}});
  }
  return doc;
}

Json to_json(const GraphOfGroups& gog) {
  Json doc = to_json(gog.graph);
  if (!gog.has_lengths) {
    for (Json& edge : doc["edges"]) edge.erase("length");
  }
  Json vertex_orders = Json::object();
  for (VertexIndex x = 0; x < gog.graph.vertex_count(); ++x) {
    vertex_orders[gog.graph.vertex_name(x)] = gog.vertex_order[x];
  }
  Json edge_orders = Json::object();
  for (std::size_t j = 0; j < gog.graph.unoriented_count(); ++j) {
    edge_orders[gog.graph.unoriented_name(j)] = gog.edge_order[j];
  }
  doc["groups"] = {{"vertex_orders", vertex_orders}, {"edge_orders", edge_orders}};
  return doc;
}

std::string canonical_text(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace volent
