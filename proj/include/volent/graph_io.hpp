#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "volent/errors.hpp"
#include "volent/gog.hpp"
#include "volent/metric_graph.hpp"

// Graph documents are JSON:
//
//   {
//     "vertices": ["a", "b"],
//     "edges": [{"id": "e1", "u": "a", "v": "b", "length": "1/3"}, ...],
//     "groups": {"vertex_orders": {"a": 3}, "edge_orders": {"e1": 1}}
//   }
//
// Lengths are strings "p/q" or integers; "groups" is optional and missing
// orders default to 1. A covering document holds "source" and "target" graph
// documents plus "vmap" (source vertex -> target vertex) and "emap" (source
// edge id -> target edge id, or {"edge": id, "reversed": bool}).

namespace volent {

/// Malformed document; the message names the offending field as a JSON pointer
/// or the line and column of a syntax error.
class DocumentError : public InvalidGraph {
 public:
  using InvalidGraph::InvalidGraph;
};

using Json = nlohmann::json;

/// Parses text, reporting syntax errors with line and column.
Json parse_document(const std::string& text);
/// Reads and parses a file. Throws std::runtime_error if it cannot be opened.
Json load_document(const std::filesystem::path& path);

/// Requires every edge to carry a length.
MetricGraph graph_from_json(const Json& doc);
/// Lengths may be absent on every edge (placeholder unit lengths, has_lengths
/// false) or present on every edge.
GraphOfGroups gog_from_json(const Json& doc);
CoveringMap covering_from_json(const Json& doc);

Json to_json(const MetricGraph& g);
Json to_json(const GraphOfGroups& gog);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_text(const Json& doc);

}  // namespace volent
