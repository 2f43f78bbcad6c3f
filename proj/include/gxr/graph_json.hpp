#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gxr/graph.hpp"

namespace gxr {

using Json = nlohmann::ordered_json;

/// {"nodes":[{"id":..,"data":..}],"edges":[{"from":..,"label":..,"to":..}]}
/// with nodes sorted by id and edges by (from, label, to).
inline Json graph_to_json(const DataGraph& g) {
  Json nodes = Json::array();
  for (const auto& [id, data] : g.nodes()) nodes.push_back(Json{{"id", id}, {"data", data}});
  Json edges = Json::array();
  for (const auto& e : g.edge_facts()) edges.push_back(Json{{"from", e.from}, {"label", e.label}, {"to", e.to}});
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline std::string serialize(const DataGraph& g) { return graph_to_json(g).dump() + "\n"; }

namespace detail {

inline const std::string& require_string(const Json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw FormatError(std::string(where) + ": missing string field '" + key + "'");
  return it->get_ref<const std::string&>();
}

}  // namespace detail

inline DataGraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("graph: expected a JSON object");
  auto nodes_it = j.find("nodes");
  auto edges_it = j.find("edges");
  if (nodes_it == j.end() || !nodes_it->is_array()) throw FormatError("graph: missing 'nodes' array");
  if (edges_it != j.end() && !edges_it->is_array()) throw FormatError("graph: 'edges' must be an array");

  try {
    GraphBuilder b;
    for (const auto& n : *nodes_it) {
      if (!n.is_object()) throw FormatError("graph: node entries must be objects");
      b.node(detail::require_string(n, "id", "node"), detail::require_string(n, "data", "node"));
    }
    if (edges_it != j.end())
      for (const auto& e : *edges_it) {
        if (!e.is_object()) throw FormatError("graph: edge entries must be objects");
        b.edge(detail::require_string(e, "from", "edge"), detail::require_string(e, "label", "edge"),
               detail::require_string(e, "to", "edge"));
      }
    return b.build();
  } catch (const InvalidGraph& e) {
    throw FormatError(std::string("graph: ") + e.what());
  }
}

inline DataGraph deserialize(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("graph: invalid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DataGraph load_graph(const std::string& path) { return deserialize(read_text_file(path)); }

}  // namespace gxr
