#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gxr/error.hpp"

namespace gxr {

using NodeId = std::string;
using DataValue = std::string;
using EdgeLabel = std::string;

/// True iff `s` matches [A-Za-z_][A-Za-z0-9_]*.
inline bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

struct NodeFact {
  NodeId id;
  auto operator<=>(const NodeFact&) const = default;
};

struct EdgeFact {
  NodeId from;
  EdgeLabel label;
  NodeId to;
  auto operator<=>(const EdgeFact&) const = default;
};

/// A node or a single labelled edge triple. The variant ordering puts every
/// node fact before every edge fact, which is the canonical fact order.
using Fact = std::variant<NodeFact, EdgeFact>;

inline std::string to_string(const Fact& f) {
  if (auto* n = std::get_if<NodeFact>(&f)) return "node:" + n->id;
  const auto& e = std::get<EdgeFact>(f);
  return "edge:" + e.from + ":" + e.label + ":" + e.to;
}

/// Finite directed graph with a label set per ordered node pair and one data
/// value per node. Immutable once built; use GraphBuilder or the
/// validating constructor.
class DataGraph {
 public:
  using NodeMap = std::map<NodeId, DataValue>;
  using EdgeMap = std::map<std::pair<NodeId, NodeId>, std::set<EdgeLabel>>;

  DataGraph() = default;

  /// Throws InvalidGraph on a dangling endpoint, a bad identifier or a
  /// duplicate triple.
  DataGraph(NodeMap nodes, std::span<const EdgeFact> edges) : nodes_(std::move(nodes)) {
    for (const auto& [id, data] : nodes_)
      if (!is_identifier(id)) throw InvalidGraph("invalid node id '" + id + "'");
    for (const auto& e : edges) {
      if (!nodes_.contains(e.from) || !nodes_.contains(e.to))
        throw InvalidGraph("edge " + to_string(Fact{e}) + " has an endpoint outside the node set");
      if (!is_identifier(e.label)) throw InvalidGraph("invalid edge label '" + e.label + "'");
      if (!edges_[{e.from, e.to}].insert(e.label).second)
        throw InvalidGraph("duplicate edge " + to_string(Fact{e}));
      ++edge_count_;
    }
  }

  const NodeMap& nodes() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return nodes_.empty(); }

  bool has_node(std::string_view id) const { return nodes_.find(NodeId(id)) != nodes_.end(); }

  const DataValue& data(const NodeId& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw UnknownNode("unknown node '" + id + "'");
    return it->second;
  }

  /// L(from, to); empty when no edge exists.
  const std::set<EdgeLabel>& labels(const NodeId& from, const NodeId& to) const {
    static const std::set<EdgeLabel> kEmpty;
    auto it = edges_.find({from, to});
    return it == edges_.end() ? kEmpty : it->second;
  }

  bool has_edge(const EdgeFact& e) const { return labels(e.from, e.to).contains(e.label); }

  bool contains(const Fact& f) const {
    if (auto* n = std::get_if<NodeFact>(&f)) return nodes_.contains(n->id);
    return has_edge(std::get<EdgeFact>(f));
  }

  /// Edge triples sorted by (from, label, to).
  std::vector<EdgeFact> edge_facts() const {
    std::vector<EdgeFact> out;
    out.reserve(edge_count_);
    for (const auto& [key, ls] : edges_)
      for (const auto& l : ls) out.push_back({key.first, l, key.second});
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const DataGraph& a, const DataGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend class GraphBuilder;

  NodeMap nodes_;
  EdgeMap edges_;
  std::size_t edge_count_ = 0;
};

/// Incremental construction with the same validation as DataGraph.
class GraphBuilder {
 public:
  GraphBuilder& node(NodeId id, DataValue data) {
    if (!is_identifier(id)) throw InvalidGraph("invalid node id '" + id + "'");
    if (!nodes_.emplace(id, std::move(data)).second) throw InvalidGraph("duplicate node '" + id + "'");
    return *this;
  }
  GraphBuilder& edge(NodeId from, EdgeLabel label, NodeId to) {
    edges_.push_back({std::move(from), std::move(label), std::move(to)});
    return *this;
  }
  DataGraph build() const { return DataGraph(nodes_, edges_); }

 private:
  DataGraph::NodeMap nodes_;
  std::vector<EdgeFact> edges_;
};

/// |V| + |E| counting each (from, label, to) triple once.
inline std::size_t cardinality(const DataGraph& g) noexcept { return g.node_count() + g.edge_count(); }

/// Node facts then edge facts, in canonical order.
inline std::vector<Fact> facts(const DataGraph& g) {
  std::vector<Fact> out;
  out.reserve(cardinality(g));
  for (const auto& [id, data] : g.nodes()) out.emplace_back(NodeFact{id});
  for (auto& e : g.edge_facts()) out.emplace_back(std::move(e));
  return out;
}

inline bool is_subset(const DataGraph& g1, const DataGraph& g2) {
  for (const auto& [id, data] : g1.nodes()) {
    auto it = g2.nodes().find(id);
    if (it == g2.nodes().end() || it->second != data) return false;
  }
  for (const auto& [key, ls] : g1.edges()) {
    const auto& other = g2.labels(key.first, key.second);
    if (!std::includes(other.begin(), other.end(), ls.begin(), ls.end())) return false;
  }
  return true;
}

/// Removes the listed facts; a removed node takes its incident edges along.
inline DataGraph delete_facts(const DataGraph& g, std::span<const Fact> fs) {
  std::set<NodeId> dead_nodes;
  std::set<EdgeFact> dead_edges;
  for (const auto& f : fs) {
    if (!g.contains(f)) throw UnknownFact("fact " + to_string(f) + " is not in the graph");
    if (auto* n = std::get_if<NodeFact>(&f))
      dead_nodes.insert(n->id);
    else
      dead_edges.insert(std::get<EdgeFact>(f));
  }
  DataGraph::NodeMap nodes;
  for (const auto& [id, data] : g.nodes())
    if (!dead_nodes.contains(id)) nodes.emplace(id, data);
  std::vector<EdgeFact> edges;
  for (auto& e : g.edge_facts())
    if (!dead_nodes.contains(e.from) && !dead_nodes.contains(e.to) && !dead_edges.contains(e))
      edges.push_back(std::move(e));
  return DataGraph(std::move(nodes), edges);
}

inline DataGraph induced(const DataGraph& g, const std::set<NodeId>& keep) {
  DataGraph::NodeMap nodes;
  for (const auto& id : keep) nodes.emplace(id, g.data(id));
  std::vector<EdgeFact> edges;
  for (auto& e : g.edge_facts())
    if (keep.contains(e.from) && keep.contains(e.to)) edges.push_back(std::move(e));
  return DataGraph(std::move(nodes), edges);
}

/// Builds the subgraph made of exactly the given facts. Throws UnknownFact
/// for facts outside g and InvalidGraph when an edge lacks an endpoint.
inline DataGraph subgraph_from_facts(const DataGraph& g, std::span<const Fact> fs) {
  DataGraph::NodeMap nodes;
  std::vector<EdgeFact> edges;
  for (const auto& f : fs) {
    if (!g.contains(f)) throw UnknownFact("fact " + to_string(f) + " is not in the graph");
    if (auto* n = std::get_if<NodeFact>(&f))
      nodes.emplace(n->id, g.data(n->id));
    else
      edges.push_back(std::get<EdgeFact>(f));
  }
  return DataGraph(std::move(nodes), edges);
}

}  // namespace gxr
