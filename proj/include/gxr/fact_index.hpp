#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gxr/bits.hpp"
#include "gxr/graph.hpp"

namespace gxr {

/// Subset of an ambient graph's facts, one bit per fact in canonical order.
using FactSet = BitSet;

/// Dense numbering of an ambient graph: nodes by id, labels and data values
/// by string, facts in canonical order (node facts, then edge triples).
/// Subsets of the ambient graph are then plain bitsets.
class FactIndex {
 public:
  struct Edge {
    std::uint32_t from;
    std::uint32_t label;
    std::uint32_t to;
  };

  explicit FactIndex(DataGraph g) : graph_(std::move(g)) {
    for (const auto& [id, data] : graph_.nodes()) {
      ids_.push_back(id);
      values_.push_back(data);
    }
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    for (const auto& [id, data] : graph_.nodes()) node_value_.push_back(static_cast<std::uint32_t>(*value_index(data)));

    for (const auto& [key, ls] : graph_.edges()) labels_.insert(labels_.end(), ls.begin(), ls.end());
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());

    for (const auto& e : graph_.edge_facts())
      edges_.push_back({static_cast<std::uint32_t>(*node_index(e.from)), static_cast<std::uint32_t>(*label_index(e.label)),
                        static_cast<std::uint32_t>(*node_index(e.to))});

    full_.assign(labels_.size(), BitMatrix(ids_.size()));
    incident_.assign(ids_.size(), {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      full_[e.label].set(e.from, e.to);
      incident_[e.from].push_back(k);
      if (e.to != e.from) incident_[e.to].push_back(k);
    }
  }

  const DataGraph& graph() const noexcept { return graph_; }

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t fact_count() const noexcept { return ids_.size() + edges_.size(); }

  const std::vector<NodeId>& node_ids() const noexcept { return ids_; }
  const std::vector<EdgeLabel>& labels() const noexcept { return labels_; }
  const std::vector<DataValue>& values() const noexcept { return values_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::uint32_t node_value(std::size_t node) const noexcept { return node_value_[node]; }

  std::optional<std::size_t> node_index(std::string_view id) const { return find(ids_, id); }
  std::optional<std::size_t> label_index(std::string_view l) const { return find(labels_, l); }
  std::optional<std::size_t> value_index(std::string_view v) const { return find(values_, v); }

  std::size_t require_node(std::string_view id) const {
    auto i = node_index(id);
    if (!i) throw UnknownNode("unknown node '" + std::string(id) + "'");
    return *i;
  }

  /// Full relation of label `l` in the ambient graph.
  const BitMatrix& label_relation(std::size_t l) const noexcept { return full_[l]; }

  /// Edge fact positions (offsets into edges()) incident to a node.
  const std::vector<std::size_t>& incident_edges(std::size_t node) const noexcept { return incident_[node]; }

  bool is_node_fact(std::size_t k) const noexcept { return k < ids_.size(); }
  std::size_t edge_fact(std::size_t edge) const noexcept { return ids_.size() + edge; }

  Fact fact(std::size_t k) const {
    if (k < ids_.size()) return NodeFact{ids_[k]};
    const auto& e = edges_[k - ids_.size()];
    return EdgeFact{ids_[e.from], labels_[e.label], ids_[e.to]};
  }

  std::size_t fact_position(const Fact& f) const {
    if (auto* n = std::get_if<NodeFact>(&f)) {
      if (auto i = node_index(n->id)) return *i;
    } else {
      const auto& e = std::get<EdgeFact>(f);
      auto from = node_index(e.from);
      auto to = node_index(e.to);
      auto l = label_index(e.label);
      if (from && to && l) {
        Edge key{static_cast<std::uint32_t>(*from), static_cast<std::uint32_t>(*l), static_cast<std::uint32_t>(*to)};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key, edge_less);
        if (it != edges_.end() && !edge_less(key, *it)) return ids_.size() + static_cast<std::size_t>(it - edges_.begin());
      }
    }
    throw UnknownFact("fact " + to_string(f) + " is not in the graph");
  }

  FactSet all_facts() const { return FactSet::full(fact_count()); }
  FactSet no_facts() const { return FactSet(fact_count()); }

  /// Throws UnknownFact unless `sub` is a subset of the ambient graph.
  FactSet facts_of(const DataGraph& sub) const {
    FactSet s(fact_count());
    for (const auto& [id, data] : sub.nodes()) {
      auto i = node_index(id);
      if (!i || values_[node_value_[*i]] != data) throw UnknownFact("node " + id + " is not in the graph");
      s.set(*i);
    }
    for (const auto& e : sub.edge_facts()) s.set(fact_position(e));
    return s;
  }

  /// Node bits of a fact set.
  BitSet nodes_of(const FactSet& s) const {
    BitSet n(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (s.test(i)) n.set(i);
    return n;
  }

  /// The node set plus every edge between its members.
  FactSet induced_facts(const BitSet& nodes) const {
    FactSet s(fact_count());
    nodes.for_each([&](std::size_t i) { s.set(i); });
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (nodes.test(edges_[k].from) && nodes.test(edges_[k].to)) s.set(ids_.size() + k);
    return s;
  }

  /// True iff every retained edge has both endpoints retained.
  bool well_formed(const FactSet& s) const {
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (s.test(ids_.size() + k) && (!s.test(edges_[k].from) || !s.test(edges_[k].to))) return false;
    return true;
  }

  DataGraph to_graph(const FactSet& s) const {
    DataGraph::NodeMap nodes;
    std::vector<EdgeFact> es;
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (s.test(i)) nodes.emplace(ids_[i], values_[node_value_[i]]);
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (s.test(ids_.size() + k)) es.push_back({ids_[edges_[k].from], labels_[edges_[k].label], ids_[edges_[k].to]});
    return DataGraph(std::move(nodes), es);
  }

 private:
  static bool edge_less(const Edge& a, const Edge& b) noexcept {
    if (a.from != b.from) return a.from < b.from;
    if (a.label != b.label) return a.label < b.label;
    return a.to < b.to;
  }

  template <class V>
  static std::optional<std::size_t> find(const V& sorted, std::string_view key) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), key, [](const auto& a, std::string_view b) { return a < b; });
    if (it == sorted.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
  }

  DataGraph graph_;
  std::vector<NodeId> ids_;
  std::vector<DataValue> values_;
  std::vector<std::uint32_t> node_value_;
  std::vector<EdgeLabel> labels_;
  std::vector<Edge> edges_;
  std::vector<BitMatrix> full_;
  std::vector<std::vector<std::size_t>> incident_;
};

}  // namespace gxr
