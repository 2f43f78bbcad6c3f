#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gxr/repair.hpp"

namespace gxr {

struct CqaInstance {
  DataGraph graph;
  ConstraintSet constraints;
  PathPtr query;
  NodeId source;
  NodeId target;
  PreferenceCriterion criterion;
};

struct CqaResult {
  bool answer = true;
  /// A preferred repair H with (source, target) outside ⟦query⟧_H.
  std::optional<DataGraph> witness;
  std::size_t repairs = 0;
};

namespace detail {

/// ⟦q⟧ on a subset of the search's ambient graph.
class QueryEval {
 public:
  QueryEval(const FactIndex& idx, const PathExpr& q) : prog_(idx), root_(prog_.add(q)) {}
  bool contains(const FactSet& h, std::size_t u, std::size_t v) const {
    return prog_.path(make_structure(prog_.index(), h), root_).test(u, v);
  }
  BitMatrix relation(const FactSet& h) const { return prog_.path(make_structure(prog_.index(), h), root_); }

 private:
  Program prog_;
  int root_;
};

inline std::pair<std::size_t, std::size_t> require_pair(const FactIndex& idx, const CqaInstance& inst) {
  if (!inst.query) throw ParseError("missing query");
  return {idx.require_node(inst.source), idx.require_node(inst.target)};
}

/// Largest z in [0, hi] with some consistent subset reaching `value(H) >= z`.
/// Every oracle call is a pass over the enumerated consistent subsets.
inline std::uint64_t max_reachable(const std::vector<FactSet>& pool, std::uint64_t hi,
                                   const std::function<bool(const FactSet&)>& admissible,
                                   const std::function<std::uint64_t(const FactSet&)>& value) {
  auto reach = [&](std::uint64_t z) {
    for (const auto& h : pool)
      if (admissible(h) && value(h) >= z) return true;
    return false;
  };
  std::uint64_t lo = 0;  // reach(0) holds: the empty graph is always consistent
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (reach(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace detail

/// Certain answer by enumerating every preferred repair.
inline CqaResult cqa_enumerate_detailed(const CqaInstance& inst, SearchMode mode, SearchConfig cfg = {}) {
  RepairSearch search(inst.graph, inst.constraints, mode, cfg);
  auto [u, v] = detail::require_pair(search.index(), inst);
  detail::QueryEval q(search.index(), *inst.query);
  CqaResult out;
  auto reps = search.preferred(inst.criterion);
  out.repairs = reps.size();
  for (const auto& h : reps)
    if (!q.contains(h, u, v)) {
      out.answer = false;
      out.witness = search.index().to_graph(h);
      break;
    }
  return out;
}

inline bool cqa_enumerate(const CqaInstance& inst, SearchMode mode, SearchConfig cfg = {}) {
  return cqa_enumerate_detailed(inst, mode, cfg).answer;
}

/// Staged algorithm for the cardinality-style criteria: fix the optimal
/// measure with a binary search over "is there a consistent subset at least
/// this good", then ask once for an optimal subset that misses the pair.
inline bool cqa_staged(const CqaInstance& inst, SearchMode mode = SearchMode::FactLattice, SearchConfig cfg = {}) {
  const auto& c = inst.criterion;
  if (!std::holds_alternative<CardinalityOrder>(c) && !std::holds_alternative<WeightOrder>(c) &&
      !std::holds_alternative<PrioritizedCardinalityOrder>(c))
    throw UnsupportedCriterion(std::string("staged CQA supports card, weight and prio-card, not ") + criterion_name(c));
  validate_criterion(c, inst.graph);

  RepairSearch search(inst.graph, inst.constraints, mode, cfg);
  const auto& idx = search.index();
  auto [u, v] = detail::require_pair(idx, inst);
  detail::QueryEval q(idx, *inst.query);
  const auto& pool = search.consistent();
  const std::size_t nf = idx.fact_count();

  // Each stage is a measure together with its required optimum.
  std::vector<std::function<std::uint64_t(const FactSet&)>> stages;
  std::vector<std::uint64_t> bounds;
  if (std::holds_alternative<CardinalityOrder>(c)) {
    stages.emplace_back([](const FactSet& h) { return static_cast<std::uint64_t>(h.count()); });
    bounds.push_back(nf);
  } else if (auto* w = std::get_if<WeightOrder>(&c)) {
    std::vector<std::uint64_t> fw(nf);
    for (std::size_t k = 0; k < nf; ++k)
      fw[k] = idx.is_node_fact(k) ? w->weights.data_weight(idx.values()[idx.node_value(k)])
                                  : w->weights.label_weight(idx.labels()[idx.edges()[k - idx.node_count()].label]);
    stages.emplace_back([fw](const FactSet& h) {
      std::uint64_t s = 0;
      h.for_each([&](std::size_t k) { s = detail::checked_add(s, fw[k]); });
      return s;
    });
    bounds.push_back(graph_weight(inst.graph, w->weights));
  } else {
    const auto& p = std::get<PrioritizedCardinalityOrder>(c).prioritization;
    for (const auto& level : p.levels) {
      FactSet mask(nf);
      for (const auto& f : level)
        if (inst.graph.contains(f)) mask.set(idx.fact_position(f));
      bounds.push_back(mask.count());
      stages.emplace_back([mask](const FactSet& h) { return static_cast<std::uint64_t>((h & mask).count()); });
    }
  }

  std::vector<std::uint64_t> fixed;
  auto admissible = [&](const FactSet& h) {
    for (std::size_t i = 0; i < fixed.size(); ++i)
      if (stages[i](h) != fixed[i]) return false;
    return true;
  };
  for (std::size_t i = 0; i < stages.size(); ++i) fixed.push_back(detail::max_reachable(pool, bounds[i], admissible, stages[i]));

  for (const auto& h : pool)
    if (admissible(h) && !q.contains(h, u, v)) return false;
  return true;
}

/// Every (source, target) answered true by cqa_enumerate, as node ids.
inline std::set<std::pair<NodeId, NodeId>> certain_pairs(const DataGraph& g, const ConstraintSet& r, const PathExpr& query,
                                                         const PreferenceCriterion& c, SearchMode mode, SearchConfig cfg = {}) {
  RepairSearch search(g, r, mode, cfg);
  const auto& idx = search.index();
  detail::QueryEval q(idx, query);
  const std::size_t n = idx.node_count();
  std::optional<BitMatrix> common;
  for (const auto& h : search.preferred(c)) {
    auto rel = q.relation(h);
    if (common)
      *common &= rel;
    else
      common = std::move(rel);
  }
  std::set<std::pair<NodeId, NodeId>> out;
  if (!common) return out;
  for (std::size_t a = 0; a < n; ++a) common->for_each_in_row(a, [&](std::size_t b) { out.emplace(idx.node_ids()[a], idx.node_ids()[b]); });
  return out;
}

/// Node-query extension: nodes in ⟦φ⟧_H for every preferred repair H.
inline std::set<NodeId> certain_nodes(const DataGraph& g, const ConstraintSet& r, const NodeExpr& phi,
                                      const PreferenceCriterion& c, SearchMode mode, SearchConfig cfg = {}) {
  RepairSearch search(g, r, mode, cfg);
  const auto& idx = search.index();
  Program prog(idx);
  int root = prog.add(phi);
  std::optional<BitSet> common;
  for (const auto& h : search.preferred(c)) {
    auto s = prog.node(make_structure(idx, h), root);
    if (common)
      *common &= s;
    else
      common = std::move(s);
  }
  std::set<NodeId> out;
  if (common) common->for_each([&](std::size_t a) { out.insert(idx.node_ids()[a]); });
  return out;
}

}  // namespace gxr
