#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "gxr/constraints.hpp"
#include "gxr/eval.hpp"
#include "gxr/fact_index.hpp"
#include "gxr/preferences.hpp"

namespace gxr {

enum class SearchMode : std::uint8_t {
  FactLattice,  // every well-formed fact subset
  NodeInduced,  // induced subgraphs only; needs edge-monotone constraints
};

inline const char* to_string(SearchMode m) noexcept { return m == SearchMode::FactLattice ? "facts" : "node-induced"; }

struct SearchConfig {
  std::size_t max_facts = 24;
  std::size_t max_nodes = 22;
  /// Worker threads for enumeration; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Unique maximal consistent subset for node-positive constraint sets:
/// repeatedly drop every node violating some constraint (with its incident
/// edges) until nothing is violated. Throws FragmentError otherwise.
inline DataGraph repair_node_pos(const DataGraph& g, const ConstraintSet& r, std::size_t* rounds = nullptr) {
  if (classify(r) != Fragment::NodePos)
    throw FragmentError(std::string("repair_node_pos needs node-positive constraints, got ") + to_string(classify(r)));
  FactIndex idx(g);
  Program prog(idx);
  std::vector<int> roots;
  for (const auto& n : r.node_constraints) roots.push_back(prog.add(*n));
  BitSet alive = BitSet::full(idx.node_count());
  std::size_t count = 0;
  while (true) {
    auto st = make_induced_structure(idx, alive);
    BitSet bad(idx.node_count());
    for (int root : roots) {
      BitSet viol = alive;
      viol.subtract(prog.node(st, root));
      bad |= viol;
    }
    if (bad.none()) break;
    alive.subtract(bad);
    ++count;
  }
  if (rounds) *rounds = count;
  return idx.to_graph(idx.induced_facts(alive));
}

/// Exhaustive repair search over one ambient graph and constraint set.
/// All consistent subsets are enumerated once at construction; every
/// query afterwards works on that list.
class RepairSearch {
 public:
  RepairSearch(const DataGraph& g, const ConstraintSet& r, SearchMode mode, SearchConfig cfg = {})
      : index_(g), constraints_(index_, r), mode_(mode), monotone_(is_edge_monotone(r)) {
    if (mode == SearchMode::NodeInduced) {
      if (!monotone_)
        throw ModeUnsound("node-induced search needs edge-monotone constraints (no complement or negation)");
      if (index_.node_count() > cfg.max_nodes || index_.node_count() >= 63)
        throw InstanceTooLarge("graph has " + std::to_string(index_.node_count()) + " nodes; node-induced cap is " +
                               std::to_string(cfg.max_nodes));
    } else if (index_.fact_count() > cfg.max_facts || index_.node_count() >= 63) {
      throw InstanceTooLarge("graph has " + std::to_string(index_.fact_count()) + " facts; fact-lattice cap is " +
                             std::to_string(cfg.max_facts));
    }
    enumerate(cfg.threads);
  }

  const FactIndex& index() const noexcept { return index_; }
  const CompiledConstraints& constraints() const noexcept { return constraints_; }
  SearchMode mode() const noexcept { return mode_; }

  /// Consistent subsets, greatest indicator string first.
  const std::vector<FactSet>& consistent() const noexcept { return consistent_; }

  bool is_consistent(const FactSet& s) const { return constraints_.holds(s); }

  /// The preferred repairs under `c`, greatest indicator string first.
  std::vector<FactSet> preferred(const PreferenceCriterion& c) const {
    validate_criterion(c, index_.graph());
    Ranker rank(index_, c);
    if (rank.total()) {
      std::vector<Ranker::Measure> ms;
      ms.reserve(consistent_.size());
      for (const auto& s : consistent_) ms.push_back(rank.measure(s));
      auto best = *std::max_element(ms.begin(), ms.end());
      std::vector<FactSet> out;
      for (std::size_t i = 0; i < consistent_.size(); ++i)
        if (ms[i] == best) out.push_back(consistent_[i]);
      return out;
    }
    // Partial criteria: strict inclusion implies strict preference, so the
    // preferred repairs are the undominated inclusion-maximal subsets.
    auto maximal = inclusion_maximal();
    std::vector<FactSet> out;
    for (const auto& m : maximal) {
      bool dominated = std::any_of(maximal.begin(), maximal.end(), [&](const FactSet& n) { return rank.strictly_below(m, n); });
      if (!dominated) out.push_back(m);
    }
    return out;
  }

  /// Literal reading of the repair definition, quadratic in the number of
  /// consistent subsets. Used as an independent check of preferred().
  std::vector<FactSet> preferred_by_definition(const PreferenceCriterion& c) const {
    validate_criterion(c, index_.graph());
    Ranker rank(index_, c);
    std::vector<FactSet> out;
    for (const auto& m : consistent_) {
      bool dominated =
          std::any_of(consistent_.begin(), consistent_.end(), [&](const FactSet& n) { return rank.strictly_below(m, n); });
      if (!dominated) out.push_back(m);
    }
    return out;
  }

  /// g' is consistent, inside the ambient graph and undominated.
  bool is_preferred(const FactSet& s, const PreferenceCriterion& c) const {
    validate_criterion(c, index_.graph());
    if (!index_.well_formed(s) || !constraints_.holds(s)) return false;
    Ranker rank(index_, c);
    return std::none_of(consistent_.begin(), consistent_.end(), [&](const FactSet& n) { return rank.strictly_below(s, n); });
  }

 private:
  std::vector<FactSet> inclusion_maximal() const {
    std::vector<std::size_t> order(consistent_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::size_t> sizes(consistent_.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = consistent_[i].count();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    std::vector<FactSet> maximal;
    for (std::size_t i : order) {
      const auto& s = consistent_[i];
      if (std::none_of(maximal.begin(), maximal.end(), [&](const FactSet& m) { return s.is_subset_of(m); }))
        maximal.push_back(s);
    }
    std::sort(maximal.begin(), maximal.end(), [](const FactSet& a, const FactSet& b) { return indicator_order(a, b) > 0; });
    return maximal;
  }

  void enumerate(unsigned threads) {
    const std::size_t n = index_.node_count();
    const std::uint64_t total = std::uint64_t{1} << n;
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    if (total < 256) threads = 1;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));

    std::atomic<std::uint64_t> next{0};
    std::vector<std::vector<FactSet>> found(threads);
    auto worker = [&](unsigned t) {
      constexpr std::uint64_t kChunk = 64;
      while (true) {
        std::uint64_t start = next.fetch_add(kChunk);
        if (start >= total) return;
        std::uint64_t stop = std::min(total, start + kChunk);
        for (std::uint64_t mask = start; mask < stop; ++mask) visit_node_set(mask, found[t]);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    for (auto& part : found)
      for (auto& s : part) consistent_.push_back(std::move(s));
    std::sort(consistent_.begin(), consistent_.end(), [](const FactSet& a, const FactSet& b) { return indicator_order(a, b) > 0; });
  }

  void visit_node_set(std::uint64_t mask, std::vector<FactSet>& out) const {
    const std::size_t n = index_.node_count();
    BitSet nodes(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) nodes.set(i);
    FactSet all_induced = index_.induced_facts(nodes);

    if (mode_ == SearchMode::NodeInduced) {
      if (constraints_.holds(make_induced_structure(index_, nodes))) out.push_back(std::move(all_induced));
      return;
    }

    std::vector<std::size_t> edges;
    for (std::size_t k = n; k < index_.fact_count(); ++k)
      if (all_induced.test(k)) edges.push_back(k);
    FactSet base(index_.fact_count());
    nodes.for_each([&](std::size_t i) { base.set(i); });

    if (monotone_) {
      // With the node set fixed, consistency only improves as edges are
      // added, so a branch whose largest completion fails is dead.
      std::function<void(std::size_t, FactSet&, bool)> dfs = [&](std::size_t i, FactSet& chosen, bool need_check) {
        if (need_check) {
          FactSet ext = chosen;
          for (std::size_t j = i; j < edges.size(); ++j) ext.set(edges[j]);
          if (!constraints_.holds(ext)) return;
        }
        if (i == edges.size()) {
          out.push_back(chosen);
          return;
        }
        chosen.set(edges[i]);
        dfs(i + 1, chosen, false);
        chosen.reset(edges[i]);
        dfs(i + 1, chosen, true);
      };
      dfs(0, base, true);
      return;
    }

    const std::uint64_t combos = std::uint64_t{1} << edges.size();
    for (std::uint64_t em = 0; em < combos; ++em) {
      FactSet s = base;
      for (std::size_t j = 0; j < edges.size(); ++j)
        if ((em >> j) & 1U) s.set(edges[j]);
      if (constraints_.holds(s)) out.push_back(std::move(s));
    }
  }

  FactIndex index_;
  CompiledConstraints constraints_;
  SearchMode mode_;
  bool monotone_;
  std::vector<FactSet> consistent_;
};

/// Every consistent subset (FactLattice) or consistent induced subgraph
/// (NodeInduced), greatest indicator string first.
inline std::vector<DataGraph> consistent_subsets(const DataGraph& g, const ConstraintSet& r, SearchMode mode,
                                                 SearchConfig cfg = {}) {
  RepairSearch search(g, r, mode, cfg);
  std::vector<DataGraph> out;
  for (const auto& s : search.consistent()) out.push_back(search.index().to_graph(s));
  return out;
}

struct RepairAnswer {
  std::vector<DataGraph> repairs;
  PreferenceCriterion criterion;
};

inline RepairAnswer preferred_repairs(const DataGraph& g, const ConstraintSet& r, const PreferenceCriterion& c,
                                      SearchMode mode, SearchConfig cfg = {}) {
  RepairSearch search(g, r, mode, cfg);
  RepairAnswer ans{{}, c};
  for (const auto& s : search.preferred(c)) ans.repairs.push_back(search.index().to_graph(s));
  return ans;
}

/// g' is a preferred repair of g.
inline bool repair_check(const DataGraph& g, const DataGraph& candidate, const ConstraintSet& r,
                         const PreferenceCriterion& c, SearchMode mode, SearchConfig cfg = {}) {
  if (!is_subset(candidate, g)) return false;
  RepairSearch search(g, r, mode, cfg);
  return search.is_preferred(search.index().facts_of(candidate), c);
}

/// Some preferred repair is non-empty.
inline bool repair_exists(const DataGraph& g, const ConstraintSet& r, const PreferenceCriterion& c, SearchMode mode,
                          SearchConfig cfg = {}) {
  RepairSearch search(g, r, mode, cfg);
  auto reps = search.preferred(c);
  return std::any_of(reps.begin(), reps.end(), [](const FactSet& s) { return s.any(); });
}

namespace detail {

/// The polynomial algorithm is exact whenever strict inclusion implies
/// strict preference, which fails only for weights that vanish on a fact.
inline bool node_pos_shortcut_applies(const DataGraph& g, const ConstraintSet& r, const PreferenceCriterion& c) {
  if (classify(r) != Fragment::NodePos) return false;
  if (auto* w = std::get_if<WeightOrder>(&c)) {
    for (const auto& [id, d] : g.nodes())
      if (w->weights.data_weight(d) == 0) return false;
    for (const auto& [key, ls] : g.edges())
      for (const auto& l : ls)
        if (w->weights.label_weight(l) == 0) return false;
  }
  return true;
}

}  // namespace detail

/// Deterministic preferred repair: the one with the greatest indicator
/// string. Node-positive constraint sets use the polynomial algorithm.
inline DataGraph repair_compute(const DataGraph& g, const ConstraintSet& r, const PreferenceCriterion& c,
                                SearchMode mode, SearchConfig cfg = {}) {
  if (detail::node_pos_shortcut_applies(g, r, c)) {
    validate_criterion(c, g);
    return repair_node_pos(g, r);
  }
  RepairSearch search(g, r, mode, cfg);
  return search.index().to_graph(search.preferred(c).front());
}

}  // namespace gxr
