#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "gxr/bits.hpp"
#include "gxr/fact_index.hpp"
#include "gxr/graph.hpp"

namespace gxr {

/// Ordered priority levels P_1..P_l; P_1 holds the most reliable facts.
struct Prioritization {
  std::vector<std::vector<Fact>> levels;

  /// Throws ParameterMismatch unless the levels partition facts(g) exactly.
  void validate(const DataGraph& g) const {
    if (levels.empty()) throw ParameterMismatch("prioritization needs at least one level");
    std::set<Fact> seen;
    for (const auto& level : levels)
      for (const auto& f : level) {
        if (!g.contains(f)) throw ParameterMismatch("prioritized fact " + to_string(f) + " is not in the graph");
        if (!seen.insert(f).second) throw ParameterMismatch("fact " + to_string(f) + " appears in two levels");
      }
    if (seen.size() != cardinality(g)) {
      for (const auto& f : facts(g))
        if (!seen.contains(f)) throw ParameterMismatch("fact " + to_string(f) + " has no priority level");
    }
  }

  /// The single-level prioritization of all facts.
  static Prioritization trivial(const DataGraph& g) { return {{facts(g)}}; }
};

/// Non-negative weights for labels and data values, with defaults for
/// unmapped keys. Weight zero is allowed.
struct WeightFunction {
  std::map<EdgeLabel, std::uint64_t> label_weights;
  std::map<DataValue, std::uint64_t> data_weights;
  std::uint64_t default_label = 0;
  std::uint64_t default_data = 0;

  std::uint64_t label_weight(const EdgeLabel& l) const {
    auto it = label_weights.find(l);
    return it == label_weights.end() ? default_label : it->second;
  }
  std::uint64_t data_weight(const DataValue& d) const {
    auto it = data_weights.find(d);
    return it == data_weights.end() ? default_data : it->second;
  }

  static WeightFunction uniform(std::uint64_t w) { return {{}, {}, w, w}; }
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw ArithmeticOverflow("graph weight exceeds 64 bits");
  return a + b;
}

}  // namespace detail

/// w(G): data-value weights over nodes plus label weights over edge triples.
inline std::uint64_t graph_weight(const DataGraph& g, const WeightFunction& w) {
  std::uint64_t total = 0;
  for (const auto& [id, data] : g.nodes()) total = detail::checked_add(total, w.data_weight(data));
  for (const auto& [key, ls] : g.edges())
    for (const auto& l : ls) total = detail::checked_add(total, w.label_weight(l));
  return total;
}

/// Strict partial order over label and data-value names, generated by
/// pairs (x, y) meaning x < y and closed transitively at construction.
class LabelOrder {
 public:
  LabelOrder() = default;

  /// Throws OrderCycleError when the closure is not antisymmetric.
  explicit LabelOrder(std::vector<std::pair<std::string, std::string>> generators) : generators_(std::move(generators)) {
    for (const auto& [x, y] : generators_) {
      names_.insert(x);
      names_.insert(y);
    }
    std::vector<std::string> names(names_.begin(), names_.end());
    const std::size_t n = names.size();
    auto pos = [&](const std::string& s) {
      return static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), s) - names.begin());
    };
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (const auto& [x, y] : generators_) lt[pos(x)][pos(y)] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (lt[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (lt[k][j]) lt[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (lt[i][i]) throw OrderCycleError("order has a cycle through '" + names[i] + "'");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (lt[i][j]) closure_.emplace(names[i], names[j]);
  }

  /// x < y in the transitive closure.
  bool less(const std::string& x, const std::string& y) const { return closure_.contains({x, y}); }

  const std::vector<std::pair<std::string, std::string>>& generators() const noexcept { return generators_; }
  bool discrete() const noexcept { return closure_.empty(); }

 private:
  std::vector<std::pair<std::string, std::string>> generators_;
  std::set<std::string> names_;
  std::set<std::pair<std::string, std::string>> closure_;
};

/// G^M: each edge label counted by its edge triples, each data value by
/// the nodes carrying it. Labels and data values are kept apart; the
/// order compares them by name.
struct EdgeDataMultiset {
  std::map<EdgeLabel, std::uint64_t> labels;
  std::map<DataValue, std::uint64_t> data;

  friend bool operator==(const EdgeDataMultiset&, const EdgeDataMultiset&) = default;
};

inline EdgeDataMultiset edge_data_multiset(const DataGraph& g) {
  EdgeDataMultiset m;
  for (const auto& [id, d] : g.nodes()) ++m.data[d];
  for (const auto& [key, ls] : g.edges())
    for (const auto& l : ls) ++m.labels[l];
  return m;
}

/// Dershowitz-Manna: m1 = m2, or every element where m1 exceeds m2 is
/// dominated by a strictly larger element where m2 exceeds m1.
inline bool multiset_leq(const EdgeDataMultiset& m1, const EdgeDataMultiset& m2, const LabelOrder& ord) {
  if (m1 == m2) return true;
  struct Entry {
    const std::string* name;
    std::uint64_t a;
    std::uint64_t b;
  };
  std::vector<Entry> entries;
  auto collect = [&](const std::map<std::string, std::uint64_t>& x, const std::map<std::string, std::uint64_t>& y) {
    std::set<std::string> keys;
    for (const auto& [k, v] : x) keys.insert(k);
    for (const auto& [k, v] : y) keys.insert(k);
    for (const auto& k : keys) {
      auto ia = x.find(k);
      auto ib = y.find(k);
      entries.push_back({ia != x.end() ? &ia->first : &ib->first, ia == x.end() ? 0 : ia->second,
                         ib == y.end() ? 0 : ib->second});
    }
  };
  collect(m1.labels, m2.labels);
  collect(m1.data, m2.data);
  for (const auto& x : entries) {
    if (x.a <= x.b) continue;
    bool covered = std::any_of(entries.begin(), entries.end(),
                               [&](const Entry& y) { return y.a < y.b && ord.less(*x.name, *y.name); });
    if (!covered) return false;
  }
  return true;
}

struct SubsetOrder {};
struct PrioritizedSubsetOrder {
  Prioritization prioritization;
};
struct CardinalityOrder {};
struct PrioritizedCardinalityOrder {
  Prioritization prioritization;
};
struct WeightOrder {
  WeightFunction weights;
};
struct MultisetOrder {
  LabelOrder order;
};

using PreferenceCriterion = std::variant<SubsetOrder, PrioritizedSubsetOrder, CardinalityOrder,
                                         PrioritizedCardinalityOrder, WeightOrder, MultisetOrder>;

/// Command-line name of a criterion.
inline const char* criterion_name(const PreferenceCriterion& c) {
  constexpr const char* kNames[] = {"subset", "prio-subset", "card", "prio-card", "weight", "multiset"};
  return kNames[c.index()];
}

/// Cardinality, prioritized cardinality and weights compare every pair.
inline bool is_total(const PreferenceCriterion& c) {
  return std::holds_alternative<CardinalityOrder>(c) || std::holds_alternative<PrioritizedCardinalityOrder>(c) ||
         std::holds_alternative<WeightOrder>(c);
}

/// Throws ParameterMismatch when the criterion's parameters do not fit g.
inline void validate_criterion(const PreferenceCriterion& c, const DataGraph& g) {
  if (auto* p = std::get_if<PrioritizedSubsetOrder>(&c)) p->prioritization.validate(g);
  if (auto* p = std::get_if<PrioritizedCardinalityOrder>(&c)) p->prioritization.validate(g);
}

enum class Verdict : std::uint8_t { Less, Equivalent, Greater, Incomparable };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Less: return "less";
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Greater: return "greater";
    case Verdict::Incomparable: return "incomparable";
  }
  return "?";
}

/// A criterion resolved against a FactIndex so subsets, given as fact
/// bitsets, compare without touching strings.
class Ranker {
 public:
  using Measure = std::vector<std::uint64_t>;

  /// Every indexed fact must have a priority level (ParameterMismatch
  /// otherwise); prioritized facts outside the index are ignored.
  Ranker(const FactIndex& idx, const PreferenceCriterion& c) : kind_(c.index()) {
    const std::size_t nf = idx.fact_count();
    auto resolve_levels = [&](const Prioritization& p) {
      std::vector<int> level(nf, -1);
      for (std::size_t i = 0; i < p.levels.size(); ++i) {
        level_masks_.emplace_back(nf);
        for (const auto& f : p.levels[i]) {
          if (!idx.graph().contains(f)) continue;
          std::size_t k = idx.fact_position(f);
          if (level[k] >= 0) throw ParameterMismatch("fact " + to_string(f) + " appears in two levels");
          level[k] = static_cast<int>(i);
          level_masks_.back().set(k);
        }
      }
      for (std::size_t k = 0; k < nf; ++k)
        if (level[k] < 0) throw ParameterMismatch("fact " + to_string(idx.fact(k)) + " has no priority level");
    };
    std::visit(
        [&](const auto& crit) {
          using T = std::decay_t<decltype(crit)>;
          if constexpr (std::is_same_v<T, PrioritizedSubsetOrder> || std::is_same_v<T, PrioritizedCardinalityOrder>) {
            resolve_levels(crit.prioritization);
          } else if constexpr (std::is_same_v<T, WeightOrder>) {
            weight_.resize(nf);
            for (std::size_t k = 0; k < nf; ++k)
              weight_[k] = idx.is_node_fact(k) ? crit.weights.data_weight(idx.values()[idx.node_value(k)])
                                               : crit.weights.label_weight(idx.labels()[idx.edges()[k - idx.node_count()].label]);
          } else if constexpr (std::is_same_v<T, MultisetOrder>) {
            const std::size_t nl = idx.labels().size();
            const std::size_t ne = nl + idx.values().size();
            element_.resize(nf);
            for (std::size_t k = 0; k < nf; ++k)
              element_[k] = idx.is_node_fact(k) ? nl + idx.node_value(k) : idx.edges()[k - idx.node_count()].label;
            auto name = [&](std::size_t e) -> const std::string& { return e < nl ? idx.labels()[e] : idx.values()[e - nl]; };
            elements_ = ne;
            above_.assign(ne, {});
            for (std::size_t x = 0; x < ne; ++x)
              for (std::size_t y = 0; y < ne; ++y)
                if (crit.order.less(name(x), name(y))) above_[x].push_back(y);
          }
        },
        c);
  }

  bool total() const noexcept { return kind_ == 2 || kind_ == 3 || kind_ == 4; }

  /// Scalar or lexicographic key for total criteria; larger is preferred.
  Measure measure(const FactSet& s) const {
    switch (kind_) {
      case 2: return {s.count()};
      case 3: {
        Measure m;
        for (const auto& mask : level_masks_) m.push_back((s & mask).count());
        return m;
      }
      case 4: {
        std::uint64_t total = 0;
        s.for_each([&](std::size_t k) { total = detail::checked_add(total, weight_[k]); });
        return {total};
      }
      default: return {};
    }
  }

  Verdict compare(const FactSet& a, const FactSet& b) const {
    switch (kind_) {
      case 0: return compare_sets(a, b);
      case 1:
        for (const auto& mask : level_masks_) {
          auto v = compare_sets(a & mask, b & mask);
          if (v != Verdict::Equivalent) return v;
        }
        return Verdict::Equivalent;
      case 5: {
        auto ca = counts(a);
        auto cb = counts(b);
        bool le = mset_leq(ca, cb);
        bool ge = mset_leq(cb, ca);
        if (le && ge) return Verdict::Equivalent;
        if (le) return Verdict::Less;
        if (ge) return Verdict::Greater;
        return Verdict::Incomparable;
      }
      default: {
        auto ma = measure(a);
        auto mb = measure(b);
        if (ma < mb) return Verdict::Less;
        if (mb < ma) return Verdict::Greater;
        return Verdict::Equivalent;
      }
    }
  }

  /// a strictly below b.
  bool strictly_below(const FactSet& a, const FactSet& b) const { return compare(a, b) == Verdict::Less; }

 private:
  static Verdict compare_sets(const FactSet& a, const FactSet& b) {
    if (a == b) return Verdict::Equivalent;
    if (a.is_subset_of(b)) return Verdict::Less;
    if (b.is_subset_of(a)) return Verdict::Greater;
    return Verdict::Incomparable;
  }

  std::vector<std::uint64_t> counts(const FactSet& s) const {
    std::vector<std::uint64_t> c(elements_, 0);
    s.for_each([&](std::size_t k) { ++c[element_[k]]; });
    return c;
  }

  bool mset_leq(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) const {
    if (a == b) return true;
    for (std::size_t x = 0; x < elements_; ++x) {
      if (a[x] <= b[x]) continue;
      bool covered = std::any_of(above_[x].begin(), above_[x].end(), [&](std::size_t y) { return a[y] < b[y]; });
      if (!covered) return false;
    }
    return true;
  }

  std::size_t kind_;
  std::vector<FactSet> level_masks_;
  std::vector<std::uint64_t> weight_;
  std::vector<std::size_t> element_;
  std::size_t elements_ = 0;
  std::vector<std::vector<std::size_t>> above_;
};

/// Preorder verdict between two subsets of a common ambient graph. Throws
/// ParameterMismatch when a fact is missing from the prioritization or the
/// two graphs disagree on a node's data value.
inline Verdict compare(const PreferenceCriterion& c, const DataGraph& g1, const DataGraph& g2) {
  DataGraph::NodeMap nodes = g1.nodes();
  for (const auto& [id, data] : g2.nodes()) {
    auto [it, fresh] = nodes.emplace(id, data);
    if (!fresh && it->second != data) throw ParameterMismatch("graphs disagree on the data value of '" + id + "'");
  }
  std::set<EdgeFact> edges;
  for (auto& e : g1.edge_facts()) edges.insert(std::move(e));
  for (auto& e : g2.edge_facts()) edges.insert(std::move(e));
  std::vector<EdgeFact> edge_list(edges.begin(), edges.end());
  FactIndex idx(DataGraph(std::move(nodes), edge_list));
  Ranker r(idx, c);
  return r.compare(idx.facts_of(g1), idx.facts_of(g2));
}

/// g1 ≺ g2.
inline bool strictly_better_exists_witness(const PreferenceCriterion& c, const DataGraph& g1, const DataGraph& g2) {
  return compare(c, g1, g2) == Verdict::Less;
}

}  // namespace gxr
