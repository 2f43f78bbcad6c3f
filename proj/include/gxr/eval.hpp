#pragma once

#include <cstdint>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "gxr/ast.hpp"
#include "gxr/bits.hpp"
#include "gxr/constraints.hpp"
#include "gxr/fact_index.hpp"

namespace gxr {

/// A subgraph of an indexed ambient graph, ready for evaluation: the
/// retained nodes and one relation per ambient label.
struct Structure {
  const FactIndex* index = nullptr;
  BitSet universe;
  std::vector<BitMatrix> rel;
};

inline Structure make_structure(const FactIndex& idx, const FactSet& s) {
  Structure st{&idx, idx.nodes_of(s), std::vector<BitMatrix>(idx.labels().size(), BitMatrix(idx.node_count()))};
  const auto n = idx.node_count();
  for (std::size_t k = 0; k < idx.edge_count(); ++k)
    if (s.test(n + k)) {
      const auto& e = idx.edges()[k];
      st.rel[e.label].set(e.from, e.to);
    }
  return st;
}

/// Induced subgraph on `nodes`.
inline Structure make_induced_structure(const FactIndex& idx, const BitSet& nodes) {
  Structure st{&idx, nodes, {}};
  st.rel.reserve(idx.labels().size());
  for (std::size_t l = 0; l < idx.labels().size(); ++l) {
    st.rel.push_back(idx.label_relation(l));
    st.rel.back().restrict_to(nodes);
  }
  return st;
}

/// Expressions compiled against a FactIndex: labels and data constants are
/// resolved to dense ids once, so evaluation over many subgraphs does no
/// string work. Evaluation is const and may run concurrently.
class Program {
 public:
  explicit Program(const FactIndex& idx) : idx_(&idx) {}

  int add(const PathExpr& e) {
    CPath c{.kind = e.kind, .lo = e.min, .hi = e.max};
    switch (e.kind) {
      case PathKind::Forward:
      case PathKind::Backward: c.sym = lookup(idx_->label_index(e.label)); break;
      case PathKind::NodeTest: c.test = add(*e.test); break;
      case PathKind::Concat:
      case PathKind::Union:
      case PathKind::Intersect:
        c.a = add(*e.lhs);
        c.b = add(*e.rhs);
        break;
      case PathKind::Star:
      case PathKind::Complement:
      case PathKind::Repeat: c.a = add(*e.lhs); break;
      default: break;
    }
    paths_.push_back(c);
    return static_cast<int>(paths_.size() - 1);
  }

  int add(const NodeExpr& e) {
    CNode c{.kind = e.kind};
    switch (e.kind) {
      case NodeKind::Not: c.a = add(*e.lhs); break;
      case NodeKind::And:
      case NodeKind::Or:
        c.a = add(*e.lhs);
        c.b = add(*e.rhs);
        break;
      case NodeKind::DataEq:
      case NodeKind::DataNeq: c.sym = lookup(idx_->value_index(e.value)); break;
      case NodeKind::HasPath: c.a = add(*e.path); break;
      case NodeKind::EqTest:
      case NodeKind::NeqTest:
        c.a = add(*e.path);
        c.b = add(*e.other);
        break;
    }
    nodes_.push_back(c);
    return static_cast<int>(nodes_.size() - 1);
  }

  const FactIndex& index() const noexcept { return *idx_; }

  BitMatrix path(const Structure& st, int id) const {
    const CPath& c = paths_[static_cast<std::size_t>(id)];
    const std::size_t n = st.universe.size();
    switch (c.kind) {
      case PathKind::Epsilon: return BitMatrix::identity(st.universe);
      case PathKind::Wildcard: {
        BitMatrix m(n);
        for (const auto& r : st.rel) m |= r;
        return m;
      }
      case PathKind::Forward: return c.sym < 0 ? BitMatrix(n) : st.rel[static_cast<std::size_t>(c.sym)];
      case PathKind::Backward: return c.sym < 0 ? BitMatrix(n) : st.rel[static_cast<std::size_t>(c.sym)].transposed();
      case PathKind::NodeTest: {
        BitMatrix m(n);
        node(st, c.test).for_each([&](std::size_t i) { m.set(i, i); });
        return m;
      }
      case PathKind::Concat: return compose(path(st, c.a), path(st, c.b));
      case PathKind::Union: {
        auto m = path(st, c.a);
        m |= path(st, c.b);
        return m;
      }
      case PathKind::Intersect: {
        auto m = path(st, c.a);
        m &= path(st, c.b);
        return m;
      }
      case PathKind::Star: {
        auto m = path(st, c.a);
        m |= BitMatrix::identity(st.universe);
        return closure(std::move(m));
      }
      case PathKind::Complement: return path(st, c.a).complement_within(st.universe);
      case PathKind::Repeat: {
        auto base = path(st, c.a);
        auto head = power(base, c.lo, st.universe);
        base |= BitMatrix::identity(st.universe);
        return compose(head, power(base, c.hi - c.lo, st.universe));
      }
    }
    return BitMatrix(n);
  }

  BitSet node(const Structure& st, int id) const {
    const CNode& c = nodes_[static_cast<std::size_t>(id)];
    const std::size_t n = st.universe.size();
    switch (c.kind) {
      case NodeKind::Not: {
        BitSet s = st.universe;
        return s.subtract(node(st, c.a));
      }
      case NodeKind::And: return node(st, c.a) & node(st, c.b);
      case NodeKind::Or: return node(st, c.a) | node(st, c.b);
      case NodeKind::DataEq:
      case NodeKind::DataNeq: {
        BitSet s(n);
        bool want_eq = c.kind == NodeKind::DataEq;
        st.universe.for_each([&](std::size_t i) {
          bool eq = c.sym >= 0 && idx_->node_value(i) == static_cast<std::uint32_t>(c.sym);
          if (eq == want_eq) s.set(i);
        });
        return s;
      }
      case NodeKind::HasPath: {
        auto d = path(st, c.a).domain();
        return d &= st.universe;
      }
      case NodeKind::EqTest:
      case NodeKind::NeqTest: {
        auto ma = path(st, c.a);
        auto mb = path(st, c.b);
        const std::size_t k = idx_->values().size();
        BitSet s(n);
        st.universe.for_each([&](std::size_t u) {
          BitSet va(k), vb(k);
          ma.for_each_in_row(u, [&](std::size_t v) { va.set(idx_->node_value(v)); });
          mb.for_each_in_row(u, [&](std::size_t v) { vb.set(idx_->node_value(v)); });
          bool hit = c.kind == NodeKind::EqTest ? va.intersects(vb) : (va.any() && vb.any() && (va | vb).count() >= 2);
          if (hit) s.set(u);
        });
        return s;
      }
    }
    return BitSet(n);
  }

 private:
  struct CPath {
    PathKind kind;
    int sym = -1;
    int a = -1;
    int b = -1;
    int test = -1;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
  };
  struct CNode {
    NodeKind kind;
    int sym = -1;
    int a = -1;
    int b = -1;
  };

  static int lookup(std::optional<std::size_t> i) { return i ? static_cast<int>(*i) : -1; }

  /// Reflexive input: square until stable.
  static BitMatrix closure(BitMatrix m) {
    while (true) {
      auto next = compose(m, m);
      if (next == m) return m;
      m = std::move(next);
    }
  }

  static BitMatrix power(BitMatrix base, std::uint32_t e, const BitSet& universe) {
    BitMatrix result = BitMatrix::identity(universe);
    while (e) {
      if (e & 1U) result = compose(result, base);
      e >>= 1;
      if (!e) break;
      auto sq = compose(base, base);
      // An idempotent base makes every remaining factor equal to base.
      if (sq == base) return compose(result, base);
      base = std::move(sq);
    }
    return result;
  }

  const FactIndex* idx_;
  std::vector<CPath> paths_;
  std::vector<CNode> nodes_;
};

struct ConsistencyReport {
  bool consistent = true;
  /// (constraint index within node_constraints, violating node)
  std::vector<std::pair<std::size_t, NodeId>> node_violations;
  /// (constraint index within path_constraints, source, target) of unrelated pairs
  std::vector<std::tuple<std::size_t, NodeId, NodeId>> pair_violations;
};

/// A constraint set compiled against one ambient graph.
class CompiledConstraints {
 public:
  CompiledConstraints(const FactIndex& idx, const ConstraintSet& r) : program_(idx) {
    for (const auto& p : r.path_constraints) path_roots_.push_back(program_.add(*p));
    for (const auto& n : r.node_constraints) node_roots_.push_back(program_.add(*n));
  }

  const Program& program() const noexcept { return program_; }
  const FactIndex& index() const noexcept { return program_.index(); }

  bool holds(const Structure& st) const {
    for (int r : node_roots_)
      if (!st.universe.is_subset_of(program_.node(st, r))) return false;
    for (int r : path_roots_)
      if (!program_.path(st, r).covers(st.universe)) return false;
    return true;
  }

  bool holds(const FactSet& s) const { return holds(make_structure(index(), s)); }

  ConsistencyReport report(const Structure& st) const {
    ConsistencyReport out;
    const auto& ids = index().node_ids();
    for (std::size_t k = 0; k < node_roots_.size(); ++k) {
      auto sat = program_.node(st, node_roots_[k]);
      st.universe.for_each([&](std::size_t u) {
        if (!sat.test(u)) out.node_violations.emplace_back(k, ids[u]);
      });
    }
    for (std::size_t k = 0; k < path_roots_.size(); ++k) {
      auto rel = program_.path(st, path_roots_[k]);
      st.universe.for_each([&](std::size_t u) {
        st.universe.for_each([&](std::size_t v) {
          if (!rel.test(u, v)) out.pair_violations.emplace_back(k, ids[u], ids[v]);
        });
      });
    }
    out.consistent = out.node_violations.empty() && out.pair_violations.empty();
    return out;
  }

 private:
  Program program_;
  std::vector<int> path_roots_;
  std::vector<int> node_roots_;
};

/// ⟦α⟧_G as sorted (source, target) id pairs.
inline std::set<std::pair<NodeId, NodeId>> eval_path(const DataGraph& g, const PathExpr& alpha) {
  FactIndex idx(g);
  Program prog(idx);
  int root = prog.add(alpha);
  auto rel = prog.path(make_structure(idx, idx.all_facts()), root);
  std::set<std::pair<NodeId, NodeId>> out;
  const auto& ids = idx.node_ids();
  for (std::size_t u = 0; u < ids.size(); ++u) rel.for_each_in_row(u, [&](std::size_t v) { out.emplace(ids[u], ids[v]); });
  return out;
}

/// ⟦φ⟧_G as sorted node ids.
inline std::set<NodeId> eval_node(const DataGraph& g, const NodeExpr& phi) {
  FactIndex idx(g);
  Program prog(idx);
  int root = prog.add(phi);
  auto s = prog.node(make_structure(idx, idx.all_facts()), root);
  std::set<NodeId> out;
  s.for_each([&](std::size_t u) { out.insert(idx.node_ids()[u]); });
  return out;
}

inline ConsistencyReport is_consistent(const DataGraph& g, const ConstraintSet& r) {
  FactIndex idx(g);
  CompiledConstraints cc(idx, r);
  return cc.report(make_structure(idx, idx.all_facts()));
}

}  // namespace gxr
