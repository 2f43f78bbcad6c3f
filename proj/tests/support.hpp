#pragma once

#include <random>
#include <string>
#include <vector>

#include "gxr/constraints.hpp"
#include "gxr/graph_json.hpp"
#include "gxr/parser.hpp"
#include "gxr/reductions.hpp"

namespace gxr::test {

inline std::string data_path(const std::string& file) { return std::string(GXR_DATA_DIR) + "/" + file; }

inline DataGraph film() { return load_graph(data_path("film.json")); }
inline DataGraph net() { return load_graph(data_path("net.json")); }
inline DataGraph net_b() { return load_graph(data_path("net_b.json")); }
inline DataGraph net_c() { return load_graph(data_path("net_c.json")); }
inline ConstraintSet net_constraints() { return load_constraints(data_path("net.constraints")); }
inline WeightFunction net_weights() { return load_weights(data_path("net.weights.json")); }
inline LabelOrder net_order() { return load_order(data_path("net.order.json")); }

inline const char* kPhi = R"(<acts_in/[<directed_by/[data = "Anderson"]>]/^acts_in/[data = "Hoffman"]> || ~<type/[data = "Actor"]>)";
inline const char* kPsi1 = R"(~<_> || ~(data = "Actor" || data = "Film"))";
inline const char* kPsi2 = R"(<directed_by> || ~<type/[data = "Film"]>)";
inline const char* kPsi3 = R"(~<directed_by != directed_by> || ~<type/[data = "Film"]>)";

inline ConstraintSet nodes_of(std::initializer_list<const char*> exprs) {
  ConstraintSet r;
  for (const char* e : exprs) r.add(parse_node(e));
  return r;
}

inline DataGraph without(const DataGraph& g, std::initializer_list<Fact> fs) {
  std::vector<Fact> v(fs);
  return delete_facts(g, v);
}

// ---------------------------------------------------------------- random

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::vector<std::string> labels{"a", "b"};
  std::vector<std::string> values{"x", "y", "z"};

  /// 1..max_nodes nodes (biased upward), edges added while the fact count
  /// stays in budget.
  DataGraph graph(std::size_t max_nodes, std::size_t max_facts) {
    std::size_t cap = std::min(max_nodes, max_facts);
    std::size_t n = std::max(1 + below(cap), 1 + below(cap));
    GraphBuilder b;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("n" + std::to_string(i));
      b.node(ids.back(), pick(values));
    }
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::size_t budget = max_facts - n;
    std::size_t want = budget / 2 + below(budget - budget / 2 + 1);
    for (std::size_t tries = 0; seen.size() < want && tries < 8 * (want + 1); ++tries) {
      auto e = std::make_tuple(pick(ids), pick(labels), pick(ids));
      if (seen.insert(e).second) b.edge(std::get<0>(e), std::get<1>(e), std::get<2>(e));
    }
    return b.build();
  }

  PathPtr pos_path(int depth) { return path_expr(depth, false); }
  PathPtr any_path(int depth) { return path_expr(depth, true); }
  NodePtr pos_node(int depth) { return node_expr(depth, false); }
  NodePtr any_node(int depth) { return node_expr(depth, true); }

  /// Constraint set of 1..3 constraints. `negation` allows complement and
  /// node negation anywhere; otherwise only the edge-monotone shapes.
  ConstraintSet constraints(bool allow_paths, bool negation, int depth = 2) {
    ConstraintSet r;
    std::size_t k = 1 + below(3);
    for (std::size_t i = 0; i < k; ++i) {
      if (allow_paths && coin())
        r.add(negation ? any_path(depth) : pos_path(depth));
      else if (negation)
        r.add(any_node(depth));
      else if (coin(0.3))
        r.add(to_node_constraint(pos_path(depth)));
      else
        r.add(pos_node(depth));
    }
    return r;
  }

  CnfFormula formula(std::size_t vars, std::size_t clauses) {
    CnfFormula f;
    f.num_vars = vars;
    for (std::size_t j = 0; j < clauses; ++j) {
      std::array<int, 3> c{};
      for (auto& lit : c) lit = static_cast<int>(1 + below(vars)) * (coin() ? 1 : -1);
      f.clauses.push_back(c);
    }
    return f;
  }

 private:
  PathPtr path_expr(int depth, bool neg) {
    if (depth <= 0 || coin(0.3)) {
      switch (below(4)) {
        case 0: return path::epsilon();
        case 1: return path::wildcard();
        case 2: return path::inverse(pick(labels));
        default: return path::label(pick(labels));
      }
    }
    switch (below(neg ? 8 : 7)) {
      case 0: return path::concat(path_expr(depth - 1, neg), path_expr(depth - 1, neg));
      case 1: return path::alt(path_expr(depth - 1, neg), path_expr(depth - 1, neg));
      case 2: return path::meet(path_expr(depth - 1, neg), path_expr(depth - 1, neg));
      case 3: return path::star(path_expr(depth - 1, neg));
      case 4: {
        auto lo = static_cast<std::uint32_t>(below(3));
        return path::repeat(path_expr(depth - 1, neg), lo, lo + static_cast<std::uint32_t>(below(3)));
      }
      case 5: return path::test(node_expr(depth - 1, neg));
      case 6: return path::label(pick(labels));
      default: return path::complement(path_expr(depth - 1, neg));
    }
  }

  NodePtr node_expr(int depth, bool neg) {
    if (depth <= 0 || coin(0.3)) return coin() ? node::data_eq(pick(values)) : node::data_neq(pick(values));
    switch (below(neg ? 7 : 6)) {
      case 0: return node::conj(node_expr(depth - 1, neg), node_expr(depth - 1, neg));
      case 1: return node::disj(node_expr(depth - 1, neg), node_expr(depth - 1, neg));
      case 2:
      case 3: return node::has(path_expr(depth - 1, neg));
      case 4: return node::eq(path_expr(depth - 1, neg), path_expr(depth - 1, neg));
      case 5: return node::neq(path_expr(depth - 1, neg), path_expr(depth - 1, neg));
      default: return node::negate(node_expr(depth - 1, neg));
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace gxr::test
