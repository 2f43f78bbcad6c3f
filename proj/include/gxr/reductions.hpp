#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gxr/constraints.hpp"
#include "gxr/graph.hpp"
#include "gxr/graph_json.hpp"
#include "gxr/parser.hpp"
#include "gxr/preferences.hpp"
#include "gxr/preferences_json.hpp"
#include "gxr/repair.hpp"

namespace gxr {

/// 3CNF formula; literal +i is x_i, -i is its negation, 1-based.
struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<std::array<int, 3>> clauses;

  bool operator==(const CnfFormula&) const = default;
};

/// ∀X∃Y φ with X = variables 1..x_vars and Y = the next y_vars.
struct QbfInstance {
  std::size_t x_vars = 0;
  std::size_t y_vars = 0;
  CnfFormula formula;
};

enum class QbfVariant : std::uint8_t { PosPath, NodeVariant, MultisetVariant };
enum class LexmaxFlavor : std::uint8_t { Weight, PrioritizedCardinality };

inline const char* to_string(QbfVariant v) noexcept {
  switch (v) {
    case QbfVariant::PosPath: return "pos-path";
    case QbfVariant::NodeVariant: return "node";
    case QbfVariant::MultisetVariant: return "multiset";
  }
  return "?";
}
inline const char* to_string(LexmaxFlavor f) noexcept { return f == LexmaxFlavor::Weight ? "weight" : "prio-card"; }

/// A generated CQA instance: (v, w) ∈ ⟦query⟧ in every preferred repair
/// iff the logical instance in `origin` is a yes-instance.
struct ReductionInstance {
  DataGraph graph;
  ConstraintSet constraints;
  PathPtr query;
  NodeId source;
  NodeId target;
  PreferenceCriterion criterion;
  SearchMode mode = SearchMode::NodeInduced;
  Json origin;
  std::vector<std::string> normalizations;
};

// ---------------------------------------------------------------- oracles

namespace detail {

inline void check_formula(const CnfFormula& f) {
  for (const auto& c : f.clauses)
    for (int lit : c)
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > f.num_vars)
        throw BadArity("literal " + std::to_string(lit) + " outside variables 1.." + std::to_string(f.num_vars));
}

inline void check_var_budget(std::size_t n) {
  if (n > 24) throw TooManyVars(std::to_string(n) + " variables; truth tables stop at 24");
}

/// Bit i-1 of `assignment` is the value of x_i.
inline bool satisfies(const CnfFormula& f, std::uint32_t assignment) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int lit : c) {
      bool value = (assignment >> (std::abs(lit) - 1)) & 1U;
      if ((lit > 0) == value) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace detail

inline bool oracle_sat(const CnfFormula& f) {
  detail::check_formula(f);
  detail::check_var_budget(f.num_vars);
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << f.num_vars); ++a)
    if (detail::satisfies(f, a)) return true;
  return false;
}

inline bool oracle_qbf(const QbfInstance& q) {
  if (q.formula.num_vars != q.x_vars + q.y_vars) throw BadArity("formula variables must be x_vars + y_vars");
  detail::check_formula(q.formula);
  detail::check_var_budget(q.x_vars + q.y_vars);
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << q.x_vars); ++x) {
    bool found = false;
    for (std::uint32_t y = 0; y < (std::uint32_t{1} << q.y_vars) && !found; ++y)
      found = detail::satisfies(q.formula, x | (y << q.x_vars));
    if (!found) return false;
  }
  return true;
}

/// Even number of satisfiable formulas.
inline bool oracle_parity(const std::vector<CnfFormula>& formulas) {
  std::size_t sat = 0;
  for (const auto& f : formulas) sat += oracle_sat(f) ? 1 : 0;
  return sat % 2 == 0;
}

/// Lexicographically greatest satisfying assignment with x_1 most
/// significant and true above false; element i is the value of x_{i+1}.
inline std::optional<std::vector<bool>> oracle_lexmax(const CnfFormula& f) {
  detail::check_formula(f);
  detail::check_var_budget(f.num_vars);
  const std::size_t n = f.num_vars;
  for (std::uint64_t code = std::uint64_t{1} << n; code-- > 0;) {
    std::uint32_t a = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((code >> (n - 1 - i)) & 1U) a |= 1U << i;
    if (detail::satisfies(f, a)) {
      std::vector<bool> out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = (a >> i) & 1U;
      return out;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- JSON

inline Json formula_to_json(const CnfFormula& f) {
  Json clauses = Json::array();
  for (const auto& c : f.clauses) clauses.push_back(Json::array({c[0], c[1], c[2]}));
  return Json{{"num_vars", f.num_vars}, {"clauses", std::move(clauses)}};
}

inline CnfFormula formula_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("clauses") || !j["clauses"].is_array()) throw FormatError("formula: expected {\"num_vars\": n, \"clauses\": [[l1,l2,l3], ...]}");
  CnfFormula f;
  if (j.contains("num_vars")) {
    if (!j["num_vars"].is_number_unsigned()) throw FormatError("formula: num_vars must be a non-negative integer");
    f.num_vars = j["num_vars"].get<std::size_t>();
  }
  for (const auto& c : j["clauses"]) {
    if (!c.is_array()) throw FormatError("formula: clauses must be arrays");
    if (c.size() != 3) throw BadArity("clause with " + std::to_string(c.size()) + " literals; exactly 3 are required");
    std::array<int, 3> cl{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!c[k].is_number_integer()) throw FormatError("formula: literals must be integers");
      cl[k] = c[k].get<int>();
    }
    f.clauses.push_back(cl);
  }
  detail::check_formula(f);
  return f;
}

inline Json qbf_to_json(const QbfInstance& q) {
  Json j = formula_to_json(q.formula);
  j["x_vars"] = q.x_vars;
  j["y_vars"] = q.y_vars;
  return j;
}

inline QbfInstance qbf_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("x_vars") || !j.contains("y_vars") || !j["x_vars"].is_number_unsigned() ||
      !j["y_vars"].is_number_unsigned())
    throw FormatError("qbf: expected x_vars, y_vars and clauses");
  QbfInstance q;
  q.x_vars = j["x_vars"].get<std::size_t>();
  q.y_vars = j["y_vars"].get<std::size_t>();
  Json fj = j;
  fj["num_vars"] = q.x_vars + q.y_vars;
  q.formula = formula_from_json(fj);
  return q;
}

// ---------------------------------------------------------------- builders

namespace detail {

/// GraphBuilder that ignores repeated edges (clauses may repeat a literal).
class SetBuilder {
 public:
  SetBuilder& node(NodeId id, DataValue data) {
    b_.node(std::move(id), std::move(data));
    return *this;
  }
  SetBuilder& edge(const NodeId& from, const EdgeLabel& label, const NodeId& to) {
    if (seen_.emplace(from, label, to).second) b_.edge(from, label, to);
    return *this;
  }
  DataGraph build() const { return b_.build(); }

 private:
  GraphBuilder b_;
  std::set<std::tuple<NodeId, EdgeLabel, NodeId>> seen_;
};

inline void all_pairs(SetBuilder& b, const std::vector<NodeId>& nodes, const std::string& label) {
  for (const auto& a : nodes)
    for (const auto& c : nodes) b.edge(a, label, c);
}

inline ConstraintSet parse_paths(std::initializer_list<const char*> exprs) {
  ConstraintSet r;
  for (const char* e : exprs) r.add(parse_path(e));
  return r;
}

}  // namespace detail

/// Universally quantified X, existentially quantified Y; the pair (v, w) is
/// certain iff every X-assignment extends to a model.
inline ReductionInstance build_qbf(const QbfInstance& q, QbfVariant variant) {
  if (q.x_vars < 1 || q.y_vars < 1 || q.formula.clauses.empty())
    throw BadArity("qbf reduction needs at least one X variable, one Y variable and one clause");
  if (q.formula.num_vars != q.x_vars + q.y_vars) throw BadArity("formula variables must be x_vars + y_vars");
  detail::check_formula(q.formula);

  const std::size_t r = q.x_vars, s = q.y_vars, m = q.formula.clauses.size();
  auto lit_node = [&](int lit) {
    std::size_t i = static_cast<std::size_t>(std::abs(lit));
    bool is_x = i <= r;
    std::size_t k = is_x ? i : i - r;
    return std::string(lit > 0 ? "t" : "f") + (is_x ? "x" : "y") + std::to_string(k);
  };
  auto tnode = [](const char* z, std::size_t i) { return std::string("t") + z + std::to_string(i); };
  auto fnode = [](const char* z, std::size_t i) { return std::string("f") + z + std::to_string(i); };
  auto cnode = [](std::size_t j) { return "c" + std::to_string(j); };

  std::vector<NodeId> all, x_nodes, y_nodes, clause_nodes;
  for (std::size_t i = 1; i <= r; ++i) x_nodes.insert(x_nodes.end(), {tnode("x", i), fnode("x", i)});
  for (std::size_t i = 1; i <= s; ++i) y_nodes.insert(y_nodes.end(), {tnode("y", i), fnode("y", i)});
  for (std::size_t j = 1; j <= m; ++j) clause_nodes.push_back(cnode(j));
  all.insert(all.end(), x_nodes.begin(), x_nodes.end());
  all.insert(all.end(), y_nodes.begin(), y_nodes.end());
  all.insert(all.end(), clause_nodes.begin(), clause_nodes.end());
  all.insert(all.end(), {"v", "w"});

  detail::SetBuilder b;
  for (const auto& id : all) {
    bool boolean = id[0] == 't' || id[0] == 'f';
    b.node(id, variant == QbfVariant::MultisetVariant ? (boolean ? id : "null") : id);
  }
  // needs: clause -> satisfying literal; loops elsewhere
  for (std::size_t j = 0; j < m; ++j)
    for (int lit : q.formula.clauses[j]) b.edge(cnode(j + 1), "needs", lit_node(lit));
  for (const auto& a : all)
    if (a[0] != 'c') b.edge(a, "needs", a);
  // one_v: everything but the (true, false) pair of a variable
  for (const auto& a : all)
    for (const auto& c : all) {
      bool clash = a[0] == 't' && c[0] == 'f' && a.substr(1) == c.substr(1);
      if (!clash) b.edge(a, "one_v", c);
    }
  // valid: clause chain, then through one choice per Y variable, back to c1
  for (std::size_t j = 1; j < m; ++j) b.edge(cnode(j), "valid", cnode(j + 1));
  for (auto* first : {"t", "f"}) b.edge(cnode(m), "valid", first + std::string("y1"));
  for (std::size_t i = 1; i < s; ++i)
    for (auto* a : {"t", "f"})
      for (auto* c : {"t", "f"}) b.edge(a + ("y" + std::to_string(i)), "valid", c + ("y" + std::to_string(i + 1)));
  for (auto* last : {"t", "f"}) b.edge(last + ("y" + std::to_string(s)), "valid", cnode(1));
  for (const auto& a : all)
    if (a[0] != 'c' && !(a.size() > 1 && a[1] == 'y' && (a[0] == 't' || a[0] == 'f'))) b.edge(a, "valid", a);
  detail::all_pairs(b, all, "all");
  b.edge("v", "query", cnode(1)).edge(cnode(1), "query", "w");

  ReductionInstance out;
  out.graph = b.build();
  auto base = detail::parse_paths({"needs/all", "one_v", "valid/all"});
  if (variant == QbfVariant::NodeVariant) {
    for (const auto& p : base.path_constraints) out.constraints.add(to_node_constraint(p));
  } else {
    out.constraints = std::move(base);
  }
  out.query = parse_path("query/query");
  out.source = "v";
  out.target = "w";
  if (variant == QbfVariant::MultisetVariant)
    out.criterion = MultisetOrder{LabelOrder{}};
  else
    out.criterion = SubsetOrder{};
  out.origin = Json{{"problem", "qbf"}, {"variant", to_string(variant)}, {"instance", qbf_to_json(q)}};
  return out;
}

/// Node c<l>_1 survives every cardinality-preferred repair iff φ_l is
/// satisfiable; the query path v, c<t>_1, fin<t>, w exists iff the last
/// satisfiable index t is even.
inline ReductionInstance build_parity3sat(const std::vector<CnfFormula>& formulas) {
  if (formulas.empty()) throw BadArity("parity reduction needs at least one formula");
  for (const auto& f : formulas) {
    detail::check_formula(f);
    if (f.clauses.size() < 2) throw BadArity("every formula needs at least two clauses");
  }
  bool prev = true;
  for (std::size_t l = 0; l < formulas.size(); ++l) {
    bool sat = oracle_sat(formulas[l]);
    if (sat && !prev)
      throw NonMonotoneSatSequence("formula " + std::to_string(l + 1) + " is satisfiable after an unsatisfiable one");
    prev = sat;
  }

  const std::size_t k = formulas.size();
  auto cnode = [](std::size_t l, std::size_t j) { return "c" + std::to_string(l) + "_" + std::to_string(j); };
  auto fin = [](std::size_t l) { return "fin" + std::to_string(l); };
  auto lit_node = [](std::size_t l, int lit) {
    return std::string(lit > 0 ? "t" : "f") + std::to_string(l) + "_" + std::to_string(std::abs(lit));
  };

  std::vector<NodeId> all;
  std::vector<bool> is_clause;
  auto add = [&](NodeId id, bool clause) {
    all.push_back(std::move(id));
    is_clause.push_back(clause);
  };
  add(cnode(0, 1), false);  // stands for t = 0: always present, never a clause
  for (std::size_t l = 1; l <= k; ++l) {
    for (std::size_t j = 1; j <= formulas[l - 1].clauses.size(); ++j) add(cnode(l, j), true);
    for (std::size_t i = 1; i <= formulas[l - 1].num_vars; ++i) {
      add(lit_node(l, static_cast<int>(i)), false);
      add(lit_node(l, -static_cast<int>(i)), false);
    }
  }
  for (std::size_t l = 0; l <= k; ++l) add(fin(l), false);
  add("v", false);
  add("w", false);

  detail::SetBuilder b;
  for (const auto& id : all) b.node(id, id);
  for (std::size_t l = 1; l <= k; ++l)
    for (std::size_t j = 0; j < formulas[l - 1].clauses.size(); ++j)
      for (int lit : formulas[l - 1].clauses[j]) b.edge(cnode(l, j + 1), "needs", lit_node(l, lit));
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!is_clause[i]) b.edge(all[i], "needs", all[i]).edge(all[i], "valid", all[i]);
  for (const auto& a : all)
    for (const auto& c : all) {
      bool clash = a[0] == 't' && c[0] == 'f' && a.substr(1) == c.substr(1);
      if (!clash) b.edge(a, "one_v", c);
    }
  for (std::size_t l = 1; l <= k; ++l) {
    std::size_t m = formulas[l - 1].clauses.size();
    for (std::size_t j = 1; j <= m; ++j) b.edge(cnode(l, j), "valid", cnode(l, j == m ? 1 : j + 1));
  }
  detail::all_pairs(b, all, "all");
  for (const auto& a : all)
    for (const auto& c : all) {
      bool blocked = false;
      for (std::size_t l = 0; l < k && !blocked; ++l) blocked = a == fin(l) && c == cnode(l + 1, 1);
      if (!blocked) b.edge(a, "finish", c);
    }
  for (std::size_t l = 0; l <= k; l += 2) b.edge("v", "query", cnode(l, 1)).edge(cnode(l, 1), "query", fin(l));
  for (std::size_t l = 0; l <= k; ++l) b.edge(fin(l), "query", "w");

  ReductionInstance out;
  out.graph = b.build();
  out.constraints = detail::parse_paths({"needs/all", "one_v", "valid/all", "finish"});
  out.query = parse_path("query/query/query");
  out.source = "v";
  out.target = "w";
  out.criterion = CardinalityOrder{};
  Json fs = Json::array();
  for (const auto& f : formulas) fs.push_back(formula_to_json(f));
  out.origin = Json{{"problem", "parity"}, {"formulas", std::move(fs)}};
  out.normalizations = {
      "all: every ordered pair of nodes, not only loops",
      "query: both v->c<l>_1 and c<l>_1->fin<l> for even l",
      "t = 0: extra non-clause node c0_1 and node fin0, with fin0 blocked from c1_1 by finish",
  };
  return out;
}

/// The unique preferred repair encodes the lexicographically greatest
/// model (empty if none); (v, w) is certain iff that model sets x_n true.
inline ReductionInstance build_lexmax(const CnfFormula& f, LexmaxFlavor flavor) {
  if (f.num_vars < 1 || f.clauses.empty()) throw BadArity("lexmax reduction needs at least one variable and one clause");
  if (f.num_vars > 60) throw BadArity("lexmax reduction supports at most 60 variables");
  detail::check_formula(f);
  const std::size_t n = f.num_vars, m = f.clauses.size();
  auto tnode = [](std::size_t i) { return "t" + std::to_string(i); };
  auto fnode = [](std::size_t i) { return "f" + std::to_string(i); };
  auto cnode = [](std::size_t j) { return "c" + std::to_string(j); };
  auto lit_node = [&](int lit) { return lit > 0 ? tnode(static_cast<std::size_t>(lit)) : fnode(static_cast<std::size_t>(-lit)); };
  auto pow2 = [](std::size_t e) { return std::to_string(std::uint64_t{1} << e); };

  std::vector<NodeId> all;
  detail::SetBuilder b;
  for (std::size_t j = 1; j <= m; ++j) {
    all.push_back(cnode(j));
    b.node(cnode(j), pow2(n + 2));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    all.push_back(tnode(i));
    b.node(tnode(i), pow2(n + 1 - i));
    all.push_back(fnode(i));
    b.node(fnode(i), "1");
  }
  all.insert(all.end(), {"v", "w"});
  b.node("v", "0").node("w", "0");

  for (std::size_t j = 0; j < m; ++j)
    for (int lit : f.clauses[j]) b.edge(cnode(j + 1), "needs", lit_node(lit));
  for (const auto& a : all)
    if (a[0] != 'c') b.edge(a, "needs", a);
  for (const auto& a : all)
    for (const auto& c : all) {
      bool clash = a[0] == 't' && c[0] == 'f' && a.substr(1) == c.substr(1);
      if (!clash) b.edge(a, "one_v", c);
    }
  // valid: one cycle through every clause, v, w and one choice per variable
  for (std::size_t j = 1; j < m; ++j) b.edge(cnode(j), "valid", cnode(j + 1));
  b.edge(cnode(m), "valid", "v").edge("v", "valid", "w");
  b.edge("w", "valid", tnode(1)).edge("w", "valid", fnode(1));
  for (std::size_t i = 1; i < n; ++i)
    for (const auto& a : {tnode(i), fnode(i)})
      for (const auto& c : {tnode(i + 1), fnode(i + 1)}) b.edge(a, "valid", c);
  b.edge(tnode(n), "valid", cnode(1)).edge(fnode(n), "valid", cnode(1));
  detail::all_pairs(b, all, "all");
  b.edge("v", "query", tnode(n)).edge(tnode(n), "query", "w");

  ReductionInstance out;
  out.graph = b.build();
  out.constraints = detail::parse_paths({"needs/all", "one_v", "valid/all"});
  out.query = parse_path("query/query");
  out.source = "v";
  out.target = "w";
  if (flavor == LexmaxFlavor::Weight) {
    WeightFunction w;
    for (const auto& [id, d] : out.graph.nodes()) w.data_weights[d] = std::stoull(d);
    w.default_label = 0;
    w.default_data = 0;
    out.criterion = WeightOrder{std::move(w)};
  } else {
    Prioritization p;
    auto& top = p.levels.emplace_back();
    for (std::size_t j = 1; j <= m; ++j) top.push_back(NodeFact{cnode(j)});
    top.push_back(NodeFact{"v"});
    top.push_back(NodeFact{"w"});
    for (std::size_t i = 1; i <= n; ++i) p.levels.push_back({NodeFact{tnode(i)}});
    auto& rest = p.levels.emplace_back();
    for (std::size_t i = 1; i <= n; ++i) rest.push_back(NodeFact{fnode(i)});
    for (auto& e : out.graph.edge_facts()) rest.push_back(std::move(e));
    out.criterion = PrioritizedCardinalityOrder{std::move(p)};
  }
  out.origin = Json{{"problem", "lexmax"}, {"flavor", to_string(flavor)}, {"formula", formula_to_json(f)}};
  out.normalizations = {
      "valid: a single cycle through the clauses, v, w and one node per variable, so an unsatisfiable formula leaves only the empty repair",
      "needs: loops on every non-clause node",
      "all: every ordered pair of nodes",
      "v and w carry data value 0",
  };
  if (flavor == LexmaxFlavor::PrioritizedCardinality)
    out.normalizations.push_back("priorities: clauses, v, w first, then one level per true-node t1..tn, then false-nodes and all edges");
  return out;
}

/// Subgraph fixing an X-assignment: the chosen literal nodes plus v and w,
/// with one_v and all between them and needs/valid loops. Bit i-1 of
/// `assignment` is the value of x_i. It satisfies the qbf constraints.
inline DataGraph qbf_assignment_graph(const ReductionInstance& inst, std::size_t x_vars, std::uint32_t assignment) {
  std::vector<NodeId> keep{"v", "w"};
  for (std::size_t i = 1; i <= x_vars; ++i)
    keep.push_back(std::string((assignment >> (i - 1)) & 1U ? "t" : "f") + "x" + std::to_string(i));
  GraphBuilder b;
  for (const auto& id : keep) b.node(id, inst.graph.data(id));
  for (const auto& a : keep) {
    b.edge(a, "needs", a).edge(a, "valid", a);
    for (const auto& c : keep) b.edge(a, "one_v", c).edge(a, "all", c);
  }
  return b.build();
}

/// Manifest for a generated instance; criterion parameters are inlined.
inline Json reduction_manifest(const ReductionInstance& inst) {
  Json j{{"query", to_string(*inst.query)},
         {"source", inst.source},
         {"target", inst.target},
         {"criterion", criterion_name(inst.criterion)},
         {"mode", to_string(inst.mode)}};
  if (auto* w = std::get_if<WeightOrder>(&inst.criterion)) j["weights"] = weights_to_json(w->weights);
  if (auto* p = std::get_if<PrioritizedCardinalityOrder>(&inst.criterion)) j["prioritization"] = prioritization_to_json(p->prioritization);
  if (auto* o = std::get_if<MultisetOrder>(&inst.criterion)) j["order"] = order_to_json(o->order);
  j["origin"] = inst.origin;
  j["normalizations"] = inst.normalizations;
  return j;
}

}  // namespace gxr
