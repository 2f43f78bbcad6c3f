// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "gxr/cqa.hpp"
#include "gxr/reductions.hpp"
#include "support.hpp"

using namespace gxr;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::set<std::string> keys(const RepairSearch& s, const std::vector<FactSet>& v) {
  std::set<std::string> out;
  for (const auto& f : v) out.insert(serialize(s.index().to_graph(f)));
  return out;
}

Prioritization random_prioritization(test::Gen& gen, const DataGraph& g) {
  Prioritization p;
  p.levels.resize(1 + gen.below(3));
  for (const auto& f : facts(g)) p.levels[gen.below(p.levels.size())].push_back(f);
  return p;
}

WeightFunction random_weights(test::Gen& gen, std::uint64_t lo) {
  WeightFunction w;
  for (const auto& l : gen.labels) w.label_weights[l] = lo + gen.below(4);
  for (const auto& v : gen.values) w.data_weights[v] = lo + gen.below(4);
  return w;
}

// ---------------------------------------------------------------- criteria

Outcome film_semantics() {
  Outcome o;
  auto t0 = Clock::now();
  auto g = test::film();
  std::set<NodeId> all;
  for (const auto& [u, d] : g.nodes()) all.insert(u);
  auto psi1 = eval_node(g, *parse_node(test::kPsi1));
  auto want = all;
  want.erase("Actor");
  o.require(psi1 == want, "psi1 semantics differ from V minus Actor");
  o.require(is_consistent(g, test::nodes_of({test::kPsi2})).consistent, "psi2 not satisfied");
  auto rep = is_consistent(g, test::nodes_of({test::kPsi3}));
  std::vector<std::pair<std::size_t, NodeId>> at_master{{0, "TheMaster"}};
  o.require(!rep.consistent && rep.node_violations == at_master && rep.pair_violations.empty(),
            "psi3 violations are not exactly {TheMaster}");
  o.require(seconds_since(t0) < 1.0, "slower than 1 s");
  return o;
}

Outcome film_repairs() {
  Outcome o;
  auto t0 = Clock::now();
  auto g = test::film();
  auto robbie = test::without(g, {EdgeFact{"Robbie", "type", "Actor"}});
  auto phi = test::nodes_of({test::kPhi});
  auto contains = [](const std::vector<DataGraph>& v, const DataGraph& h) { return std::find(v.begin(), v.end(), h) != v.end(); };
  o.require(contains(preferred_repairs(g, phi, SubsetOrder{}, SearchMode::FactLattice).repairs, robbie),
            "phi subset repairs miss film minus (Robbie,type,Actor)");
  o.require(contains(preferred_repairs(g, phi, CardinalityOrder{}, SearchMode::FactLattice).repairs, robbie),
            "that graph is not a cardinality repair");

  auto h = repair_compute(g, test::nodes_of({test::kPhi, test::kPsi1}), SubsetOrder{}, SearchMode::FactLattice);
  o.require(h == test::without(g, {EdgeFact{"Robbie", "type", "Actor"}, EdgeFact{"Actor", "type", "Robbie"}}),
            "phi+psi1 repair does not delete exactly the two type edges");

  Prioritization p;
  p.levels.resize(2);
  Fact chazelle = EdgeFact{"TheMaster", "directed_by", "Chazelle"};
  for (const auto& f : facts(g)) p.levels[f == chazelle ? 1 : 0].push_back(f);
  auto prio = preferred_repairs(g, test::nodes_of({test::kPsi2, test::kPsi3}), PrioritizedSubsetOrder{p}, SearchMode::FactLattice);
  o.require(prio.repairs.size() == 1 && prio.repairs.front() == test::without(g, {chazelle}),
            "prioritized repair is not the unique deletion of (TheMaster,directed_by,Chazelle)");
  o.require(seconds_since(t0) < 5.0, "slower than 5 s");
  return o;
}

Outcome network() {
  Outcome o;
  auto t0 = Clock::now();
  auto a = test::net(), b = test::net_b(), c = test::net_c();
  auto r = test::net_constraints();
  auto w = test::net_weights();
  WeightOrder crit{w};
  auto wa = graph_weight(a, w);
  o.require(graph_weight(c, w) + 2 == wa, "weight(c) is not weight(a) - 2");
  o.require(graph_weight(b, w) + 3 == wa, "weight(b) is not weight(a) - 3");
  o.require(edge_data_multiset(b).labels == std::map<EdgeLabel, std::uint64_t>{{"low", 7}, {"high", 4}}, "multiset(b) differs");
  o.require(edge_data_multiset(c).labels == std::map<EdgeLabel, std::uint64_t>{{"low", 5}, {"high", 5}}, "multiset(c) differs");
  o.require(compare(MultisetOrder{test::net_order()}, b, c) == Verdict::Less, "multiset compare(b,c) is not Less");
  o.require(!repair_check(a, b, r, crit, SearchMode::FactLattice), "repair_check accepts (b)");
  if (!repair_check(a, c, r, crit, SearchMode::FactLattice)) {
    // Say why, from the engine itself.
    auto best = repair_compute(a, r, crit, SearchMode::FactLattice);
    std::ostringstream why;
    why << "repair_check rejects (c): a consistent subset of weight " << graph_weight(best, w) << " > " << graph_weight(c, w)
        << " exists (";
    for (const auto& f : facts(a))
      if (!best.contains(f)) why << "drop " << to_string(f) << " ";
    why << "); (b) itself violates " << (is_consistent(b, r).consistent ? "nothing" : "the constraints");
    o.require(false, why.str());
  }
  o.require(seconds_since(t0) < 5.0, "slower than 5 s");
  return o;
}

// random positive node expression over the labels and values of `big`
Outcome node_pos() {
  Outcome o;
  test::Gen gen(1001);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    auto g = gen.graph(6, 12);
    ConstraintSet r;
    for (std::size_t k = 0; k < 1 + gen.below(3); ++k) r.add(gen.pos_node(3));
    auto h = repair_node_pos(g, r);
    RepairSearch search(g, r, SearchMode::FactLattice);
    auto max = search.preferred(SubsetOrder{});
    if (max.size() != 1 || search.index().to_graph(max.front()) != h) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of 500 small instances differ from the oracle");

  gen.labels = {"a", "b", "c"};
  GraphBuilder b;
  for (int v = 0; v < 200; ++v) b.node("n" + std::to_string(v), gen.pick(gen.values));
  std::set<std::tuple<int, std::string, int>> seen;
  while (seen.size() < 600) {
    auto e = std::make_tuple(static_cast<int>(gen.below(200)), gen.pick(gen.labels), static_cast<int>(gen.below(200)));
    if (seen.insert(e).second) b.edge("n" + std::to_string(std::get<0>(e)), std::get<1>(e), "n" + std::to_string(std::get<2>(e)));
  }
  auto big = b.build();
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    ConstraintSet r;
    for (int k = 0; k < 5; ++k) r.add(gen.pos_node(3));
    auto t0 = Clock::now();
    auto h = repair_node_pos(big, r);
    worst = std::max(worst, seconds_since(t0));
    o.require(is_consistent(h, r).consistent, "large repair inconsistent");
  }
  o.require(worst < 5.0, "200-node repair took " + std::to_string(worst) + " s");
  return o;
}

Outcome lemma2() {
  Outcome o;
  test::Gen gen(1002);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    auto g = gen.graph(5, 10);
    auto r = gen.constraints(true, true);
    RepairSearch search(g, r, SearchMode::FactLattice);
    auto base = keys(search, search.preferred(SubsetOrder{}));
    auto p = random_prioritization(gen, g);
    std::vector<PreferenceCriterion> cs{SubsetOrder{}, PrioritizedSubsetOrder{p}, CardinalityOrder{}, PrioritizedCardinalityOrder{p},
                                        WeightOrder{random_weights(gen, 1)}, MultisetOrder{LabelOrder({{"a", "b"}, {"x", "a"}})}};
    for (const auto& c : cs)
      for (const auto& k : keys(search, search.preferred(c)))
        if (!base.contains(k)) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " preferred repairs are not subset repairs");
  return o;
}

Outcome observation1() {
  Outcome o;
  test::Gen gen(1002);  // the same instances as the previous criterion
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    auto g = gen.graph(5, 10);
    auto r = gen.constraints(true, true);
    RepairSearch search(g, r, SearchMode::FactLattice);
    auto trivial = Prioritization::trivial(g);
    auto subset = keys(search, search.preferred(SubsetOrder{}));
    auto card = keys(search, search.preferred(CardinalityOrder{}));
    violations += keys(search, search.preferred(PrioritizedSubsetOrder{trivial})) != subset;
    violations += keys(search, search.preferred(PrioritizedCardinalityOrder{trivial})) != card;
    violations += keys(search, search.preferred(WeightOrder{WeightFunction::uniform(1)})) != card;
  }
  o.require(violations == 0, std::to_string(violations) + " collapsed repair sets differ");
  return o;
}

Outcome staged() {
  Outcome o;
  test::Gen gen(1003);
  int mismatches = 0;
  for (int i = 0; i < 300; ++i) {
    auto g = gen.graph(6, 14);
    auto r = gen.constraints(true, i % 2 == 0);
    std::vector<NodeId> ids;
    for (const auto& [u, d] : g.nodes()) ids.push_back(u);
    auto q = gen.pos_path(2);
    auto s = gen.pick(ids), t = gen.pick(ids);
    for (PreferenceCriterion c : {PreferenceCriterion{CardinalityOrder{}}, PreferenceCriterion{WeightOrder{random_weights(gen, 0)}},
                                  PreferenceCriterion{PrioritizedCardinalityOrder{random_prioritization(gen, g)}}}) {
      CqaInstance inst{g, r, q, s, t, c};
      if (cqa_staged(inst) != cqa_enumerate(inst, SearchMode::FactLattice)) ++mismatches;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  return o;
}

bool reduction_answer(const ReductionInstance& r) {
  return cqa_enumerate({r.graph, r.constraints, r.query, r.source, r.target, r.criterion}, r.mode);
}

Outcome qbf() {
  Outcome o;
  auto t0 = Clock::now();
  int mismatches = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    test::Gen gen(2000 + seed);
    QbfInstance q{1 + gen.below(2), 1 + gen.below(2), {}};
    q.formula = gen.formula(q.x_vars + q.y_vars, 1 + gen.below(3));
    bool want = oracle_qbf(q);
    for (auto v : {QbfVariant::PosPath, QbfVariant::NodeVariant, QbfVariant::MultisetVariant}) {
      auto inst = build_qbf(q, v);
      if (inst.mode != SearchMode::NodeInduced || reduction_answer(inst) != want) ++mismatches;
      ++runs;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(runs) + " disagree with the QBF oracle");
  double s = seconds_since(t0);
  o.require(s < 60.0, "took " + std::to_string(s) + " s");
  return o;
}

Outcome parity() {
  Outcome o;
  test::Gen gen(1004);
  const CnfFormula unsat{1, {{1, 1, 1}, {-1, -1, -1}}};
  int mismatches = 0, lemma = 0, done = 0;
  while (done < 30) {
    std::vector<CnfFormula> fs;
    std::size_t k = 1 + gen.below(2);
    for (std::size_t l = 0; l < k; ++l) fs.push_back(gen.coin(0.25) ? unsat : gen.formula(1 + gen.below(2), 2));
    bool monotone = true;
    for (std::size_t l = 1; l < fs.size(); ++l) monotone = monotone && (oracle_sat(fs[l - 1]) || !oracle_sat(fs[l]));
    if (!monotone) continue;
    ++done;
    auto inst = build_parity3sat(fs);
    RepairSearch search(inst.graph, inst.constraints, inst.mode);
    const auto& idx = search.index();
    detail::QueryEval q(idx, *inst.query);
    auto reps = search.preferred(inst.criterion);
    auto [u, v] = detail::require_pair(idx, {inst.graph, inst.constraints, inst.query, inst.source, inst.target, inst.criterion});
    bool answer = std::all_of(reps.begin(), reps.end(), [&](const FactSet& h) { return q.contains(h, u, v); });
    mismatches += answer != oracle_parity(fs);
    for (std::size_t l = 1; l <= fs.size(); ++l) {
      auto c = idx.require_node("c" + std::to_string(l) + "_1");
      bool everywhere = std::all_of(reps.begin(), reps.end(), [&](const FactSet& h) { return idx.nodes_of(h).test(c); });
      lemma += everywhere != oracle_sat(fs[l - 1]);
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " CQA answers disagree with the parity oracle");
  o.require(lemma == 0, std::to_string(lemma) + " clause-node lemma violations");
  return o;
}

Outcome lexmax() {
  Outcome o;
  test::Gen gen(1005);
  const CnfFormula unsat{1, {{1, 1, 1}, {-1, -1, -1}}};
  int mismatches = 0, unsat_seen = 0;
  for (int i = 0; i < 30; ++i) {
    auto f = i == 0 ? unsat : gen.formula(1 + gen.below(2), 1 + gen.below(2));
    auto want = oracle_lexmax(f);
    unsat_seen += !want;
    for (auto flavor : {LexmaxFlavor::Weight, LexmaxFlavor::PrioritizedCardinality}) {
      auto inst = build_lexmax(f, flavor);
      auto reps = preferred_repairs(inst.graph, inst.constraints, inst.criterion, inst.mode).repairs;
      bool ok = reps.size() == 1;
      if (ok && !want) ok = reps.front().empty();
      if (ok && want)
        for (std::size_t x = 1; x <= f.num_vars; ++x)
          ok = ok && reps.front().has_node("t" + std::to_string(x)) == (*want)[x - 1] &&
               reps.front().has_node("f" + std::to_string(x)) != (*want)[x - 1];
      ok = ok && reduction_answer(inst) == (want && want->back());
      mismatches += !ok;
    }
  }
  o.require(unsat_seen > 0, "no unsatisfiable formula exercised");
  o.require(mismatches == 0, std::to_string(mismatches) + " runs disagree with the lexmax oracle");
  return o;
}

Outcome alpha_t() {
  Outcome o;
  test::Gen gen(1006);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = gen.graph(6, 6 + gen.below(12));
    auto alpha = gen.pos_path(3);
    ConstraintSet p, n;
    p.add(alpha);
    n.add(to_node_constraint(alpha));
    violations += is_consistent(g, p).consistent != is_consistent(g, n).consistent;
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"film fixture: node semantics of psi1..psi3", film_semantics},
      {"film fixture: subset, cardinality and prioritized repairs", film_repairs},
      {"network fixture: weights, multisets, repair checking", network},
      {"node-positive repairs: oracle equivalence and 200-node run", node_pos},
      {"preferred repairs are subset repairs (six criteria)", lemma2},
      {"trivial prioritization and unit weights collapse", observation1},
      {"staged CQA equals enumeration", staged},
      {"QBF reduction matches the QBF oracle (three variants)", qbf},
      {"parity reduction matches the parity oracle", parity},
      {"lexmax reduction matches the lexmax oracle (two flavors)", lexmax},
      {"path constraint equals its node-constraint form", alpha_t},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " (" << timing << ")";
    if (!o.ok) std::cout << ": " << o.detail;
    std::cout << std::endl;
    failed += !o.ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
