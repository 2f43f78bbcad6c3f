#include <gtest/gtest.h>

#include "gxr/preferences_json.hpp"
#include "support.hpp"

using namespace gxr;

namespace {

// g1 ≼ g2 written out per criterion on plain graphs.
bool ref_leq(const PreferenceCriterion& c, const DataGraph& g1, const DataGraph& g2) {
  auto level_sets = [](const DataGraph& g, const Prioritization& p) {
    std::vector<std::set<Fact>> out;
    for (const auto& level : p.levels) {
      auto& s = out.emplace_back();
      for (const auto& f : level)
        if (g.contains(f)) s.insert(f);
    }
    return out;
  };
  if (std::holds_alternative<SubsetOrder>(c)) return is_subset(g1, g2);
  if (auto* p = std::get_if<PrioritizedSubsetOrder>(&c)) {
    auto a = level_sets(g1, p->prioritization), b = level_sets(g2, p->prioritization);
    if (a == b) return true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == b[i]) continue;
      return a[i].size() < b[i].size() && std::includes(b[i].begin(), b[i].end(), a[i].begin(), a[i].end());
    }
    return true;
  }
  if (std::holds_alternative<CardinalityOrder>(c)) return cardinality(g1) <= cardinality(g2);
  if (auto* p = std::get_if<PrioritizedCardinalityOrder>(&c)) {
    auto a = level_sets(g1, p->prioritization), b = level_sets(g2, p->prioritization);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].size() != b[i].size()) return a[i].size() < b[i].size();
    return true;
  }
  if (auto* w = std::get_if<WeightOrder>(&c)) return graph_weight(g1, w->weights) <= graph_weight(g2, w->weights);
  const auto& ord = std::get<MultisetOrder>(c).order;
  return multiset_leq(edge_data_multiset(g1), edge_data_multiset(g2), ord);
}

Verdict ref_verdict(const PreferenceCriterion& c, const DataGraph& a, const DataGraph& b) {
  bool le = ref_leq(c, a, b), ge = ref_leq(c, b, a);
  if (le && ge) return Verdict::Equivalent;
  if (le) return Verdict::Less;
  if (ge) return Verdict::Greater;
  return Verdict::Incomparable;
}

DataGraph random_subset(test::Gen& gen, const DataGraph& g) {
  std::vector<Fact> drop;
  for (const auto& f : facts(g))
    if (gen.coin(0.3)) drop.push_back(f);
  return delete_facts(g, drop);
}

std::vector<PreferenceCriterion> random_criteria(test::Gen& gen, const DataGraph& g) {
  Prioritization p;
  p.levels.resize(1 + gen.below(3));
  for (const auto& f : facts(g)) p.levels[gen.below(p.levels.size())].push_back(f);
  WeightFunction w;
  for (const auto& l : gen.labels) w.label_weights[l] = gen.below(4);
  for (const auto& v : gen.values) w.data_weights[v] = gen.below(4);
  std::vector<std::pair<std::string, std::string>> gens;
  if (gen.coin()) gens.emplace_back("a", "b");
  if (gen.coin()) gens.emplace_back("x", "a");
  if (gen.coin()) gens.emplace_back("y", "z");
  return {SubsetOrder{}, PrioritizedSubsetOrder{p}, CardinalityOrder{}, PrioritizedCardinalityOrder{p},
          WeightOrder{w}, MultisetOrder{LabelOrder(gens)}};
}

}  // namespace

TEST(Weights, NetworkFigures) {
  auto w = test::net_weights();
  EXPECT_EQ(graph_weight(test::net(), w), 102U);
  EXPECT_EQ(graph_weight(test::net_b(), w), 99U);
  EXPECT_EQ(graph_weight(test::net_c(), w), 100U);
  EXPECT_EQ(graph_weight(DataGraph{}, w), 0U);
}

TEST(Weights, Overflow) {
  auto g = GraphBuilder{}.node("a", "x").node("b", "x").build();
  WeightFunction w;
  w.default_data = std::numeric_limits<std::uint64_t>::max();
  EXPECT_THROW(graph_weight(g, w), ArithmeticOverflow);
}

TEST(Multiset, NetworkFigures) {
  auto b = edge_data_multiset(test::net_b()), c = edge_data_multiset(test::net_c());
  EXPECT_EQ(b.labels, (std::map<EdgeLabel, std::uint64_t>{{"low", 7}, {"high", 4}}));
  EXPECT_EQ(c.labels, (std::map<EdgeLabel, std::uint64_t>{{"low", 5}, {"high", 5}}));
  auto ord = test::net_order();
  EXPECT_TRUE(multiset_leq(b, c, ord));
  EXPECT_FALSE(multiset_leq(c, b, ord));
  EXPECT_TRUE(multiset_leq(c, c, ord));
  EXPECT_TRUE(edge_data_multiset(DataGraph{}).labels.empty());
}

TEST(Multiset, DiscreteOrderIsPointwise) {
  test::Gen gen(23);
  LabelOrder discrete;
  for (int i = 0; i < 300; ++i) {
    auto g = gen.graph(4, 10);
    auto a = edge_data_multiset(random_subset(gen, g)), b = edge_data_multiset(random_subset(gen, g));
    bool pointwise = true;
    for (const auto& [k, n] : a.labels) pointwise = pointwise && n <= (b.labels.contains(k) ? b.labels.at(k) : 0);
    for (const auto& [k, n] : a.data) pointwise = pointwise && n <= (b.data.contains(k) ? b.data.at(k) : 0);
    EXPECT_EQ(multiset_leq(a, b, discrete), pointwise);
  }
}

TEST(Multiset, Antisymmetric) {
  test::Gen gen(29);
  LabelOrder ord({{"a", "b"}, {"x", "y"}, {"b", "y"}});
  for (int i = 0; i < 300; ++i) {
    auto g = gen.graph(4, 10);
    auto a = edge_data_multiset(random_subset(gen, g)), b = edge_data_multiset(random_subset(gen, g));
    if (multiset_leq(a, b, ord) && multiset_leq(b, a, ord)) {
      EXPECT_EQ(a, b);
    }
  }
}

TEST(LabelOrder, ClosureAndCycles) {
  LabelOrder o({{"a", "b"}, {"b", "c"}});
  EXPECT_TRUE(o.less("a", "c"));
  EXPECT_FALSE(o.less("c", "a"));
  EXPECT_FALSE(o.less("a", "a"));
  EXPECT_TRUE(LabelOrder{}.discrete());
  EXPECT_THROW(LabelOrder({{"a", "b"}, {"b", "a"}}), OrderCycleError);
  EXPECT_THROW(LabelOrder(std::vector<std::pair<std::string, std::string>>{{"a", "a"}}), OrderCycleError);
}

TEST(Compare, SpecExamples) {
  auto g = test::film();
  auto one = test::without(g, {EdgeFact{"Robbie", "type", "Actor"}});
  auto two = test::without(g, {EdgeFact{"Robbie", "type", "Actor"}, EdgeFact{"Phoenix", "type", "Actor"}});
  EXPECT_EQ(compare(SubsetOrder{}, two, one), Verdict::Less);
  EXPECT_EQ(compare(SubsetOrder{}, g, g), Verdict::Equivalent);
  EXPECT_FALSE(strictly_better_exists_witness(SubsetOrder{}, g, g));
  EXPECT_TRUE(strictly_better_exists_witness(CardinalityOrder{}, DataGraph{}, one));

  EdgeFact anderson{"TheMaster", "directed_by", "Anderson"}, chazelle{"TheMaster", "directed_by", "Chazelle"};
  Prioritization p;
  p.levels.resize(2);
  for (const auto& f : facts(g)) (Fact(chazelle) == f ? p.levels[1] : p.levels[0]).push_back(f);
  auto keep_anderson = test::without(g, {chazelle});
  auto keep_chazelle = test::without(g, {anderson});
  EXPECT_EQ(compare(PrioritizedSubsetOrder{p}, keep_chazelle, keep_anderson), Verdict::Less);
  EXPECT_EQ(compare(SubsetOrder{}, keep_chazelle, keep_anderson), Verdict::Incomparable);

  EXPECT_EQ(compare(WeightOrder{test::net_weights()}, test::net_b(), test::net_c()), Verdict::Less);
  EXPECT_EQ(compare(MultisetOrder{test::net_order()}, test::net_b(), test::net_c()), Verdict::Less);
  EXPECT_TRUE(strictly_better_exists_witness(MultisetOrder{test::net_order()}, test::net_b(), test::net_c()));
}

TEST(Compare, PrioritizationMustCover) {
  auto g = test::net();
  Prioritization p{{{NodeFact{"A"}}}};
  EXPECT_THROW(compare(PrioritizedCardinalityOrder{p}, g, g), ParameterMismatch);
  EXPECT_THROW(p.validate(g), ParameterMismatch);
  EXPECT_NO_THROW(Prioritization::trivial(g).validate(g));
  auto twice = Prioritization::trivial(g);
  twice.levels.push_back({NodeFact{"A"}});
  EXPECT_THROW(twice.validate(g), ParameterMismatch);
}

TEST(Compare, MatchesDefinitions) {
  test::Gen gen(31);
  for (int i = 0; i < 300; ++i) {
    auto g = gen.graph(4, 10);
    for (const auto& c : random_criteria(gen, g)) {
      auto a = random_subset(gen, g), b = random_subset(gen, g);
      ASSERT_EQ(compare(c, a, b), ref_verdict(c, a, b)) << criterion_name(c) << "\n" << serialize(a) << serialize(b);
      if (is_total(c)) {
        EXPECT_NE(compare(c, a, b), Verdict::Incomparable);
      }
    }
  }
}

TEST(Compare, Preorder) {
  test::Gen gen(37);
  for (int i = 0; i < 200; ++i) {
    auto g = gen.graph(4, 10);
    for (const auto& c : random_criteria(gen, g)) {
      auto a = random_subset(gen, g), b = random_subset(gen, g), d = random_subset(gen, g);
      EXPECT_EQ(compare(c, a, a), Verdict::Equivalent);
      auto le = [&](const DataGraph& x, const DataGraph& y) {
        auto v = compare(c, x, y);
        return v == Verdict::Less || v == Verdict::Equivalent;
      };
      if (le(a, b) && le(b, d)) {
        EXPECT_TRUE(le(a, d)) << criterion_name(c);
      }
    }
  }
}

TEST(Compare, StrictSubsetIsStrictlyBelow) {
  test::Gen gen(41);
  for (int i = 0; i < 200; ++i) {
    auto g = gen.graph(4, 10);
    auto big = random_subset(gen, g);
    auto fs = facts(big);
    if (fs.empty()) continue;
    // dropping an edge, or an isolated node, keeps the result a subgraph
    std::vector<Fact> drop{fs.back()};
    auto small = delete_facts(big, drop);
    for (auto c : random_criteria(gen, g)) {
      if (auto* w = std::get_if<WeightOrder>(&c)) {
        for (auto& [k, v] : w->weights.label_weights) v += 1;
        for (auto& [k, v] : w->weights.data_weights) v += 1;
      }
      EXPECT_EQ(compare(c, small, big), Verdict::Less) << criterion_name(c);
    }
  }
}

TEST(Compare, TrivialParametersCollapse) {
  test::Gen gen(43);
  for (int i = 0; i < 200; ++i) {
    auto g = gen.graph(4, 10);
    auto p = Prioritization::trivial(g);
    auto a = random_subset(gen, g), b = random_subset(gen, g);
    EXPECT_EQ(compare(PrioritizedSubsetOrder{p}, a, b) == Verdict::Less, compare(SubsetOrder{}, a, b) == Verdict::Less);
    auto card = compare(CardinalityOrder{}, a, b);
    EXPECT_EQ(compare(WeightOrder{WeightFunction::uniform(1)}, a, b), card);
    EXPECT_EQ(compare(PrioritizedCardinalityOrder{p}, a, b), card);
  }
}

TEST(Json, LoadersRoundTrip) {
  auto w = test::net_weights();
  EXPECT_EQ(w.label_weight("low"), 1U);
  EXPECT_EQ(w.label_weight("high"), 3U);
  EXPECT_EQ(w.data_weight("anything"), 20U);
  auto w2 = weights_from_json(weights_to_json(w));
  EXPECT_EQ(w2.label_weights, w.label_weights);
  EXPECT_EQ(w2.default_data, w.default_data);

  auto o = order_from_json(order_to_json(test::net_order()));
  EXPECT_TRUE(o.less("low", "high"));

  Prioritization p{{{NodeFact{"A"}, EdgeFact{"A", "low", "B"}}, {NodeFact{"B"}}}};
  auto p2 = prioritization_from_json(prioritization_to_json(p));
  EXPECT_EQ(p2.levels, p.levels);
  EXPECT_EQ(parse_fact_ref("edge:A:low:B"), Fact(EdgeFact{"A", "low", "B"}));
  EXPECT_THROW(parse_fact_ref("edge:A:B"), FormatError);
  EXPECT_THROW(parse_fact_ref("vertex:A"), FormatError);
}

TEST(Json, LoaderErrors) {
  EXPECT_THROW(weights_from_json(Json::parse(R"({"labels":{"a":-1}})")), FormatError);
  EXPECT_THROW(weights_from_json(Json::parse(R"({"labels":[1]})")), FormatError);
  EXPECT_THROW(prioritization_from_json(Json::parse(R"({"levels":[]})")), FormatError);
  EXPECT_THROW(prioritization_from_json(Json::parse(R"({"levels":[[1]]})")), FormatError);
  EXPECT_THROW(order_from_json(Json::parse(R"({"less":[["a","b"],["b","a"]]})")), OrderCycleError);
  EXPECT_THROW(order_from_json(Json::parse(R"({"less":[["a"]]})")), FormatError);
  EXPECT_THROW(load_weights(test::data_path("missing.json")), IoError);
}
