// Weighted and multiset repairs of the small network in data/, plus a
// generated QBF instance answered through the repair engine.
//
//   ./network_sample path/to/data

#include <iostream>
#include <string>

#include "gxr/cqa.hpp"
#include "gxr/preferences_json.hpp"
#include "gxr/reductions.hpp"

int main(int argc, char** argv) {
  using namespace gxr;
  std::string dir = argc > 1 ? argv[1] : "data";
  auto g = load_graph(dir + "/net.json");
  auto r = load_constraints(dir + "/net.constraints");
  auto w = load_weights(dir + "/net.weights.json");

  std::cout << "w(G) = " << graph_weight(g, w) << "\n";
  auto best = repair_compute(g, r, WeightOrder{w}, SearchMode::FactLattice);
  std::cout << "weight repair keeps " << graph_weight(best, w) << "\n";

  auto ms = preferred_repairs(g, r, MultisetOrder{load_order(dir + "/net.order.json")}, SearchMode::FactLattice);
  std::cout << ms.repairs.size() << " multiset repairs\n";

  // forall x exists y: (x or y) and (not x or not y)
  QbfInstance q{1, 1, {2, {{1, 2, 2}, {-1, -2, -2}}}};
  auto inst = build_qbf(q, QbfVariant::PosPath);
  bool answer = cqa_enumerate({inst.graph, inst.constraints, inst.query, inst.source, inst.target, inst.criterion}, inst.mode);
  std::cout << "qbf via cqa: " << std::boolalpha << answer << " (oracle " << oracle_qbf(q) << ")\n";
}
