// Repairs and certain answers over the small movie graph in data/.
//
//   ./film_sample path/to/data

#include <iostream>
#include <string>

#include "gxr/cqa.hpp"

int main(int argc, char** argv) {
  using namespace gxr;
  std::string dir = argc > 1 ? argv[1] : "data";
  auto g = load_graph(dir + "/film.json");
  auto r = load_constraints(dir + "/film.psi.constraints");

  auto report = is_consistent(g, r);
  for (const auto& [k, id] : report.node_violations) std::cout << "constraint " << k << " fails at " << id << "\n";

  auto reps = preferred_repairs(g, r, SubsetOrder{}, SearchMode::FactLattice);
  std::cout << reps.repairs.size() << " subset repairs\n";
  for (const auto& h : reps.repairs) {
    std::cout << "  drops:";
    for (const auto& f : facts(g))
      if (!h.contains(f)) std::cout << " " << to_string(f);
    std::cout << "\n";
  }

  auto q = parse_path("directed_by");
  std::cout << "certain directed_by pairs:\n";
  for (const auto& [a, b] : certain_pairs(g, r, *q, SubsetOrder{}, SearchMode::FactLattice))
    std::cout << "  " << a << " -> " << b << "\n";
}
