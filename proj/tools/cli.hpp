#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gxr/cqa.hpp"
#include "gxr/eval.hpp"
#include "gxr/graph_json.hpp"
#include "gxr/preferences_json.hpp"
#include "gxr/reductions.hpp"
#include "gxr/repair.hpp"

namespace gxr::cli {

enum Exit : int { Ok = 0, No = 1, Usage = 2, Parse = 3, TooLarge = 4, Unsound = 5 };

struct SearchOptions {
  std::string criterion = "subset";
  std::string prioritization;
  std::string weights;
  std::string order;
  std::string mode = "facts";
  std::size_t max_facts = SearchConfig{}.max_facts;
  std::size_t max_nodes = SearchConfig{}.max_nodes;
  unsigned threads = 0;
};

struct Options {
  std::string format = "text";
  bool quiet = false;
  std::string graph, constraints, candidate, input, out_dir;
  std::string path_expr, node_expr;
  std::string query, source, target;
  bool all = false;
  bool staged = false;
  std::string variant = "pos-path";
  std::string flavor = "weight";
  SearchOptions search;
};

class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

inline void add_search_options(CLI::App* cmd, SearchOptions& s) {
  cmd->add_option("--criterion", s.criterion, "Preference criterion")
      ->check(CLI::IsMember({"subset", "prio-subset", "card", "prio-card", "weight", "multiset"}));
  cmd->add_option("--prioritization", s.prioritization, "Prioritization JSON (prio-subset, prio-card)");
  cmd->add_option("--weights", s.weights, "Weight function JSON (weight)");
  cmd->add_option("--order", s.order, "Label/data order JSON (multiset; default: discrete)");
  cmd->add_option("--mode", s.mode, "Search space")->check(CLI::IsMember({"facts", "node-induced"}));
  cmd->add_option("--max-facts", s.max_facts, "Fact cap for the fact-lattice search");
  cmd->add_option("--max-nodes", s.max_nodes, "Node cap for the node-induced search");
  cmd->add_option("--threads", s.threads, "Worker threads (0: hardware)");
}

inline PreferenceCriterion make_criterion(const SearchOptions& s) {
  const bool prio = s.criterion == "prio-subset" || s.criterion == "prio-card";
  if (prio != !s.prioritization.empty())
    throw UsageError(prio ? "--prioritization is required for " + s.criterion : "--prioritization only applies to prio-subset and prio-card");
  if ((s.criterion == "weight") != !s.weights.empty())
    throw UsageError(s.criterion == "weight" ? "--weights is required for weight" : "--weights only applies to weight");
  if (!s.order.empty() && s.criterion != "multiset") throw UsageError("--order only applies to multiset");
  if (s.criterion == "subset") return SubsetOrder{};
  if (s.criterion == "card") return CardinalityOrder{};
  if (s.criterion == "prio-subset") return PrioritizedSubsetOrder{load_prioritization(s.prioritization)};
  if (s.criterion == "prio-card") return PrioritizedCardinalityOrder{load_prioritization(s.prioritization)};
  if (s.criterion == "weight") return WeightOrder{load_weights(s.weights)};
  return MultisetOrder{s.order.empty() ? LabelOrder{} : load_order(s.order)};
}

inline SearchMode make_mode(const SearchOptions& s) { return s.mode == "facts" ? SearchMode::FactLattice : SearchMode::NodeInduced; }

inline SearchConfig make_config(const SearchOptions& s) { return SearchConfig{s.max_facts, s.max_nodes, s.threads}; }

inline std::string compact(const DataGraph& g) { return graph_to_json(g).dump(); }

inline Json pairs_json(const std::set<std::pair<NodeId, NodeId>>& pairs) {
  Json j = Json::array();
  for (const auto& [a, b] : pairs) j.push_back(Json::array({a, b}));
  return j;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << text;
}

// ---------------------------------------------------------------- commands

inline int cmd_eval(const Options& o, std::ostream& out) {
  if (o.path_expr.empty() == o.node_expr.empty()) throw UsageError("eval needs exactly one of --path or --node");
  auto g = load_graph(o.graph);
  if (!o.path_expr.empty()) {
    auto pairs = eval_path(g, *parse_path(o.path_expr));
    if (o.format == "json") {
      out << Json{{"pairs", pairs_json(pairs)}}.dump() << "\n";
    } else {
      for (const auto& [a, b] : pairs) out << a << " " << b << "\n";
    }
  } else {
    auto nodes = eval_node(g, *parse_node(o.node_expr));
    if (o.format == "json") {
      out << Json{{"nodes", nodes}}.dump() << "\n";
    } else {
      for (const auto& n : nodes) out << n << "\n";
    }
  }
  return Ok;
}

inline int cmd_check(const Options& o, std::ostream& out) {
  auto g = load_graph(o.graph);
  auto r = load_constraints(o.constraints);
  auto rep = is_consistent(g, r);
  if (o.format == "json") {
    Json nv = Json::array(), pv = Json::array();
    for (const auto& [k, id] : rep.node_violations) nv.push_back(Json{{"constraint", k}, {"node", id}});
    for (const auto& [k, a, b] : rep.pair_violations) pv.push_back(Json{{"constraint", k}, {"source", a}, {"target", b}});
    out << Json{{"consistent", rep.consistent}, {"node_violations", nv}, {"pair_violations", pv}}.dump() << "\n";
  } else {
    out << (rep.consistent ? "consistent" : "inconsistent") << "\n";
    if (!o.quiet) {
      for (const auto& [k, id] : rep.node_violations) out << "node " << k << " " << id << "\n";
      for (const auto& [k, a, b] : rep.pair_violations) out << "path " << k << " " << a << " " << b << "\n";
    }
  }
  return rep.consistent ? Ok : No;
}

inline int cmd_repair(const Options& o, std::ostream& out) {
  auto g = load_graph(o.graph);
  auto r = load_constraints(o.constraints);
  auto c = make_criterion(o.search);
  std::vector<DataGraph> reps;
  if (o.all)
    reps = preferred_repairs(g, r, c, make_mode(o.search), make_config(o.search)).repairs;
  else
    reps.push_back(repair_compute(g, r, c, make_mode(o.search), make_config(o.search)));
  if (o.format == "json") {
    Json j{{"criterion", criterion_name(c)}, {"mode", o.search.mode}};
    if (o.all) {
      Json arr = Json::array();
      for (const auto& h : reps) arr.push_back(graph_to_json(h));
      j["repairs"] = std::move(arr);
    } else {
      j["repair"] = graph_to_json(reps.front());
    }
    out << j.dump() << "\n";
  } else {
    for (const auto& h : reps) out << compact(h) << "\n";
  }
  return Ok;
}

inline int cmd_repair_check(const Options& o, std::ostream& out) {
  auto g = load_graph(o.graph);
  auto cand = load_graph(o.candidate);
  auto r = load_constraints(o.constraints);
  bool ok = repair_check(g, cand, r, make_criterion(o.search), make_mode(o.search), make_config(o.search));
  if (o.format == "json")
    out << Json{{"repair", ok}}.dump() << "\n";
  else
    out << (ok ? "true" : "false") << "\n";
  return ok ? Ok : No;
}

inline int cmd_repair_exists(const Options& o, std::ostream& out) {
  auto g = load_graph(o.graph);
  auto r = load_constraints(o.constraints);
  bool ok = repair_exists(g, r, make_criterion(o.search), make_mode(o.search), make_config(o.search));
  if (o.format == "json")
    out << Json{{"exists", ok}}.dump() << "\n";
  else
    out << (ok ? "true" : "false") << "\n";
  return ok ? Ok : No;
}

inline int cmd_cqa(const Options& o, std::ostream& out) {
  if (o.query.empty() == o.node_expr.empty()) throw UsageError("cqa needs exactly one of --query or --node");
  auto g = load_graph(o.graph);
  auto r = load_constraints(o.constraints);
  auto c = make_criterion(o.search);
  auto mode = make_mode(o.search);
  auto cfg = make_config(o.search);

  if (!o.node_expr.empty()) {
    if (!o.source.empty() || !o.target.empty() || o.staged) throw UsageError("--node takes no --source, --target or --staged");
    auto nodes = certain_nodes(g, r, *parse_node(o.node_expr), c, mode, cfg);
    if (o.format == "json")
      out << Json{{"certain_nodes", nodes}}.dump() << "\n";
    else
      for (const auto& n : nodes) out << n << "\n";
    return Ok;
  }
  auto q = parse_path(o.query);
  if (o.source.empty() && o.target.empty()) {
    if (o.staged) throw UsageError("--staged needs --source and --target");
    auto pairs = certain_pairs(g, r, *q, c, mode, cfg);
    if (o.format == "json")
      out << Json{{"certain_pairs", pairs_json(pairs)}}.dump() << "\n";
    else
      for (const auto& [a, b] : pairs) out << a << " " << b << "\n";
    return Ok;
  }
  if (o.source.empty() || o.target.empty()) throw UsageError("--source and --target go together");

  CqaInstance inst{g, r, q, o.source, o.target, c};
  CqaResult res;
  if (o.staged) {
    res.answer = cqa_staged(inst, mode, cfg);
  } else {
    res = cqa_enumerate_detailed(inst, mode, cfg);
  }
  if (o.format == "json") {
    Json j{{"answer", res.answer}};
    if (!o.staged) j["repairs"] = res.repairs;
    if (!o.quiet && res.witness) j["witness"] = graph_to_json(*res.witness);
    out << j.dump() << "\n";
  } else {
    out << (res.answer ? "true" : "false") << "\n";
    if (!o.quiet && res.witness) out << compact(*res.witness) << "\n";
  }
  return res.answer ? Ok : No;
}

inline int cmd_gen(const std::string& kind, const Options& o, std::ostream& out) {
  auto spec = detail::parse_json_text(read_text_file(o.input), "formula");
  ReductionInstance inst;
  if (kind == "qbf") {
    QbfVariant v = o.variant == "pos-path" ? QbfVariant::PosPath
                   : o.variant == "node"   ? QbfVariant::NodeVariant
                                           : QbfVariant::MultisetVariant;
    inst = build_qbf(qbf_from_json(spec), v);
  } else if (kind == "parity") {
    if (!spec.is_object() || !spec.contains("formulas") || !spec["formulas"].is_array())
      throw FormatError("parity: expected {\"formulas\": [...]}");
    std::vector<CnfFormula> fs;
    for (const auto& f : spec["formulas"]) fs.push_back(formula_from_json(f));
    inst = build_parity3sat(fs);
  } else {
    inst = build_lexmax(formula_from_json(spec), o.flavor == "weight" ? LexmaxFlavor::Weight : LexmaxFlavor::PrioritizedCardinality);
  }
  auto manifest = reduction_manifest(inst);
  if (o.out_dir.empty()) {
    Json bundle{{"graph", graph_to_json(inst.graph)}, {"constraints", format_constraints(inst.constraints)}, {"manifest", manifest}};
    out << bundle.dump(2) << "\n";
    return Ok;
  }
  std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "graph.json", serialize(inst.graph));
  write_file(dir / "constraints.txt", format_constraints(inst.constraints));
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  if (o.format == "json")
    out << Json{{"written", Json::array({"graph.json", "constraints.txt", "manifest.json"})}}.dump() << "\n";
  else
    out << (dir / "graph.json").string() << "\n"
        << (dir / "constraints.txt").string() << "\n"
        << (dir / "manifest.json").string() << "\n";
  return Ok;
}

// ---------------------------------------------------------------- driver

inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const InstanceTooLarge*>(&e)) return TooLarge;
  if (dynamic_cast<const ModeUnsound*>(&e)) return Unsound;
  if (dynamic_cast<const ParseError*>(&e)) return Parse;
  return Usage;
}

inline void report(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << Json{{"error", kind}, {"message", message}, {"exit", code}}.dump() << "\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Repairs and consistent query answering for data-graphs under path constraints", "gxr"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--quiet", o.quiet, "Suppress witnesses and violation details");

  auto* eval = app.add_subcommand("eval", "Print the semantics of an expression over a graph");
  eval->add_option("--path", o.path_expr, "Path expression");
  eval->add_option("--node", o.node_expr, "Node expression");
  eval->add_option("graph", o.graph, "Graph JSON")->required();

  auto* check = app.add_subcommand("check", "Consistency report; exit 1 when violated");
  check->add_option("graph", o.graph, "Graph JSON")->required();
  check->add_option("constraints", o.constraints, "Constraint file")->required();

  auto* repair = app.add_subcommand("repair", "Compute a preferred repair (all with --all)");
  repair->add_option("graph", o.graph, "Graph JSON")->required();
  repair->add_option("constraints", o.constraints, "Constraint file")->required();
  repair->add_flag("--all", o.all, "List every preferred repair");
  add_search_options(repair, o.search);

  auto* rcheck = app.add_subcommand("repair-check", "Is the candidate a preferred repair; exit 1 when not");
  rcheck->add_option("graph", o.graph, "Graph JSON")->required();
  rcheck->add_option("candidate", o.candidate, "Candidate subgraph JSON")->required();
  rcheck->add_option("constraints", o.constraints, "Constraint file")->required();
  add_search_options(rcheck, o.search);

  auto* rexists = app.add_subcommand("repair-exists", "Is some preferred repair non-empty; exit 1 when not");
  rexists->add_option("graph", o.graph, "Graph JSON")->required();
  rexists->add_option("constraints", o.constraints, "Constraint file")->required();
  add_search_options(rexists, o.search);

  auto* cqa = app.add_subcommand("cqa", "Certain answers over the preferred repairs");
  cqa->add_option("graph", o.graph, "Graph JSON")->required();
  cqa->add_option("constraints", o.constraints, "Constraint file")->required();
  cqa->add_option("--query", o.query, "Path query");
  cqa->add_option("--node", o.node_expr, "Node query (certain nodes)");
  cqa->add_option("--source", o.source, "Source node id");
  cqa->add_option("--target", o.target, "Target node id");
  cqa->add_flag("--staged", o.staged, "Use the staged optimum search (card, weight, prio-card)");
  add_search_options(cqa, o.search);

  auto* gen = app.add_subcommand("gen", "Generate a reduction instance from a formula file");
  gen->require_subcommand(1);
  auto* gqbf = gen->add_subcommand("qbf", "Forall-exists QBF instance");
  gqbf->add_option("--variant", o.variant, "Constraint variant")->check(CLI::IsMember({"pos-path", "node", "multiset"}));
  auto* gpar = gen->add_subcommand("parity", "Parity of satisfiable formulas");
  auto* glex = gen->add_subcommand("lexmax", "Lexicographically greatest model");
  glex->add_option("--flavor", o.flavor, "Preference flavor")->check(CLI::IsMember({"weight", "prio-card"}));
  for (auto* g : {gqbf, gpar, glex}) {
    g->add_option("input", o.input, "Formula JSON")->required();
    g->add_option("--out", o.out_dir, "Directory for graph.json, constraints.txt, manifest.json");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    report(err, "UsageError", e.what(), Usage);
    return Usage;
  }

  try {
    if (eval->parsed()) return cmd_eval(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (repair->parsed()) return cmd_repair(o, out);
    if (rcheck->parsed()) return cmd_repair_check(o, out);
    if (rexists->parsed()) return cmd_repair_exists(o, out);
    if (cqa->parsed()) return cmd_cqa(o, out);
    if (gqbf->parsed()) return cmd_gen("qbf", o, out);
    if (gpar->parsed()) return cmd_gen("parity", o, out);
    if (glex->parsed()) return cmd_gen("lexmax", o, out);
  } catch (const Error& e) {
    int code = exit_code_for(e);
    report(err, e.kind(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report(err, "InternalError", e.what(), Usage);
    return Usage;
  }
  return Usage;
}

}  // namespace gxr::cli
