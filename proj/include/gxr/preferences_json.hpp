#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gxr/graph_json.hpp"
#include "gxr/preferences.hpp"

namespace gxr {

/// `node:<id>` or `edge:<from>:<label>:<to>`.
inline Fact parse_fact_ref(std::string_view ref) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = ref.find(':', start);
    parts.emplace_back(ref.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 2 && parts[0] == "node" && is_identifier(parts[1])) return NodeFact{parts[1]};
  if (parts.size() == 4 && parts[0] == "edge" && is_identifier(parts[1]) && is_identifier(parts[2]) && is_identifier(parts[3]))
    return EdgeFact{parts[1], parts[2], parts[3]};
  throw FormatError("bad fact reference '" + std::string(ref) + "'");
}

inline Prioritization prioritization_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("levels") || !j["levels"].is_array())
    throw FormatError("prioritization: expected {\"levels\": [[...], ...]}");
  Prioritization p;
  for (const auto& level : j["levels"]) {
    if (!level.is_array()) throw FormatError("prioritization: each level must be an array of fact references");
    auto& out = p.levels.emplace_back();
    for (const auto& ref : level) {
      if (!ref.is_string()) throw FormatError("prioritization: fact references must be strings");
      out.push_back(parse_fact_ref(ref.get<std::string>()));
    }
  }
  if (p.levels.empty()) throw FormatError("prioritization: at least one level is required");
  return p;
}

inline Json prioritization_to_json(const Prioritization& p) {
  Json levels = Json::array();
  for (const auto& level : p.levels) {
    Json refs = Json::array();
    for (const auto& f : level) refs.push_back(to_string(f));
    levels.push_back(std::move(refs));
  }
  return Json{{"levels", std::move(levels)}};
}

namespace detail {

inline void read_weight_map(const Json& j, const char* key, std::map<std::string, std::uint64_t>& out, std::uint64_t& dflt) {
  if (!j.contains(key)) return;
  const auto& m = j[key];
  if (!m.is_object()) throw FormatError(std::string("weights: '") + key + "' must be an object");
  for (const auto& [name, w] : m.items()) {
    if (!w.is_number_unsigned() && !(w.is_number_integer() && w.get<std::int64_t>() >= 0))
      throw FormatError("weights: weight of '" + name + "' must be a non-negative integer");
    auto value = w.get<std::uint64_t>();
    if (name == "*")
      dflt = value;
    else
      out[name] = value;
  }
}

}  // namespace detail

/// {"labels":{"low":1,"*":0},"data":{"*":20}}; "*" sets the default.
inline WeightFunction weights_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("weights: expected a JSON object");
  WeightFunction w;
  detail::read_weight_map(j, "labels", w.label_weights, w.default_label);
  detail::read_weight_map(j, "data", w.data_weights, w.default_data);
  return w;
}

inline Json weights_to_json(const WeightFunction& w) {
  Json labels = Json::object();
  for (const auto& [k, v] : w.label_weights) labels[k] = v;
  labels["*"] = w.default_label;
  Json data = Json::object();
  for (const auto& [k, v] : w.data_weights) data[k] = v;
  data["*"] = w.default_data;
  return Json{{"labels", std::move(labels)}, {"data", std::move(data)}};
}

/// {"less":[["low","high"], ...]}. Throws OrderCycleError on cycles.
inline LabelOrder order_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("less") || !j["less"].is_array()) throw FormatError("order: expected {\"less\": [[x, y], ...]}");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : j["less"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw FormatError("order: each entry must be a pair of strings");
    pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return LabelOrder(std::move(pairs));
}

inline Json order_to_json(const LabelOrder& o) {
  Json less = Json::array();
  for (const auto& [x, y] : o.generators()) less.push_back(Json::array({x, y}));
  return Json{{"less", std::move(less)}};
}

namespace detail {

inline Json parse_json_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

}  // namespace detail

inline Prioritization load_prioritization(const std::string& path) {
  return prioritization_from_json(detail::parse_json_text(read_text_file(path), "prioritization"));
}
inline WeightFunction load_weights(const std::string& path) {
  return weights_from_json(detail::parse_json_text(read_text_file(path), "weights"));
}
inline LabelOrder load_order(const std::string& path) {
  return order_from_json(detail::parse_json_text(read_text_file(path), "order"));
}

}  // namespace gxr
