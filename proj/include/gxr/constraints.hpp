#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gxr/ast.hpp"
#include "gxr/graph_json.hpp"
#include "gxr/parser.hpp"

namespace gxr {

/// R = R_p ∪ R_n. Path constraints must relate every ordered pair of nodes,
/// node constraints must hold at every node.
struct ConstraintSet {
  std::vector<PathPtr> path_constraints;
  std::vector<NodePtr> node_constraints;

  bool empty() const noexcept { return path_constraints.empty() && node_constraints.empty(); }
  std::size_t size() const noexcept { return path_constraints.size() + node_constraints.size(); }

  ConstraintSet& add(PathPtr p) {
    path_constraints.push_back(std::move(p));
    return *this;
  }
  ConstraintSet& add(NodePtr n) {
    node_constraints.push_back(std::move(n));
    return *this;
  }

  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b) {
    auto same = [](const auto& xs, const auto& ys) {
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(*xs[i] == *ys[i])) return false;
      return true;
    };
    return same(a.path_constraints, b.path_constraints) && same(a.node_constraints, b.node_constraints);
  }
};

/// Smallest fragment containing every member. The empty set is NodePos.
inline Fragment classify(const ConstraintSet& r) {
  Fragment f = Fragment::NodePos;
  for (const auto& p : r.path_constraints) f = join(f, classify(*p));
  for (const auto& n : r.node_constraints) f = join(f, classify(*n));
  return f;
}

/// Conservative syntactic test that adding edges between retained nodes can
/// never break consistency. Accepts positive expressions, plus node
/// constraints of the exact shape ~<!α> with α positive (they hold
/// everywhere iff α relates all pairs).
inline bool is_edge_monotone(const ConstraintSet& r) {
  for (const auto& p : r.path_constraints)
    if (!is_positive(*p)) return false;
  for (const auto& n : r.node_constraints) {
    if (is_positive(*n)) continue;
    auto inner = as_path_constraint(*n);
    if (!inner || !is_positive(*inner)) return false;
  }
  return true;
}

namespace detail {

/// Drops a trailing `#` comment, ignoring `#` inside double-quoted strings.
inline std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// One constraint per line: `path: <expr>` or `node: <expr>`. Syntax errors
/// report byte offsets into the whole text.
inline ConstraintSet parse_constraints(std::string_view text) {
  ConstraintSet out;
  std::size_t line_start = 0;
  std::size_t line_no = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    std::string_view raw = text.substr(line_start, line_end - line_start);
    std::string_view body = detail::trim(detail::strip_comment(raw));
    if (!body.empty()) {
      std::size_t colon = body.find(':');
      std::string_view head = colon == std::string_view::npos ? body : detail::trim(body.substr(0, colon));
      std::size_t body_offset = line_start + static_cast<std::size_t>(body.data() - raw.data());
      if (colon == std::string_view::npos || (head != "path" && head != "node"))
        throw SyntaxError("line " + std::to_string(line_no) + ": expected 'path:' or 'node:'", body_offset);
      std::string_view expr = body.substr(colon + 1);
      std::size_t expr_offset = body_offset + colon + 1;
      try {
        if (head == "path")
          out.add(parse_path(expr));
        else
          out.add(parse_node(expr));
      } catch (const SyntaxError& e) {
        throw SyntaxError("line " + std::to_string(line_no) + ": " + e.detail(), expr_offset + e.position());
      }
    }
    if (nl == std::string_view::npos) break;
    line_start = nl + 1;
  }
  return out;
}

inline std::string format_constraints(const ConstraintSet& r) {
  std::string out;
  for (const auto& p : r.path_constraints) out += "path: " + to_string(*p) + "\n";
  for (const auto& n : r.node_constraints) out += "node: " + to_string(*n) + "\n";
  return out;
}

inline ConstraintSet load_constraints(const std::string& path) { return parse_constraints(read_text_file(path)); }

}  // namespace gxr
