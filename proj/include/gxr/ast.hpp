#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "gxr/graph.hpp"

namespace gxr {

struct PathExpr;
struct NodeExpr;
using PathPtr = std::shared_ptr<const PathExpr>;
using NodePtr = std::shared_ptr<const NodeExpr>;

enum class PathKind : std::uint8_t {
  Epsilon,
  Wildcard,
  Forward,
  Backward,
  NodeTest,
  Concat,
  Union,
  Intersect,
  Star,
  Complement,
  Repeat,
};

enum class NodeKind : std::uint8_t { Not, And, Or, DataEq, DataNeq, HasPath, EqTest, NeqTest };

/// Path expression tree node. Which fields are meaningful depends on `kind`:
/// `label` for Forward/Backward, `test` for NodeTest, `lhs` for every
/// operator, `rhs` for the binary ones and `min`/`max` for Repeat.
struct PathExpr {
  PathKind kind = PathKind::Epsilon;
  EdgeLabel label{};
  NodePtr test{};
  PathPtr lhs{};
  PathPtr rhs{};
  std::uint32_t min = 0;
  std::uint32_t max = 0;
};

/// Node expression tree node. `value` for DataEq/DataNeq, `lhs`/`rhs` for
/// Not/And/Or, `path`/`other` for HasPath/EqTest/NeqTest.
struct NodeExpr {
  NodeKind kind = NodeKind::DataEq;
  DataValue value{};
  NodePtr lhs{};
  NodePtr rhs{};
  PathPtr path{};
  PathPtr other{};
};

namespace path {

inline PathPtr make(PathExpr e) { return std::make_shared<const PathExpr>(std::move(e)); }

inline PathPtr epsilon() { return make({.kind = PathKind::Epsilon}); }
inline PathPtr wildcard() { return make({.kind = PathKind::Wildcard}); }
inline PathPtr label(EdgeLabel l) { return make({.kind = PathKind::Forward, .label = std::move(l)}); }
inline PathPtr inverse(EdgeLabel l) { return make({.kind = PathKind::Backward, .label = std::move(l)}); }
inline PathPtr test(NodePtr n) { return make({.kind = PathKind::NodeTest, .test = std::move(n)}); }
inline PathPtr concat(PathPtr a, PathPtr b) {
  return make({.kind = PathKind::Concat, .lhs = std::move(a), .rhs = std::move(b)});
}
inline PathPtr alt(PathPtr a, PathPtr b) {
  return make({.kind = PathKind::Union, .lhs = std::move(a), .rhs = std::move(b)});
}
inline PathPtr meet(PathPtr a, PathPtr b) {
  return make({.kind = PathKind::Intersect, .lhs = std::move(a), .rhs = std::move(b)});
}
inline PathPtr star(PathPtr a) { return make({.kind = PathKind::Star, .lhs = std::move(a)}); }
inline PathPtr complement(PathPtr a) { return make({.kind = PathKind::Complement, .lhs = std::move(a)}); }
/// Throws RepeatBoundsError when lo > hi.
inline PathPtr repeat(PathPtr a, std::uint32_t lo, std::uint32_t hi) {
  if (lo > hi)
    throw RepeatBoundsError("repeat bounds {" + std::to_string(lo) + "," + std::to_string(hi) + "} have n > m");
  return make({.kind = PathKind::Repeat, .lhs = std::move(a), .min = lo, .max = hi});
}

}  // namespace path

namespace node {

inline NodePtr make(NodeExpr e) { return std::make_shared<const NodeExpr>(std::move(e)); }

inline NodePtr negate(NodePtr a) { return make({.kind = NodeKind::Not, .lhs = std::move(a)}); }
inline NodePtr conj(NodePtr a, NodePtr b) {
  return make({.kind = NodeKind::And, .lhs = std::move(a), .rhs = std::move(b)});
}
inline NodePtr disj(NodePtr a, NodePtr b) {
  return make({.kind = NodeKind::Or, .lhs = std::move(a), .rhs = std::move(b)});
}
inline NodePtr data_eq(DataValue c) { return make({.kind = NodeKind::DataEq, .value = std::move(c)}); }
inline NodePtr data_neq(DataValue c) { return make({.kind = NodeKind::DataNeq, .value = std::move(c)}); }
inline NodePtr has(PathPtr a) { return make({.kind = NodeKind::HasPath, .path = std::move(a)}); }
inline NodePtr eq(PathPtr a, PathPtr b) {
  return make({.kind = NodeKind::EqTest, .path = std::move(a), .other = std::move(b)});
}
inline NodePtr neq(PathPtr a, PathPtr b) {
  return make({.kind = NodeKind::NeqTest, .path = std::move(a), .other = std::move(b)});
}
/// `premise ⊃ conclusion`, i.e. conclusion ∨ ¬premise.
inline NodePtr implies(NodePtr premise, NodePtr conclusion) {
  return disj(std::move(conclusion), negate(std::move(premise)));
}

}  // namespace node

bool operator==(const PathExpr& a, const PathExpr& b);
bool operator==(const NodeExpr& a, const NodeExpr& b);

namespace detail {
template <class T>
bool deep_equal(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}
}  // namespace detail

inline bool operator==(const PathExpr& a, const PathExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PathKind::Epsilon:
    case PathKind::Wildcard:
      return true;
    case PathKind::Forward:
    case PathKind::Backward:
      return a.label == b.label;
    case PathKind::NodeTest:
      return detail::deep_equal(a.test, b.test);
    case PathKind::Concat:
    case PathKind::Union:
    case PathKind::Intersect:
      return detail::deep_equal(a.lhs, b.lhs) && detail::deep_equal(a.rhs, b.rhs);
    case PathKind::Star:
    case PathKind::Complement:
      return detail::deep_equal(a.lhs, b.lhs);
    case PathKind::Repeat:
      return a.min == b.min && a.max == b.max && detail::deep_equal(a.lhs, b.lhs);
  }
  return false;
}

inline bool operator==(const NodeExpr& a, const NodeExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Not:
      return detail::deep_equal(a.lhs, b.lhs);
    case NodeKind::And:
    case NodeKind::Or:
      return detail::deep_equal(a.lhs, b.lhs) && detail::deep_equal(a.rhs, b.rhs);
    case NodeKind::DataEq:
    case NodeKind::DataNeq:
      return a.value == b.value;
    case NodeKind::HasPath:
      return detail::deep_equal(a.path, b.path);
    case NodeKind::EqTest:
    case NodeKind::NeqTest:
      return detail::deep_equal(a.path, b.path) && detail::deep_equal(a.other, b.other);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fragments

/// NodePos is the bottom; Node and Pos are incomparable; Full is the top.
enum class Fragment : std::uint8_t { NodePos, Node, Pos, Full };

inline const char* to_string(Fragment f) noexcept {
  switch (f) {
    case Fragment::NodePos: return "node-pos";
    case Fragment::Node: return "node";
    case Fragment::Pos: return "pos";
    case Fragment::Full: return "full";
  }
  return "?";
}

inline Fragment join(Fragment a, Fragment b) noexcept {
  bool node_only = (a == Fragment::NodePos || a == Fragment::Node) && (b == Fragment::NodePos || b == Fragment::Node);
  bool positive = (a == Fragment::NodePos || a == Fragment::Pos) && (b == Fragment::NodePos || b == Fragment::Pos);
  if (node_only) return positive ? Fragment::NodePos : Fragment::Node;
  return positive ? Fragment::Pos : Fragment::Full;
}

inline bool is_positive(const NodeExpr& e);

/// No Complement and no Not anywhere, including nested node tests.
inline bool is_positive(const PathExpr& e) {
  switch (e.kind) {
    case PathKind::Complement: return false;
    case PathKind::NodeTest: return is_positive(*e.test);
    case PathKind::Concat:
    case PathKind::Union:
    case PathKind::Intersect: return is_positive(*e.lhs) && is_positive(*e.rhs);
    case PathKind::Star:
    case PathKind::Repeat: return is_positive(*e.lhs);
    default: return true;
  }
}

inline bool is_positive(const NodeExpr& e) {
  switch (e.kind) {
    case NodeKind::Not: return false;
    case NodeKind::And:
    case NodeKind::Or: return is_positive(*e.lhs) && is_positive(*e.rhs);
    case NodeKind::HasPath: return is_positive(*e.path);
    case NodeKind::EqTest:
    case NodeKind::NeqTest: return is_positive(*e.path) && is_positive(*e.other);
    default: return true;
  }
}

inline Fragment classify(const PathExpr& e) { return is_positive(e) ? Fragment::Pos : Fragment::Full; }
inline Fragment classify(const NodeExpr& e) { return is_positive(e) ? Fragment::NodePos : Fragment::Node; }

/// α ↦ ¬⟨ᾱ⟩: the node expression that holds everywhere exactly when α
/// relates every ordered pair.
inline NodePtr to_node_constraint(PathPtr alpha) { return node::negate(node::has(path::complement(std::move(alpha)))); }

/// Recognises the shape produced by to_node_constraint; returns the inner α.
inline PathPtr as_path_constraint(const NodeExpr& e) {
  if (e.kind == NodeKind::Not && e.lhs->kind == NodeKind::HasPath && e.lhs->path->kind == PathKind::Complement)
    return e.lhs->path->lhs;
  return nullptr;
}

inline std::size_t expr_size(const NodeExpr& e);

/// Number of nodes in the parse tree.
inline std::size_t expr_size(const PathExpr& e) {
  std::size_t s = 1;
  if (e.test) s += expr_size(*e.test);
  if (e.lhs) s += expr_size(*e.lhs);
  if (e.rhs) s += expr_size(*e.rhs);
  return s;
}

inline std::size_t expr_size(const NodeExpr& e) {
  std::size_t s = 1;
  if (e.lhs) s += expr_size(*e.lhs);
  if (e.rhs) s += expr_size(*e.rhs);
  if (e.path) s += expr_size(*e.path);
  if (e.other) s += expr_size(*e.other);
  return s;
}

// ---------------------------------------------------------------------------
// Printing in the surface syntax accepted by the parser.

inline std::string to_string(const NodeExpr& e);

namespace detail {

// Precedence levels; a child printed below the level its context needs is
// parenthesised.
enum : int { kUnion = 0, kInter = 1, kConcat = 2, kPostfix = 3, kAtom = 4 };
enum : int { kOr = 0, kAnd = 1, kUnary = 2 };

inline int level(const PathExpr& e) {
  switch (e.kind) {
    case PathKind::Union: return kUnion;
    case PathKind::Intersect: return kInter;
    case PathKind::Concat: return kConcat;
    case PathKind::Star:
    case PathKind::Repeat: return kPostfix;
    default: return kAtom;
  }
}

inline int level(const NodeExpr& e) {
  switch (e.kind) {
    case NodeKind::Or: return kOr;
    case NodeKind::And: return kAnd;
    default: return kUnary;
  }
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

void print(const PathExpr& e, std::string& out);

inline void print_at(const PathExpr& e, int need, std::string& out) {
  if (level(e) < need) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

inline void print(const PathExpr& e, std::string& out) {
  switch (e.kind) {
    case PathKind::Epsilon: out += "()"; break;
    case PathKind::Wildcard: out += "_"; break;
    case PathKind::Forward: out += e.label; break;
    case PathKind::Backward: out += "^" + e.label; break;
    case PathKind::NodeTest: out += "[" + to_string(*e.test) + "]"; break;
    case PathKind::Concat:
      print_at(*e.lhs, kConcat, out);
      out += "/";
      print_at(*e.rhs, kConcat + 1, out);
      break;
    case PathKind::Union:
      print_at(*e.lhs, kUnion, out);
      out += " | ";
      print_at(*e.rhs, kUnion + 1, out);
      break;
    case PathKind::Intersect:
      print_at(*e.lhs, kInter, out);
      out += " & ";
      print_at(*e.rhs, kInter + 1, out);
      break;
    case PathKind::Star:
      print_at(*e.lhs, kPostfix, out);
      out += "*";
      break;
    case PathKind::Repeat:
      print_at(*e.lhs, kPostfix, out);
      out += "{" + std::to_string(e.min) + "," + std::to_string(e.max) + "}";
      break;
    case PathKind::Complement:
      out += "!";
      print_at(*e.lhs, kAtom, out);
      break;
  }
}

inline void print(const NodeExpr& e, std::string& out);

inline void print_at(const NodeExpr& e, int need, std::string& out) {
  if (level(e) < need) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

inline void print(const NodeExpr& e, std::string& out) {
  switch (e.kind) {
    case NodeKind::Not:
      out += "~";
      print_at(*e.lhs, kUnary, out);
      break;
    case NodeKind::And:
      print_at(*e.lhs, kAnd, out);
      out += " && ";
      print_at(*e.rhs, kAnd + 1, out);
      break;
    case NodeKind::Or:
      print_at(*e.lhs, kOr, out);
      out += " || ";
      print_at(*e.rhs, kOr + 1, out);
      break;
    case NodeKind::DataEq: out += "data = " + quote(e.value); break;
    case NodeKind::DataNeq: out += "data != " + quote(e.value); break;
    case NodeKind::HasPath:
      out += "<";
      print(*e.path, out);
      out += ">";
      break;
    case NodeKind::EqTest:
    case NodeKind::NeqTest:
      out += "<";
      print(*e.path, out);
      out += e.kind == NodeKind::EqTest ? " = " : " != ";
      print(*e.other, out);
      out += ">";
      break;
  }
}

}  // namespace detail

inline std::string to_string(const PathExpr& e) {
  std::string out;
  detail::print(e, out);
  return out;
}

inline std::string to_string(const NodeExpr& e) {
  std::string out;
  detail::print(e, out);
  return out;
}

}  // namespace gxr
