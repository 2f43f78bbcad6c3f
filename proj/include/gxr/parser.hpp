#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "gxr/ast.hpp"
#include "gxr/error.hpp"

namespace gxr {

namespace detail {

enum class Tok : std::uint8_t {
  End,
  Ident,
  String,
  Nat,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Slash,
  Bar,
  BarBar,
  Amp,
  AmpAmp,
  Star,
  Caret,
  Bang,
  BangEq,
  Eq,
  Lt,
  Gt,
  Tilde,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const noexcept { return cur_; }

  Token next() {
    Token t = std::move(cur_);
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\n' || src_[i_] == '\r')) ++i_;
    cur_ = Token{Tok::End, {}, i_};
    if (i_ >= src_.size()) return;
    char c = src_[i_];
    auto two = [&](char second) { return i_ + 1 < src_.size() && src_[i_ + 1] == second; };
    auto single = [&](Tok k, std::size_t len = 1) {
      cur_.kind = k;
      cur_.text = std::string(src_.substr(i_, len));
      i_ += len;
    };
    if (is_ident_start(c)) {
      std::size_t j = i_ + 1;
      while (j < src_.size() && (is_ident_start(src_[j]) || (src_[j] >= '0' && src_[j] <= '9'))) ++j;
      cur_.kind = Tok::Ident;
      cur_.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i_;
      while (j < src_.size() && src_[j] >= '0' && src_[j] <= '9') ++j;
      cur_.kind = Tok::Nat;
      cur_.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    switch (c) {
      case '"': lex_string(); return;
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '[': single(Tok::LBracket); return;
      case ']': single(Tok::RBracket); return;
      case '{': single(Tok::LBrace); return;
      case '}': single(Tok::RBrace); return;
      case ',': single(Tok::Comma); return;
      case '/': single(Tok::Slash); return;
      case '*': single(Tok::Star); return;
      case '^': single(Tok::Caret); return;
      case '=': single(Tok::Eq); return;
      case '<': single(Tok::Lt); return;
      case '>': single(Tok::Gt); return;
      case '~': single(Tok::Tilde); return;
      case '|': two('|') ? single(Tok::BarBar, 2) : single(Tok::Bar); return;
      case '&': two('&') ? single(Tok::AmpAmp, 2) : single(Tok::Amp); return;
      case '!': two('=') ? single(Tok::BangEq, 2) : single(Tok::Bang); return;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", i_);
    }
  }

  void lex_string() {
    std::size_t start = i_++;
    std::string value;
    while (true) {
      if (i_ >= src_.size()) throw SyntaxError("unterminated string", start);
      char c = src_[i_++];
      if (c == '"') break;
      if (c == '\\') {
        if (i_ >= src_.size()) throw SyntaxError("unterminated string", start);
        char e = src_[i_++];
        value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
      } else {
        value += c;
      }
    }
    cur_.kind = Tok::String;
    cur_.text = std::move(value);
  }

  static bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }

  std::string_view src_;
  std::size_t i_ = 0;
  Token cur_;
};

/// Recursive descent over the grammar
///   path    := inter ('|' inter)*
///   inter   := concat ('&' concat)*
///   concat  := postfix ('/' postfix)*
///   postfix := atom ('*' | '{' NAT ',' NAT '}')*
///   atom    := '()' | '_' | LABEL | '^' LABEL | '[' node ']' | '!' atom | '(' path ')'
///   node    := nand ('||' nand)*
///   nand    := nunary ('&&' nunary)*
///   nunary  := '~' nunary | 'data' '=' STRING | 'data' '!=' STRING
///            | '<' path '>' | '<' path '=' path '>' | '<' path '!=' path '>' | '(' node ')'
class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  PathPtr whole_path() {
    auto p = path_expr();
    expect(Tok::End, "end of input");
    return p;
  }

  NodePtr whole_node() {
    auto n = node_expr();
    expect(Tok::End, "end of input");
    return n;
  }

 private:
  PathPtr path_expr() {
    auto lhs = inter();
    while (accept(Tok::Bar)) lhs = path::alt(lhs, inter());
    return lhs;
  }

  PathPtr inter() {
    auto lhs = concat();
    while (accept(Tok::Amp)) lhs = path::meet(lhs, concat());
    return lhs;
  }

  PathPtr concat() {
    auto lhs = postfix();
    while (accept(Tok::Slash)) lhs = path::concat(lhs, postfix());
    return lhs;
  }

  PathPtr postfix() {
    auto e = atom();
    while (true) {
      if (accept(Tok::Star)) {
        e = path::star(e);
      } else if (lex_.peek().kind == Tok::LBrace) {
        std::size_t at = lex_.next().pos;
        auto lo = nat();
        expect(Tok::Comma, "','");
        auto hi = nat();
        expect(Tok::RBrace, "'}'");
        if (lo > hi)
          throw RepeatBoundsError("repeat bounds {" + std::to_string(lo) + "," + std::to_string(hi) +
                                  "} have n > m at offset " + std::to_string(at));
        e = path::repeat(e, lo, hi);
      } else {
        return e;
      }
    }
  }

  PathPtr atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.next();
        if (accept(Tok::RParen)) return path::epsilon();
        auto inner = path_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        Token id = lex_.next();
        if (id.text == "_") return path::wildcard();
        if (id.text == "data") throw SyntaxError("'data' is reserved and cannot be used as a label", id.pos);
        return path::label(id.text);
      }
      case Tok::Caret: {
        lex_.next();
        return path::inverse(label("label after '^'"));
      }
      case Tok::LBracket: {
        lex_.next();
        auto test = node_expr();
        expect(Tok::RBracket, "']'");
        return path::test(test);
      }
      case Tok::Bang: lex_.next(); return path::complement(atom());
      default: throw SyntaxError("expected a path expression", t.pos);
    }
  }

  NodePtr node_expr() {
    auto lhs = nand();
    while (accept(Tok::BarBar)) lhs = node::disj(lhs, nand());
    return lhs;
  }

  NodePtr nand() {
    auto lhs = nunary();
    while (accept(Tok::AmpAmp)) lhs = node::conj(lhs, nunary());
    return lhs;
  }

  NodePtr nunary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Tilde: lex_.next(); return node::negate(nunary());
      case Tok::LParen: {
        lex_.next();
        auto inner = node_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Lt: {
        lex_.next();
        auto lhs = path_expr();
        if (accept(Tok::Gt)) return node::has(lhs);
        bool equal = false;
        if (accept(Tok::Eq)) {
          equal = true;
        } else {
          expect(Tok::BangEq, "'>', '=' or '!='");
        }
        auto rhs = path_expr();
        expect(Tok::Gt, "'>'");
        return equal ? node::eq(lhs, rhs) : node::neq(lhs, rhs);
      }
      case Tok::Ident:
        if (t.text == "data") {
          lex_.next();
          if (accept(Tok::Eq)) return node::data_eq(string_lit());
          expect(Tok::BangEq, "'=' or '!=' after 'data'");
          return node::data_neq(string_lit());
        }
        [[fallthrough]];
      default: throw SyntaxError("expected a node expression", t.pos);
    }
  }

  std::string label(const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident || t.text == "_" || t.text == "data") throw SyntaxError(std::string("expected ") + what, t.pos);
    return lex_.next().text;
  }

  std::string string_lit() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::String) throw SyntaxError("expected a string literal", t.pos);
    return lex_.next().text;
  }

  std::uint32_t nat() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Nat) throw SyntaxError("expected a natural number", t.pos);
    constexpr std::uint64_t kMax = std::numeric_limits<std::int32_t>::max();
    if (t.text.size() > 10 || std::stoull(t.text) > kMax) throw SyntaxError("repeat bound exceeds 2^31-1", t.pos);
    return static_cast<std::uint32_t>(std::stoull(lex_.next().text));
  }

  bool accept(Tok k) {
    if (lex_.peek().kind != k) return false;
    lex_.next();
    return true;
  }

  void expect(Tok k, const char* what) {
    if (!accept(k)) throw SyntaxError(std::string("expected ") + what, lex_.peek().pos);
  }

  Lexer lex_;
};

}  // namespace detail

/// Throws SyntaxError or RepeatBoundsError.
inline PathPtr parse_path(std::string_view src) { return detail::Parser(src).whole_path(); }

/// Throws SyntaxError or RepeatBoundsError.
inline NodePtr parse_node(std::string_view src) { return detail::Parser(src).whole_node(); }

}  // namespace gxr
