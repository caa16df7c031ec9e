// Formulas of the positive modal language, consequence pairs, the text
// grammar and its printer.
//
// Grammar (whitespace insignificant):
//   phi  ::= 'T' | 'F' | ident | phi '&' phi | phi 'v' phi
//          | '[]' phi | '<>' phi | '(' phi ')'
//   pair ::= phi '|-' phi
// Unary operators bind tightest, then '&', then 'v'; binary operators are
// left-associative. `v`, `T` and `F` are reserved and cannot be letters.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "wpml/common.hpp"

namespace wpml {

/// Constructor tags, in the order used by the structural formula ordering.
enum class Op : std::uint8_t { Top, Bot, Letter, And, Or, Box, Dia };

/// Immutable syntax tree with shared subterms. Copying is cheap.
class Formula {
 public:
  static Formula top() { return Formula(make(Op::Top, {}, {}, {})); }
  static Formula bot() { return Formula(make(Op::Bot, {}, {}, {})); }
  static Formula letter(std::string name) {
    if (name.empty()) throw Error(ErrorKind::Validation, "letter names must be nonempty");
    return Formula(make(Op::Letter, std::move(name), {}, {}));
  }
  static Formula conj(const Formula& l, const Formula& r) {
    return Formula(make(Op::And, {}, l, r));
  }
  static Formula disj(const Formula& l, const Formula& r) {
    return Formula(make(Op::Or, {}, l, r));
  }
  static Formula box(const Formula& f) { return Formula(make(Op::Box, {}, f, {})); }
  static Formula dia(const Formula& f) { return Formula(make(Op::Dia, {}, f, {})); }

  /// Default-constructed formula is ⊤.
  Formula() : Formula(top()) {}

  Op op() const { return node_->op; }
  bool is(Op o) const { return node_->op == o; }
  const std::string& name() const { return node_->name; }
  /// Left operand of a binary node, or the operand of a unary node.
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  const Formula& child() const { return *node_->left; }

  /// Number of nodes in the tree.
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    return (a <=> b) == 0;
  }

  /// Structural order: constructor tag, then letter name, then children.
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.op() <=> b.op(); c != 0) return c;
    switch (a.op()) {
      case Op::Top:
      case Op::Bot:
        return std::strong_ordering::equal;
      case Op::Letter:
        return a.name() <=> b.name();
      case Op::Box:
      case Op::Dia:
        return a.child() <=> b.child();
      case Op::And:
      case Op::Or:
        if (auto c = a.left() <=> b.left(); c != 0) return c;
        return a.right() <=> b.right();
    }
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Formula> left;
    std::shared_ptr<const Formula> right;
    std::size_t size = 1;
    std::size_t depth = 0;
    std::size_t hash = 0;
  };

  static std::shared_ptr<const Node> make(Op op, std::string name, std::optional<Formula> l,
                                          std::optional<Formula> r);

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

inline std::shared_ptr<const Formula::Node> Formula::make(Op op, std::string name,
                                                          std::optional<Formula> l,
                                                          std::optional<Formula> r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  std::size_t h = static_cast<std::size_t>(op) * 0x9e3779b97f4a7c15ULL;
  if (op == Op::Letter) h ^= std::hash<std::string>{}(n->name) + 0x7f4a7c15ULL;
  if (l) {
    n->size += l->size();
    n->depth = l->depth() + 1;
    h = (h ^ l->hash()) * 0x100000001b3ULL;
    n->left = std::make_shared<const Formula>(*std::move(l));
  }
  if (r) {
    n->size += r->size();
    n->depth = std::max(n->depth, r->depth() + 1);
    h = (h ^ (r->hash() + 0x51ed27ULL)) * 0x100000001b3ULL;
    n->right = std::make_shared<const Formula>(*std::move(r));
  }
  n->hash = h;
  return n;
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// The judgment lhs ⊴ rhs.
struct ConsequencePair {
  Formula lhs;
  Formula rhs;

  friend bool operator==(const ConsequencePair&, const ConsequencePair&) = default;
  friend auto operator<=>(const ConsequencePair&, const ConsequencePair&) = default;
};

using Substitution = std::map<std::string, Formula>;

// ---------------------------------------------------------------------------
// Queries

inline void collect_letters(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot: return;
    case Op::Letter: out.insert(f.name()); return;
    case Op::Box:
    case Op::Dia: collect_letters(f.child(), out); return;
    case Op::And:
    case Op::Or:
      collect_letters(f.left(), out);
      collect_letters(f.right(), out);
      return;
  }
}

inline std::set<std::string> letters(const Formula& f) {
  std::set<std::string> out;
  collect_letters(f, out);
  return out;
}

inline std::set<std::string> letters(const ConsequencePair& p) {
  std::set<std::string> out;
  collect_letters(p.lhs, out);
  collect_letters(p.rhs, out);
  return out;
}

inline void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.op()) {
    case Op::Box:
    case Op::Dia: collect_subformulas(f.child(), out); return;
    case Op::And:
    case Op::Or:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      return;
    default: return;
  }
}

inline std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  collect_subformulas(f, out);
  return out;
}

inline bool is_modality_free(const Formula& f) {
  switch (f.op()) {
    case Op::Box:
    case Op::Dia: return false;
    case Op::And:
    case Op::Or: return is_modality_free(f.left()) && is_modality_free(f.right());
    default: return true;
  }
}

/// Number of binary and unary connectives.
inline std::size_t connectives(const Formula& f) {
  switch (f.op()) {
    case Op::Box:
    case Op::Dia: return 1 + connectives(f.child());
    case Op::And:
    case Op::Or: return 1 + connectives(f.left()) + connectives(f.right());
    default: return 0;
  }
}

/// Simultaneous substitution; letters outside the map are kept.
inline Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.op()) {
    case Op::Top:
    case Op::Bot: return f;
    case Op::Letter: {
      auto it = s.find(f.name());
      return it == s.end() ? f : it->second;
    }
    case Op::Box: return Formula::box(substitute(f.child(), s));
    case Op::Dia: return Formula::dia(substitute(f.child(), s));
    case Op::And: return Formula::conj(substitute(f.left(), s), substitute(f.right(), s));
    case Op::Or: return Formula::disj(substitute(f.left(), s), substitute(f.right(), s));
  }
  return f;
}

inline ConsequencePair substitute(const ConsequencePair& p, const Substitution& s) {
  return {substitute(p.lhs, s), substitute(p.rhs, s)};
}

/// One-sided matching: extends `s` so that substitute(pattern, s) == f.
/// Every letter of the pattern is a variable.
inline bool match(const Formula& pattern, const Formula& f, Substitution& s) {
  if (pattern.is(Op::Letter)) {
    auto [it, inserted] = s.emplace(pattern.name(), f);
    return inserted || it->second == f;
  }
  if (pattern.op() != f.op()) return false;
  switch (pattern.op()) {
    case Op::Top:
    case Op::Bot: return true;
    case Op::Box:
    case Op::Dia: return match(pattern.child(), f.child(), s);
    case Op::And:
    case Op::Or: return match(pattern.left(), f.left(), s) && match(pattern.right(), f.right(), s);
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Box:
    case Op::Dia: return 3;
    default: return 4;
  }
}

inline void print(const Formula& f, std::string& out) {
  auto sub = [&out](const Formula& g, bool parens) {
    if (parens) out += '(';
    print(g, out);
    if (parens) out += ')';
  };
  const int prec = precedence(f.op());
  switch (f.op()) {
    case Op::Top: out += 'T'; return;
    case Op::Bot: out += 'F'; return;
    case Op::Letter: out += f.name(); return;
    case Op::Box:
    case Op::Dia:
      out += f.is(Op::Box) ? "[]" : "<>";
      sub(f.child(), precedence(f.child().op()) < prec);
      return;
    case Op::And:
    case Op::Or:
      sub(f.left(), precedence(f.left().op()) < prec);
      out += f.is(Op::And) ? " & " : " v ";
      sub(f.right(), precedence(f.right().op()) <= prec);
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

inline std::string to_string(const ConsequencePair& p) {
  return to_string(p.lhs) + " |- " + to_string(p.rhs);
}

// ---------------------------------------------------------------------------
// Parsing

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error(ErrorKind::Parse, "at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula formula() { return disjunction(); }

  bool at_turnstile() {
    skip_ws();
    return text_.substr(pos_, 2) == "|-";
  }

  void expect_turnstile() {
    if (!at_turnstile()) fail("expected '|-'");
    pos_ += 2;
  }

  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    if (end < text_.size() && ident_start(text_[end])) {
      while (end < text_.size() && ident_char(text_[end])) ++end;
    }
    return text_.substr(pos_, end - pos_);
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (peek_ident() == "v") {
      pos_ += 1;
      acc = Formula::disj(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '&') {
        ++pos_;
        acc = Formula::conj(acc, unary());
      } else {
        return acc;
      }
    }
  }

  Formula unary() {
    skip_ws();
    auto rest = text_.substr(pos_);
    if (rest.starts_with("[]")) {
      pos_ += 2;
      return Formula::box(unary());
    }
    if (rest.starts_with("<>")) {
      pos_ += 2;
      return Formula::dia(unary());
    }
    if (rest.starts_with("(")) {
      ++pos_;
      Formula f = disjunction();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    auto id = peek_ident();
    if (id.empty()) fail(pos_ >= text_.size() ? "unexpected end of input" : "expected a formula");
    if (id == "v") fail("'v' is the disjunction operator, not a letter");
    pos_ += id.size();
    if (id == "T") return Formula::top();
    if (id == "F") return Formula::bot();
    return Formula::letter(std::string(id));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  detail::Parser p(text);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

inline ConsequencePair parse_pair(std::string_view text) {
  detail::Parser p(text);
  Formula lhs = p.formula();
  p.expect_turnstile();
  Formula rhs = p.formula();
  p.expect_end();
  return {lhs, rhs};
}

/// Parses either a formula or a pair, depending on whether `|-` occurs.
inline std::variant<Formula, ConsequencePair> parse(std::string_view text) {
  detail::Parser p(text);
  Formula lhs = p.formula();
  if (p.at_turnstile()) {
    p.expect_turnstile();
    Formula rhs = p.formula();
    p.expect_end();
    return ConsequencePair{lhs, rhs};
  }
  p.expect_end();
  return lhs;
}

}  // namespace wpml
