#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crq/compound.hpp"

namespace crq {

struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(const std::string& what, int line_, int col_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + what),
        line(line_),
        col(col_) {}
};

struct AmbiguousBar : SyntaxError {
  AmbiguousBar(int line_, int col_)
      : SyntaxError("chained '|' is ambiguous here; parenthesize the intended grouping", line_,
                    col_) {}
};

struct UnsupportedCompound : std::runtime_error {
  explicit UnsupportedCompound(const std::string& what) : std::runtime_error(what) {}
};

// Surface syntax tree. Parentheses group but leave no node behind, so every
// expression has one canonical tree and printing reproduces it exactly.
struct SrcNode;
using SrcPtr = std::shared_ptr<const SrcNode>;

struct SrcNode {
  enum class Kind { Bool, Cond, Conj, Iter };
  Kind kind = Kind::Bool;
  Formula fml;                // Bool
  Formula cons, ante;         // Cond
  std::vector<SrcPtr> items;  // Conj
  SrcPtr lhs, rhs;            // Iter
  int line = 1, col = 1;
};

inline bool equal(const SrcNode& a, const SrcNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SrcNode::Kind::Bool: return structurally_equal(a.fml, b.fml);
    case SrcNode::Kind::Cond:
      return structurally_equal(a.cons, b.cons) && structurally_equal(a.ante, b.ante);
    case SrcNode::Kind::Conj: {
      if (a.items.size() != b.items.size()) return false;
      for (size_t i = 0; i < a.items.size(); ++i)
        if (!equal(*a.items[i], *b.items[i])) return false;
      return true;
    }
    case SrcNode::Kind::Iter: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

namespace dsl_detail {

struct Token {
  enum class Type { Atom, And, Or, Not, True, False, LParen, RParen, Bar, AmpAmp, End };
  Type type;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Token::Type t, std::string text) {
    out.push_back({t, std::move(text), line, col});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '(') {
      push(Token::Type::LParen, "(");
      ++i, ++col;
      continue;
    }
    if (c == ')') {
      push(Token::Type::RParen, ")");
      ++i, ++col;
      continue;
    }
    if (c == '|') {
      push(Token::Type::Bar, "|");
      ++i, ++col;
      continue;
    }
    if (c == '&') {
      if (i + 1 >= src.size() || src[i + 1] != '&')
        throw SyntaxError("single '&'; conjunction of conditionals is spelled '&&'", line, col);
      push(Token::Type::AmpAmp, "&&");
      i += 2;
      col += 2;
      continue;
    }
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
      size_t j = i;
      while (j < src.size() && ((src[j] >= 'A' && src[j] <= 'Z') || (src[j] >= 'a' && src[j] <= 'z') ||
                                (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      Token::Type t = Token::Type::Atom;
      if (word == "and") t = Token::Type::And;
      else if (word == "or") t = Token::Type::Or;
      else if (word == "not") t = Token::Type::Not;
      else if (word == "true") t = Token::Type::True;
      else if (word == "false") t = Token::Type::False;
      push(t, std::move(word));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Token::Type::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  SrcPtr parse() {
    bool bare = false;
    SrcPtr n = parse_top(bare);
    if (peek().type != Token::Type::End)
      throw SyntaxError("expected end of input, found '" + peek().text + "'", peek().line,
                        peek().col);
    return n;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Token::Type t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Token::Type t, const char* what) {
    if (!accept(t))
      throw SyntaxError(std::string("expected ") + what + ", found '" + peek().text + "'",
                        peek().line, peek().col);
  }

  // `bare` reports whether the node's top-level '|' appeared without
  // parentheses, which is what makes a following '|' ambiguous.
  SrcPtr parse_top(bool& bare) {
    bool lhs_bare = false;
    SrcPtr lhs = parse_compound(lhs_bare);
    if (peek().type != Token::Type::Bar) {
      bare = lhs_bare;
      return lhs;
    }
    const Token& bar = peek();
    if (lhs_bare) throw AmbiguousBar(bar.line, bar.col);
    advance();
    bool rhs_bare = false;
    SrcPtr rhs = parse_compound(rhs_bare);
    if (rhs_bare) throw AmbiguousBar(bar.line, bar.col);
    if (peek().type == Token::Type::Bar) throw AmbiguousBar(peek().line, peek().col);
    auto n = std::make_shared<SrcNode>();
    n->line = bar.line;
    n->col = bar.col;
    if (lhs->kind == SrcNode::Kind::Bool && rhs->kind == SrcNode::Kind::Bool) {
      n->kind = SrcNode::Kind::Cond;
      n->cons = lhs->fml;
      n->ante = rhs->fml;
    } else {
      n->kind = SrcNode::Kind::Iter;
      n->lhs = lhs;
      n->rhs = rhs;
    }
    bare = true;
    return n;
  }

  SrcPtr parse_compound(bool& bare) {
    bool item_bare = false;
    std::vector<SrcPtr> items{parse_condexp(item_bare)};
    while (accept(Token::Type::AmpAmp)) {
      item_bare = false;
      items.push_back(parse_condexp(item_bare));
    }
    if (items.size() == 1) {
      bare = item_bare;
      return items[0];
    }
    auto n = std::make_shared<SrcNode>();
    n->kind = SrcNode::Kind::Conj;
    n->line = items[0]->line;
    n->col = items[0]->col;
    n->items = std::move(items);
    bare = item_bare;  // only the last item's bar can collide with a later '|'
    return n;
  }

  SrcPtr parse_condexp(bool& bare) {
    bare = false;
    size_t save = pos_;
    Formula b;
    bool have_bool = try_boolexp(b);
    if (!have_bool) {
      pos_ = save;
      expect(Token::Type::LParen, "'('");
      bool inner_bare = false;
      SrcPtr t = parse_top(inner_bare);
      expect(Token::Type::RParen, "')'");
      return t;  // parentheses shield the inner bar
    }
    const Token& at = toks_[save];
    if (peek().type == Token::Type::Bar) {
      size_t save2 = pos_;
      advance();
      Formula ante;
      if (try_boolexp(ante)) {
        auto n = std::make_shared<SrcNode>();
        n->kind = SrcNode::Kind::Cond;
        n->cons = b;
        n->ante = ante;
        n->line = at.line;
        n->col = at.col;
        bare = true;
        return n;
      }
      pos_ = save2;  // leave the bar for the enclosing level
    }
    auto n = std::make_shared<SrcNode>();
    n->kind = SrcNode::Kind::Bool;
    n->fml = b;
    n->line = at.line;
    n->col = at.col;
    return n;
  }

  bool try_boolexp(Formula& out) {
    size_t save = pos_;
    try {
      out = parse_disj();
      return true;
    } catch (const SyntaxError&) {
      pos_ = save;
      return false;
    }
  }

  Formula parse_disj() {
    Formula f = parse_conj();
    while (accept(Token::Type::Or)) f = Formula::disj(f, parse_conj());
    return f;
  }

  Formula parse_conj() {
    Formula f = parse_lit();
    while (accept(Token::Type::And)) f = Formula::conj(f, parse_lit());
    return f;
  }

  Formula parse_lit() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::Not: advance(); return Formula::negate(parse_lit());
      case Token::Type::Atom: advance(); return Formula::atom(t.text);
      case Token::Type::True: advance(); return Formula::constant(true);
      case Token::Type::False: advance(); return Formula::constant(false);
      case Token::Type::LParen: {
        advance();
        Formula f = parse_disj();
        expect(Token::Type::RParen, "')'");
        return f;
      }
      default:
        throw SyntaxError("expected an event expression, found '" + t.text + "'", t.line, t.col);
    }
  }
};

}  // namespace dsl_detail

inline SrcPtr parse(std::string_view text) { return dsl_detail::Parser(text).parse(); }

inline std::string print(const SrcNode& n) {
  switch (n.kind) {
    case SrcNode::Kind::Bool: return n.fml.str();
    case SrcNode::Kind::Cond: return n.cons.str() + "|" + n.ante.str();
    case SrcNode::Kind::Conj: {
      std::string out;
      for (size_t i = 0; i < n.items.size(); ++i) {
        if (i) out += " && ";
        const SrcNode& it = *n.items[i];
        out += it.kind == SrcNode::Kind::Bool ? print(it) : "(" + print(it) + ")";
      }
      return out;
    }
    case SrcNode::Kind::Iter: {
      auto side = [](const SrcNode& s) {
        return s.kind == SrcNode::Kind::Bool ? print(s) : "(" + print(s) + ")";
      };
      return side(*n.lhs) + "|" + side(*n.rhs);
    }
  }
  return {};
}

inline std::string print(const SrcPtr& n) { return print(*n); }

namespace dsl_detail {

inline ConditionalEvent as_conditional(const SrcNode& n, const char* role) {
  if (n.kind == SrcNode::Kind::Bool) return ConditionalEvent(n.fml);
  if (n.kind == SrcNode::Kind::Cond) return ConditionalEvent(n.cons, n.ante);
  throw UnsupportedCompound(std::string(role) +
                            " must be a plain or conditional event, not a nested compound");
}

}  // namespace dsl_detail

// Maps the surface tree onto the structured compound forms the constructors
// understand. Conjunction lists may hold at most one iterated member (the
// mixed conjunction); deeper nesting has no defined construction.
inline CompoundExpr lower(const SrcNode& n) {
  switch (n.kind) {
    case SrcNode::Kind::Bool: return CompoundExpr::conditional(ConditionalEvent(n.fml));
    case SrcNode::Kind::Cond:
      return CompoundExpr::conditional(ConditionalEvent(n.cons, n.ante));
    case SrcNode::Kind::Conj: {
      std::vector<ConditionalEvent> plain;
      std::vector<const SrcNode*> iters;
      // Conjunction is associative: parenthesized spellings flatten.
      std::vector<const SrcNode*> stack;
      for (auto it = n.items.rbegin(); it != n.items.rend(); ++it) stack.push_back(it->get());
      while (!stack.empty()) {
        const SrcNode* it = stack.back();
        stack.pop_back();
        if (it->kind == SrcNode::Kind::Conj) {
          for (auto sub = it->items.rbegin(); sub != it->items.rend(); ++sub)
            stack.push_back(sub->get());
        } else if (it->kind == SrcNode::Kind::Iter) {
          iters.push_back(it);
        } else {
          plain.push_back(dsl_detail::as_conditional(*it, "a conjunct"));
        }
      }
      if (iters.empty()) return CompoundExpr::conjunction(std::move(plain));
      if (iters.size() == 1 && plain.size() == 1) {
        const SrcNode& it = *iters[0];
        ConditionalEvent target = dsl_detail::as_conditional(*it.lhs, "the iterated consequent");
        std::vector<ConditionalEvent> antecedent;
        if (it.rhs->kind == SrcNode::Kind::Conj) {
          for (const auto& a : it.rhs->items)
            antecedent.push_back(dsl_detail::as_conditional(*a, "an iterated antecedent"));
        } else {
          antecedent.push_back(dsl_detail::as_conditional(*it.rhs, "the iterated antecedent"));
        }
        return CompoundExpr::mixed_conjunction(plain[0], target, std::move(antecedent));
      }
      throw UnsupportedCompound(
          "a conjunction may combine conditionals, or one conditional with one iterated "
          "conditional");
    }
    case SrcNode::Kind::Iter: {
      ConditionalEvent target = dsl_detail::as_conditional(*n.lhs, "the iterated consequent");
      std::vector<ConditionalEvent> antecedent;
      if (n.rhs->kind == SrcNode::Kind::Conj) {
        for (const auto& a : n.rhs->items)
          antecedent.push_back(dsl_detail::as_conditional(*a, "an iterated antecedent"));
      } else {
        antecedent.push_back(dsl_detail::as_conditional(*n.rhs, "the iterated antecedent"));
      }
      return CompoundExpr::iterated(std::move(target), std::move(antecedent));
    }
  }
  throw std::logic_error("unreachable");
}

inline ValueTable elaborate(const SrcNode& n, const std::shared_ptr<const EventSpace>& space,
                            const AssessmentContext& ctx, BuildMode mode = BuildMode::Checked) {
  return build_table(space, lower(n), ctx, mode);
}

}  // namespace crq
