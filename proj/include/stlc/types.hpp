#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stlc/errors.hpp"

namespace stlc {

/// Simple type: the base type `o` or an arrow between two types.
class Ty {
  struct Node;

 public:
  /// The base type.
  Ty() = default;

  static Ty base() { return Ty(); }
  static Ty arrow(Ty domain, Ty codomain);

  [[nodiscard]] bool is_base() const noexcept { return node_ == nullptr; }
  [[nodiscard]] bool is_arrow() const noexcept { return node_ != nullptr; }

  [[nodiscard]] const Ty& domain() const;
  [[nodiscard]] const Ty& codomain() const;

  friend bool operator==(const Ty& a, const Ty& b);

  /// Number of arrows along the right spine: `a -> b -> o` has arity 2.
  [[nodiscard]] std::size_t arity() const {
    std::size_t n = 0;
    for (const Ty* t = this; t->is_arrow(); t = &t->codomain()) ++n;
    return n;
  }

 private:
  std::shared_ptr<const Node> node_;
};

struct Ty::Node {
  Ty domain;
  Ty codomain;
};

inline Ty Ty::arrow(Ty domain, Ty codomain) {
  Ty t;
  t.node_ = std::make_shared<const Node>(Node{std::move(domain), std::move(codomain)});
  return t;
}

inline const Ty& Ty::domain() const {
  if (!node_) throw IllTyped("domain of base type");
  return node_->domain;
}

inline const Ty& Ty::codomain() const {
  if (!node_) throw IllTyped("codomain of base type");
  return node_->codomain;
}

inline bool operator==(const Ty& a, const Ty& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->domain == b.node_->domain && a.node_->codomain == b.node_->codomain;
}

/// Typing context, innermost binder first.
using Context = std::vector<Ty>;

namespace detail {

inline void print_type(std::string& out, const Ty& t, bool parenthesize_arrow, bool full_parens) {
  if (t.is_base()) {
    out += 'o';
    return;
  }
  const bool wrap = parenthesize_arrow || full_parens;
  if (wrap) out += '(';
  print_type(out, t.domain(), true, full_parens);
  out += " -> ";
  print_type(out, t.codomain(), false, full_parens);
  if (wrap) out += ')';
}

class TypeParser {
 public:
  TypeParser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  Ty parse_arrow() {
    Ty lhs = parse_atom();
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return Ty::arrow(std::move(lhs), parse_arrow());
    }
    return lhs;
  }

  [[nodiscard]] std::size_t position() const { return pos_; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

 private:
  Ty parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("expected a type, found end of input", pos_);
    const char c = text_[pos_];
    if (c == 'o' && !continues_identifier(pos_ + 1)) {
      ++pos_;
      return Ty::base();
    }
    if (c == '(') {
      ++pos_;
      Ty inner = parse_arrow();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw SyntaxError("expected ')' to close type", pos_);
      ++pos_;
      return inner;
    }
    throw SyntaxError(std::string("expected a type, found '") + c + "'", pos_);
  }

  [[nodiscard]] bool continues_identifier(std::size_t i) const {
    if (i >= text_.size()) return false;
    const auto ch = static_cast<unsigned char>(text_[i]);
    return std::isalnum(ch) || ch == '_' || ch == '\'';
  }

  std::string_view text_;
  std::size_t pos_;
};

}  // namespace detail

/// Renders a type. Arrows associate to the right; `full_parens` wraps every arrow.
inline std::string to_string(const Ty& t, bool full_parens = false) {
  std::string out;
  detail::print_type(out, t, false, full_parens);
  return out;
}

/// Parses `o | T -> T | ( T )` with `->` right-associative.
inline Ty parse_type(std::string_view text) {
  detail::TypeParser p(text, 0);
  Ty t = p.parse_arrow();
  p.skip_ws();
  if (p.position() != text.size()) throw SyntaxError("unexpected trailing input in type", p.position());
  return t;
}

}  // namespace stlc
