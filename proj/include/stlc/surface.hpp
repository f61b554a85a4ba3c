#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "stlc/errors.hpp"
#include "stlc/types.hpp"

namespace stlc {

/// Named-variable syntax tree as written by the user.
class SurfaceTerm {
 public:
  enum class Kind { Lam, App, Var };

  static SurfaceTerm lam(std::string name, Ty param, SurfaceTerm body, Span span = {}) {
    SurfaceTerm t(Kind::Lam, span);
    t.name_ = std::move(name);
    t.param_ = std::move(param);
    t.left_ = std::make_shared<const SurfaceTerm>(std::move(body));
    return t;
  }
  static SurfaceTerm app(SurfaceTerm fun, SurfaceTerm arg, Span span = {}) {
    SurfaceTerm t(Kind::App, span);
    t.left_ = std::make_shared<const SurfaceTerm>(std::move(fun));
    t.right_ = std::make_shared<const SurfaceTerm>(std::move(arg));
    return t;
  }
  static SurfaceTerm var(std::string name, Span span = {}) {
    SurfaceTerm t(Kind::Var, span);
    t.name_ = std::move(name);
    return t;
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] Span span() const noexcept { return span_; }
  /// Binder name of a Lam, or the variable name of a Var.
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const Ty& param_type() const noexcept { return param_; }
  [[nodiscard]] const SurfaceTerm& body() const { return *left_; }
  [[nodiscard]] const SurfaceTerm& fun() const { return *left_; }
  [[nodiscard]] const SurfaceTerm& arg() const { return *right_; }

  /// Structural equality; spans are ignored.
  friend bool operator==(const SurfaceTerm& a, const SurfaceTerm& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Lam:
        return a.name_ == b.name_ && a.param_ == b.param_ && *a.left_ == *b.left_;
      case Kind::App:
        return *a.left_ == *b.left_ && *a.right_ == *b.right_;
      case Kind::Var:
        return a.name_ == b.name_;
    }
    return false;
  }

 private:
  SurfaceTerm(Kind kind, Span span) : kind_(kind), span_(span) {}

  Kind kind_;
  Span span_;
  std::string name_;
  Ty param_;
  std::shared_ptr<const SurfaceTerm> left_;
  std::shared_ptr<const SurfaceTerm> right_;
};

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  SurfaceTerm parse_all() {
    SurfaceTerm t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected input after term", pos_);
    return t;
  }

 private:
  // term := lambda | atom+ [lambda]
  SurfaceTerm parse_term() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_lambda()) return parse_lambda();
    SurfaceTerm acc = parse_atom();
    for (;;) {
      skip_ws();
      if (at_lambda()) {
        SurfaceTerm last = parse_lambda();
        return SurfaceTerm::app(std::move(acc), std::move(last), Span{start, pos_});
      }
      if (!at_atom_start()) return acc;
      SurfaceTerm next = parse_atom();
      acc = SurfaceTerm::app(std::move(acc), std::move(next), Span{start, pos_});
    }
  }

  SurfaceTerm parse_lambda() {
    const std::size_t start = pos_;
    pos_ += lambda_width();
    skip_ws();
    std::string name = parse_identifier();
    skip_ws();
    expect(':');
    TypeParser tp(text_, pos_);
    Ty param = tp.parse_arrow();
    pos_ = tp.position();
    skip_ws();
    expect('.');
    SurfaceTerm body = parse_term();
    return SurfaceTerm::lam(std::move(name), std::move(param), std::move(body), Span{start, pos_});
  }

  SurfaceTerm parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("expected a term, found end of input", pos_);
    if (text_[pos_] == '(') {
      const std::size_t open = pos_;
      ++pos_;
      SurfaceTerm inner = parse_term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw SyntaxError("expected ')' to match '(' at offset " + std::to_string(open), pos_);
      ++pos_;
      return inner;
    }
    const std::size_t start = pos_;
    std::string name = parse_identifier();
    return SurfaceTerm::var(std::move(name), Span{start, pos_});
  }

  std::string parse_identifier() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) {
      if (pos_ >= text_.size()) throw SyntaxError("expected an identifier, found end of input", pos_);
      throw SyntaxError(std::string("expected an identifier, found '") + text_[pos_] + "'", pos_);
    }
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (pos_ >= text_.size()) throw SyntaxError(std::string("expected '") + c + "', found end of input", pos_);
    if (text_[pos_] != c)
      throw SyntaxError(std::string("expected '") + c + "', found '" + text_[pos_] + "'", pos_);
    ++pos_;
  }

  // Whitespace and `#` line comments.
  void skip_ws() {
    while (pos_ < text_.size()) {
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (std::isspace(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[nodiscard]] bool at_lambda() const { return lambda_width() > 0; }

  // `\` or UTF-8 `λ` (0xCE 0xBB).
  [[nodiscard]] std::size_t lambda_width() const {
    if (pos_ < text_.size() && text_[pos_] == '\\') return 1;
    if (pos_ + 1 < text_.size() && static_cast<unsigned char>(text_[pos_]) == 0xCE &&
        static_cast<unsigned char>(text_[pos_ + 1]) == 0xBB)
      return 2;
    return 0;
  }

  [[nodiscard]] bool at_atom_start() const {
    return pos_ < text_.size() && (text_[pos_] == '(' || is_ident_start(text_[pos_]));
  }

  static bool is_ident_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_';
  }
  static bool is_ident_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '\'';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline void print_surface(std::string& out, const SurfaceTerm& t, bool full_parens) {
  using K = SurfaceTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      out += t.name();
      return;
    case K::Lam:
      out += '\\';
      out += t.name();
      out += ':';
      out += to_string(t.param_type(), full_parens);
      out += ". ";
      print_surface(out, t.body(), full_parens);
      return;
    case K::App: {
      const bool wrap_fun = t.fun().kind() == K::Lam;
      const bool wrap_arg = full_parens ? t.arg().kind() == K::Lam : t.arg().kind() != K::Var;
      if (full_parens) out += '(';
      if (wrap_fun) out += '(';
      print_surface(out, t.fun(), full_parens);
      if (wrap_fun) out += ')';
      out += ' ';
      if (wrap_arg) out += '(';
      print_surface(out, t.arg(), full_parens);
      if (wrap_arg) out += ')';
      if (full_parens) out += ')';
      return;
    }
  }
}

}  // namespace detail

/// Parses `\name:T. body`, left-associative juxtaposition, names and parentheses.
inline SurfaceTerm parse_term(std::string_view text) { return detail::TermParser(text).parse_all(); }

inline std::string print_surface(const SurfaceTerm& t, bool full_parens = false) {
  std::string out;
  detail::print_surface(out, t, full_parens);
  return out;
}

}  // namespace stlc
