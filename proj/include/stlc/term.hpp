#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stlc/errors.hpp"
#include "stlc/types.hpp"

namespace stlc {

/// De Bruijn reference: 0 names the innermost enclosing binder.
struct Ref {
  std::size_t index = 0;
  bool operator==(const Ref&) const = default;
};

enum class TermKind { Lam, App, Var };

/// Well-scoped de Bruijn lambda term. Every node caches its simple type.
///
/// Binder and variable names are kept only as printing hints; they take no
/// part in equality.
class Term {
  struct Node;

 public:
  /// `\_:param. body`, typed `param -> type(body)`.
  static Term lam(Ty param, Term body, std::string hint = {});
  /// Application; throws IllTyped unless `fun : A -> B` and `arg : A`.
  static Term app(Term fun, Term arg);
  /// Application with an explicit annotation and no local check. Only for
  /// hand-building ill-typed inputs that `infer_type` must reject.
  static Term app_unchecked(Term fun, Term arg, Ty annotation);
  static Term var(std::size_t index, Ty type, std::string hint = {});

  [[nodiscard]] TermKind kind() const noexcept;
  [[nodiscard]] bool is_lam() const noexcept { return kind() == TermKind::Lam; }
  [[nodiscard]] bool is_app() const noexcept { return kind() == TermKind::App; }
  [[nodiscard]] bool is_var() const noexcept { return kind() == TermKind::Var; }

  [[nodiscard]] const Ty& type() const noexcept;
  /// Bound type of a Lam.
  [[nodiscard]] const Ty& param_type() const;
  [[nodiscard]] const Term& body() const;
  [[nodiscard]] const Term& fun() const;
  [[nodiscard]] const Term& arg() const;
  [[nodiscard]] Ref ref() const;
  [[nodiscard]] const std::string& hint() const noexcept;

  [[nodiscard]] bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  Ty type;
  Ty param;  // Lam only
  Term left;  // Lam body, App function
  Term right;  // App argument
  std::size_t index = 0;  // Var only
  std::string hint;
};

inline Term Term::lam(Ty param, Term body, std::string hint) {
  Ty type = Ty::arrow(param, body.type());
  return Term(std::make_shared<const Node>(
      Node{TermKind::Lam, std::move(type), std::move(param), std::move(body), Term(nullptr), 0,
           std::move(hint)}));
}

inline Term Term::app(Term fun, Term arg) {
  if (!fun.type().is_arrow())
    throw IllTyped("application of non-function type " + to_string(fun.type()));
  if (!(fun.type().domain() == arg.type()))
    throw IllTyped("argument type " + to_string(arg.type()) + " does not match domain " +
                   to_string(fun.type().domain()));
  Ty result = fun.type().codomain();
  return app_unchecked(std::move(fun), std::move(arg), std::move(result));
}

inline Term Term::app_unchecked(Term fun, Term arg, Ty annotation) {
  return Term(std::make_shared<const Node>(Node{TermKind::App, std::move(annotation), Ty(),
                                                std::move(fun), std::move(arg), 0, {}}));
}

inline Term Term::var(std::size_t index, Ty type, std::string hint) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Var, std::move(type), Ty(), Term(nullptr), Term(nullptr), index, std::move(hint)}));
}

inline TermKind Term::kind() const noexcept { return node_->kind; }
inline const Ty& Term::type() const noexcept { return node_->type; }
inline const std::string& Term::hint() const noexcept { return node_->hint; }

inline const Ty& Term::param_type() const {
  if (!is_lam()) throw std::logic_error("param_type of non-Lam term");
  return node_->param;
}
inline const Term& Term::body() const {
  if (!is_lam()) throw std::logic_error("body of non-Lam term");
  return node_->left;
}
inline const Term& Term::fun() const {
  if (!is_app()) throw std::logic_error("fun of non-App term");
  return node_->left;
}
inline const Term& Term::arg() const {
  if (!is_app()) throw std::logic_error("arg of non-App term");
  return node_->right;
}
inline Ref Term::ref() const {
  if (!is_var()) throw std::logic_error("ref of non-Var term");
  return Ref{node_->index};
}

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || !(x.type == y.type)) return false;
  switch (x.kind) {
    case TermKind::Lam:
      return x.param == y.param && x.left == y.left;
    case TermKind::App:
      return x.left == y.left && x.right == y.right;
    case TermKind::Var:
      return x.index == y.index;
  }
  return false;
}

/// Re-derives the type of `term` in `ctx`, checking every cached annotation.
inline Ty infer_type(const Term& term, const Context& ctx) {
  switch (term.kind()) {
    case TermKind::Var: {
      const auto i = term.ref().index;
      if (i >= ctx.size())
        throw IllScoped("variable index " + std::to_string(i) + " out of scope in context of length " +
                        std::to_string(ctx.size()));
      if (!(ctx[i] == term.type()))
        throw IllTyped("variable " + std::to_string(i) + " annotated " + to_string(term.type()) +
                       " but bound at " + to_string(ctx[i]));
      return ctx[i];
    }
    case TermKind::Lam: {
      Context inner;
      inner.reserve(ctx.size() + 1);
      inner.push_back(term.param_type());
      inner.insert(inner.end(), ctx.begin(), ctx.end());
      Ty body = infer_type(term.body(), inner);
      Ty whole = Ty::arrow(term.param_type(), std::move(body));
      if (!(whole == term.type()))
        throw IllTyped("lambda annotated " + to_string(term.type()) + " but has type " + to_string(whole));
      return whole;
    }
    case TermKind::App: {
      Ty f = infer_type(term.fun(), ctx);
      Ty x = infer_type(term.arg(), ctx);
      if (!f.is_arrow()) throw IllTyped("application of non-function type " + to_string(f));
      if (!(f.domain() == x))
        throw IllTyped("argument of type " + to_string(x) + " applied to function expecting " +
                       to_string(f.domain()));
      if (!(f.codomain() == term.type()))
        throw IllTyped("application annotated " + to_string(term.type()) + " but has type " +
                       to_string(f.codomain()));
      return f.codomain();
    }
  }
  throw std::logic_error("unreachable");
}

/// Largest binder nesting inside `term`.
inline std::size_t binder_depth(const Term& term) {
  switch (term.kind()) {
    case TermKind::Lam:
      return 1 + binder_depth(term.body());
    case TermKind::App:
      return std::max(binder_depth(term.fun()), binder_depth(term.arg()));
    case TermKind::Var:
      return 0;
  }
  return 0;
}

inline std::size_t node_count(const Term& term) {
  switch (term.kind()) {
    case TermKind::Lam:
      return 1 + node_count(term.body());
    case TermKind::App:
      return 1 + node_count(term.fun()) + node_count(term.arg());
    case TermKind::Var:
      return 1;
  }
  return 0;
}

/// True when every Var index is below its binder depth plus `outer`.
inline bool well_scoped(const Term& term, std::size_t outer = 0) {
  switch (term.kind()) {
    case TermKind::Lam:
      return well_scoped(term.body(), outer + 1);
    case TermKind::App:
      return well_scoped(term.fun(), outer) && well_scoped(term.arg(), outer);
    case TermKind::Var:
      return term.ref().index < outer;
  }
  return false;
}

namespace detail {

inline bool name_in_use(const std::vector<std::string>& scope, const std::string& name) {
  return std::find(scope.begin(), scope.end(), name) != scope.end();
}

inline std::string fresh_name(const std::vector<std::string>& scope, const std::string& hint) {
  const std::string base = hint.empty() ? "x" : hint;
  if (!name_in_use(scope, base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!name_in_use(scope, candidate)) return candidate;
  }
}

// `scope` holds names innermost-last so push/pop are cheap.
inline void print_term(std::string& out, const Term& t, std::vector<std::string>& scope,
                       bool full_parens) {
  switch (t.kind()) {
    case TermKind::Var: {
      const auto i = t.ref().index;
      if (i < scope.size()) {
        out += scope[scope.size() - 1 - i];
      } else {
        out += t.hint().empty() ? "#" + std::to_string(i - scope.size()) : t.hint();
      }
      return;
    }
    case TermKind::Lam: {
      std::string name = fresh_name(scope, t.hint());
      out += '\\';
      out += name;
      out += ':';
      out += to_string(t.param_type(), full_parens);
      out += ". ";
      scope.push_back(std::move(name));
      print_term(out, t.body(), scope, full_parens);
      scope.pop_back();
      return;
    }
    case TermKind::App: {
      const bool wrap_fun = t.fun().is_lam();
      const bool wrap_arg = full_parens ? t.arg().is_lam() : !t.arg().is_var();
      if (full_parens) out += '(';
      if (wrap_fun) out += '(';
      print_term(out, t.fun(), scope, full_parens);
      if (wrap_fun) out += ')';
      out += ' ';
      if (wrap_arg) out += '(';
      print_term(out, t.arg(), scope, full_parens);
      if (wrap_arg) out += ')';
      if (full_parens) out += ')';
      return;
    }
  }
}

}  // namespace detail

/// Prints a term in surface syntax. `free_names[i]` names de Bruijn index i
/// of the enclosing context; binders are renamed to avoid capture.
inline std::string print_term(const Term& t, const std::vector<std::string>& free_names = {},
                              bool full_parens = false) {
  std::vector<std::string> scope(free_names.rbegin(), free_names.rend());
  std::string out;
  detail::print_term(out, t, scope, full_parens);
  return out;
}

}  // namespace stlc
