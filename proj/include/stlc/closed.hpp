#pragma once

#include <memory>
#include <string>
#include <unordered_set>
#include <utility>

#include "stlc/errors.hpp"
#include "stlc/plist.hpp"
#include "stlc/term.hpp"

// Closure construction re-checks the term against its environment when
// enabled. On by default in builds without NDEBUG.
#if !defined(STLC_CHECK_CONSTRUCTION)
#if defined(NDEBUG)
#define STLC_CHECK_CONSTRUCTION 0
#else
#define STLC_CHECK_CONSTRUCTION 1
#endif
#endif

namespace stlc {

class Closed;

/// Environment: entry i supplies de Bruijn index i.
using Env = PList<Closed>;

enum class ClosedKind { Closure, Clapp };

/// Closed term: a term paired with an environment for all its free
/// variables, or an application of one closed term to another.
class Closed {
  struct Node;

 public:
  static Closed closure(Term term, Env env);
  /// Builds a closure without the scope/type re-check, for hand-made bad inputs.
  static Closed closure_unchecked(Term term, Env env);
  /// Throws IllTyped unless `fun : A -> B` and `arg : A`.
  static Closed clapp(Closed fun, Closed arg);

  [[nodiscard]] ClosedKind kind() const noexcept;
  [[nodiscard]] bool is_closure() const noexcept { return kind() == ClosedKind::Closure; }
  [[nodiscard]] bool is_clapp() const noexcept { return kind() == ClosedKind::Clapp; }
  [[nodiscard]] const Ty& type() const noexcept;

  [[nodiscard]] const Term& term() const;
  [[nodiscard]] const Env& env() const;
  [[nodiscard]] const Closed& fun() const;
  [[nodiscard]] const Closed& arg() const;

  [[nodiscard]] bool same_node(const Closed& other) const noexcept { return node_ == other.node_; }
  [[nodiscard]] const void* identity() const noexcept { return node_.get(); }

 private:
  explicit Closed(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Closed::Node {
  ClosedKind kind;
  Ty type;
  Term term;
  Env env;
  std::shared_ptr<const Closed> fun;
  std::shared_ptr<const Closed> arg;
};

/// Types of the environment's entries, index 0 first.
inline Context env_context(const Env& env) {
  Context ctx;
  ctx.reserve(env.size());
  for (const Closed& c : env) ctx.push_back(c.type());
  return ctx;
}

inline Closed Closed::closure_unchecked(Term term, Env env) {
  Ty type = term.type();
  return Closed(std::make_shared<const Node>(
      Node{ClosedKind::Closure, std::move(type), std::move(term), std::move(env), nullptr, nullptr}));
}

inline Closed Closed::closure(Term term, Env env) {
#if STLC_CHECK_CONSTRUCTION
  infer_type(term, env_context(env));
#endif
  return closure_unchecked(std::move(term), std::move(env));
}

inline Closed Closed::clapp(Closed fun, Closed arg) {
  if (!fun.type().is_arrow())
    throw IllTyped("closed application of non-function type " + to_string(fun.type()));
  if (!(fun.type().domain() == arg.type()))
    throw IllTyped("closed argument of type " + to_string(arg.type()) + " for domain " +
                   to_string(fun.type().domain()));
  Ty type = fun.type().codomain();
  // Term has no empty state; Clapp nodes reuse a placeholder that is never read.
  static const Term placeholder = Term::var(0, Ty::base());
  return Closed(std::make_shared<const Node>(
      Node{ClosedKind::Clapp, std::move(type), placeholder, Env{},
           std::make_shared<const Closed>(std::move(fun)), std::make_shared<const Closed>(std::move(arg))}));
}

inline ClosedKind Closed::kind() const noexcept { return node_->kind; }
inline const Ty& Closed::type() const noexcept { return node_->type; }

inline const Term& Closed::term() const {
  if (!is_closure()) throw std::logic_error("term of a Clapp");
  return node_->term;
}
inline const Env& Closed::env() const {
  if (!is_closure()) throw std::logic_error("env of a Clapp");
  return node_->env;
}
inline const Closed& Closed::fun() const {
  if (!is_clapp()) throw std::logic_error("fun of a Closure");
  return *node_->fun;
}
inline const Closed& Closed::arg() const {
  if (!is_clapp()) throw std::logic_error("arg of a Closure");
  return *node_->arg;
}

/// Closed lambda expressions are the only values.
inline bool is_val(const Closed& c) { return c.is_closure() && c.term().is_lam(); }

/// A closed term known to satisfy is_val. `make_value` is the only way to build one.
class Value {
 public:
  [[nodiscard]] const Closed& closed() const noexcept { return closed_; }
  [[nodiscard]] const Term& lambda() const { return closed_.term(); }
  [[nodiscard]] const Term& body() const { return closed_.term().body(); }
  [[nodiscard]] const Env& env() const { return closed_.env(); }
  [[nodiscard]] const Ty& type() const noexcept { return closed_.type(); }

 private:
  explicit Value(Closed c) : closed_(std::move(c)) {}
  friend Value make_value(Closed c);
  Closed closed_;
};

inline Value make_value(Closed c) {
  if (!is_val(c)) throw NotAValue("closed term is not a lambda closure");
  return Value(std::move(c));
}

/// Entry `r` of `env`.
inline const Closed& env_lookup(const Env& env, Ref r) {
  if (r.index >= env.size())
    throw IndexOutOfRange("reference " + std::to_string(r.index) + " in environment of length " +
                          std::to_string(env.size()));
  return env.at(r.index);
}

bool closed_equal(const Closed& a, const Closed& b);

inline bool env_equal(const Env& a, const Env& b) {
  if (a.size() != b.size()) return false;
  const Env* x = &a;
  const Env* y = &b;
  while (!x->empty()) {
    if (x->same_cells(*y)) return true;
    if (!closed_equal(x->front(), y->front())) return false;
    x = &x->pop_front();
    y = &y->pop_front();
  }
  return true;
}

/// Structural equality of closed terms, environments included.
inline bool closed_equal(const Closed& a, const Closed& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind() || !(a.type() == b.type())) return false;
  if (a.is_clapp()) return closed_equal(a.fun(), b.fun()) && closed_equal(a.arg(), b.arg());
  return a.term() == b.term() && env_equal(a.env(), b.env());
}

inline bool operator==(const Closed& a, const Closed& b) { return closed_equal(a, b); }
inline bool operator==(const Value& a, const Value& b) { return closed_equal(a.closed(), b.closed()); }

namespace detail {

inline void check_closed(const Closed& c, std::unordered_set<const void*>& seen) {
  if (!seen.insert(c.identity()).second) return;
  if (c.is_clapp()) {
    check_closed(c.fun(), seen);
    check_closed(c.arg(), seen);
    const Ty& f = c.fun().type();
    if (!f.is_arrow() || !(f.domain() == c.arg().type()) || !(f.codomain() == c.type()))
      throw IllTyped("closed application with inconsistent cached types");
    return;
  }
  for (const Closed& entry : c.env()) check_closed(entry, seen);
  const Ty t = infer_type(c.term(), env_context(c.env()));
  if (!(t == c.type())) throw IllTyped("closure annotated " + to_string(c.type()) + " but has type " + to_string(t));
}

}  // namespace detail

/// Recursively re-checks every cached type in `c` against infer_type.
/// Throws IllTyped or IllScoped on the first inconsistency.
inline void check_closed(const Closed& c) {
  std::unordered_set<const void*> seen;
  detail::check_closed(c, seen);
}

inline void check_env(const Env& env) {
  std::unordered_set<const void*> seen;
  for (const Closed& entry : env) detail::check_closed(entry, seen);
}

}  // namespace stlc
