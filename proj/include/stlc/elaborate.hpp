#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stlc/errors.hpp"
#include "stlc/surface.hpp"
#include "stlc/term.hpp"

namespace stlc {

struct NamedBinding {
  std::string name;
  Ty type;
};

/// Named typing context, innermost binder first.
using NamedContext = std::vector<NamedBinding>;

namespace detail {

// `scope` holds bindings innermost-last.
inline Term elaborate(const SurfaceTerm& s, std::vector<NamedBinding>& scope) {
  using K = SurfaceTerm::Kind;
  switch (s.kind()) {
    case K::Var: {
      for (std::size_t i = 0; i < scope.size(); ++i) {
        const auto& b = scope[scope.size() - 1 - i];
        if (b.name == s.name()) return Term::var(i, b.type, s.name());
      }
      throw UnboundVariable(s.name(), s.span());
    }
    case K::Lam: {
      scope.push_back(NamedBinding{s.name(), s.param_type()});
      Term body = elaborate(s.body(), scope);
      scope.pop_back();
      return Term::lam(s.param_type(), std::move(body), s.name());
    }
    case K::App: {
      Term fun = elaborate(s.fun(), scope);
      Term arg = elaborate(s.arg(), scope);
      if (!fun.type().is_arrow()) throw NonArrowApplication(to_string(fun.type()), s.fun().span());
      if (!(fun.type().domain() == arg.type()))
        throw TypeMismatch(to_string(fun.type().domain()), to_string(arg.type()), s.arg().span());
      return Term::app(std::move(fun), std::move(arg));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Resolves names to de Bruijn indices (innermost binder wins) and checks types.
inline Term elaborate(const SurfaceTerm& surface, const NamedContext& ctx = {}) {
  std::vector<NamedBinding> scope(ctx.rbegin(), ctx.rend());
  return detail::elaborate(surface, scope);
}

/// Parses and elaborates a closed term.
inline Term parse_closed_term(std::string_view text) { return elaborate(parse_term(text)); }

}  // namespace stlc
