#pragma once

#include <optional>
#include <utility>

#include "stlc/reduction.hpp"

namespace stlc {

/// Navigates from (ctx, c) straight to the next redex, without first
/// plugging `c` back into `ctx`. Agrees with decompose(plug(ctx, c)).
///
/// The subject, `plug(ctx, c)`, is only built when `track_subject` is set.
inline Decomposition refocus(const EvalContext& ctx, const Closed& c, bool track_subject = true) {
  if (!(c.type() == ctx.source()))
    throw IllTyped("refocusing a term of type " + to_string(c.type()) + " in a context expecting " +
                   to_string(ctx.source()));
  std::optional<Closed> subject;
  if (track_subject) subject = plug(ctx, c);

  EvalContext here = ctx;
  Closed cur = c;
  for (;;) {
    if (cur.is_clapp()) {
      here = here.push(cur.arg());
      Closed f = cur.fun();
      cur = std::move(f);
      continue;
    }
    const Term& t = cur.term();
    if (t.is_var()) return Decomposition::redex(Redex::lookup(t, cur.env()), std::move(here), std::move(subject));
    if (t.is_app()) return Decomposition::redex(Redex::rapp(t, cur.env()), std::move(here), std::move(subject));
    if (here.empty()) return Decomposition::value(t, cur.env(), std::move(subject));
    return Decomposition::redex(Redex::beta(t, cur.env(), here.top()), here.pop(), std::move(subject));
  }
}

/// Refocus, contract, repeat. Same step accounting as evaluate_smallstep:
/// one fuel unit and one log record per contraction.
inline EvalResult evaluate_refocus(const Closed& c, std::size_t fuel = kDefaultFuel, const EvalOptions& opts = {}) {
  detail::require_fuel(fuel);
  StepLog log(Machine::Refocus);
  const bool track = opts.check_invariants || opts.verbose_trace;

  EvalContext ctx = EvalContext::empty_at(c.type());
  if (opts.on_focus) opts.on_focus(ctx, c);
  Decomposition d = refocus(ctx, c, track);
  for (;;) {
    if (opts.check_invariants) d.check_subject();
    if (d.is_value()) return EvalResult{make_value(Closed::closure(d.lam(), d.env())), std::move(log)};
    if (log.fuel_used() >= fuel) throw FuelExhausted(fuel, std::move(log));
    log.record(step_kind(d.redex().kind()),
               opts.verbose_trace ? detail::redex_state_json(d) : nlohmann::json(nullptr));
    Closed contractum = contract(d.redex());
    if (opts.check_invariants) detail::check_contraction(d.redex(), contractum);
    EvalContext next_ctx = d.context();
    if (opts.on_focus) opts.on_focus(next_ctx, contractum);
    d = refocus(next_ctx, contractum, track);
  }
}

}  // namespace stlc
