#pragma once

#include <functional>
#include <unordered_set>
#include <utility>
#include <variant>

#include "stlc/reduction.hpp"

namespace stlc {

// ---------------------------------------------------------------------------
// Validity: no closed applications anywhere in environments or contexts.

namespace detail {

inline bool valid_env(const Env& env, std::unordered_set<const void*>& seen);

inline bool valid_closure(const Closed& c, std::unordered_set<const void*>& seen) {
  if (c.is_clapp()) return false;
  if (!seen.insert(c.identity()).second) return true;
  return valid_env(c.env(), seen);
}

inline bool valid_env(const Env& env, std::unordered_set<const void*>& seen) {
  for (const Closed& entry : env)
    if (!valid_closure(entry, seen)) return false;
  return true;
}

}  // namespace detail

inline bool is_valid_closure(const Closed& c) {
  std::unordered_set<const void*> seen;
  return detail::valid_closure(c, seen);
}

inline bool is_valid_env(const Env& env) {
  std::unordered_set<const void*> seen;
  return detail::valid_env(env, seen);
}

/// Every ARG frame holds a closure with a valid environment.
inline bool is_valid_context(const EvalContext& ctx) {
  std::unordered_set<const void*> seen;
  for (const Closed& frame : ctx.args())
    if (!detail::valid_closure(frame, seen)) return false;
  return true;
}

/// The Krivine machine's state invariant.
inline bool machine_invariant(const EvalContext& ctx, const Env& env) {
  return is_valid_env(env) && is_valid_context(ctx);
}

/// A closure whose environment, transitively, contains only closures.
class ValidClosure {
 public:
  /// Throws InvalidEnvironment unless `c` is a valid closure.
  static ValidClosure make(Closed c) {
    if (!is_valid_closure(c)) throw InvalidEnvironment("closed term is not a valid closure");
    return ValidClosure(std::move(c));
  }

  [[nodiscard]] const Closed& closed() const noexcept { return closed_; }
  [[nodiscard]] const Term& term() const { return closed_.term(); }
  [[nodiscard]] const Env& env() const { return closed_.env(); }
  /// Typing context of the wrapped term, i.e. the types of its environment.
  [[nodiscard]] Context context() const { return env_context(closed_.env()); }

 private:
  explicit ValidClosure(Closed c) : closed_(std::move(c)) {}
  friend ValidClosure trusted_closure(const Closed& c);
  Closed closed_;
};

/// Wraps a closure whose validity follows from the machine invariant.
/// Only checks that it is not a Clapp.
inline ValidClosure trusted_closure(const Closed& c) {
  if (c.is_clapp()) throw InvalidEnvironment("closed application found where a closure was required");
  return ValidClosure(c);
}

/// Looks up `r` in a valid environment; the result is always a closure.
inline ValidClosure valid_lookup(Ref r, const Env& env) {
  if (r.index >= env.size())
    throw IndexOutOfRange("reference " + std::to_string(r.index) + " in environment of length " +
                          std::to_string(env.size()));
  const Closed& entry = env.at(r.index);
  if (!is_valid_closure(entry)) throw InvalidEnvironment("environment entry is not a valid closure");
  return ValidClosure::make(entry);
}

// ---------------------------------------------------------------------------
// Machine

/// Configuration (term, environment, context). Γ is the environment's
/// context, σ the focus type, τ the context's destination type.
struct MachineState {
  Term focus;
  Env env;
  EvalContext ctx;

  [[nodiscard]] Context gamma() const { return env_context(env); }
  [[nodiscard]] const Ty& focus_type() const noexcept { return focus.type(); }
  [[nodiscard]] const Ty& result_type() const noexcept { return ctx.destination(); }

  friend bool operator==(const MachineState& a, const MachineState& b) {
    return a.focus == b.focus && env_equal(a.env, b.env) && a.ctx == b.ctx;
  }
};

inline MachineState initial_state(const Term& closed_term) {
  return MachineState{closed_term, Env{}, EvalContext::empty_at(closed_term.type())};
}

enum class Transition { Lookup, App, Beta };

inline StepKind step_kind(Transition t) {
  switch (t) {
    case Transition::Lookup:
      return StepKind::Lookup;
    case Transition::App:
      return StepKind::App;
    case Transition::Beta:
      return StepKind::Beta;
  }
  throw std::logic_error("unreachable");
}

struct Continue {
  MachineState next;
  Transition transition;
};

struct Final {
  Value value;
};

using KrivineOutcome = std::variant<Continue, Final>;

/// Throws InvariantViolation unless the state is well typed and satisfies
/// the no-Clapp invariant.
inline void check_state(const MachineState& s) {
  if (!machine_invariant(s.ctx, s.env)) throw InvariantViolation("Krivine state contains a closed application");
  if (!(s.ctx.source() == s.focus.type()))
    throw InvariantViolation("context source type differs from focus type");
  try {
    check_env(s.env);
    for (const Closed& frame : s.ctx.args()) check_closed(frame);
    if (!(infer_type(s.focus, s.gamma()) == s.focus.type()))
      throw InvariantViolation("focus term does not have its cached type");
  } catch (const IllTyped& e) {
    throw InvariantViolation(std::string("ill-typed Krivine state: ") + e.what());
  } catch (const IllScoped& e) {
    throw InvariantViolation(std::string("ill-scoped Krivine state: ") + e.what());
  }
}

/// One transition. Variables are looked up, applications push their
/// argument closure, and a lambda either consumes the top argument or, with
/// an empty context, is the final value.
inline KrivineOutcome krivine_step(const MachineState& s) {
  const Term& t = s.focus;
  switch (t.kind()) {
    case TermKind::Var: {
      if (t.ref().index >= s.env.size())
        throw IndexOutOfRange("reference " + std::to_string(t.ref().index) + " in environment of length " +
                              std::to_string(s.env.size()));
      ValidClosure c = trusted_closure(s.env.at(t.ref().index));
      return Continue{MachineState{c.term(), c.env(), s.ctx}, Transition::Lookup};
    }
    case TermKind::App:
      return Continue{MachineState{t.fun(), s.env, s.ctx.push(Closed::closure(t.arg(), s.env))}, Transition::App};
    case TermKind::Lam: {
      if (s.ctx.empty()) return Final{make_value(Closed::closure(t, s.env))};
      ValidClosure arg = trusted_closure(s.ctx.top());
      return Continue{MachineState{t.body(), s.env.push_front(arg.closed()), s.ctx.pop()}, Transition::Beta};
    }
  }
  throw std::logic_error("unreachable");
}

inline nlohmann::json to_json(const MachineState& s) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const Closed& frame : s.ctx.args()) ctx.push_back(to_json(frame));
  return nlohmann::json{{"term", print_term(s.focus, free_variable_names(s.focus, s.env.size()))},
                        {"env", to_json(s.env)},
                        {"context", std::move(ctx)}};
}

/// Runs the machine from (t, empty env, empty context). Every transition
/// costs one unit of fuel; reaching the final value is free.
inline EvalResult evaluate_krivine(const Term& t, std::size_t fuel = kDefaultFuel, const EvalOptions& opts = {},
                                   const std::function<void(const MachineState&)>& on_state = {}) {
  detail::require_fuel(fuel);
  infer_type(t, {});
  StepLog log(Machine::Krivine);
  MachineState state = initial_state(t);
  const Ty result_type = t.type();
  for (;;) {
    if (on_state) on_state(state);
    if (opts.check_invariants) {
      check_state(state);
      if (!(state.result_type() == result_type)) throw InvariantViolation("Krivine result type changed");
      if (state.focus.is_var()) {
        const ValidClosure looked_up = valid_lookup(state.focus.ref(), state.env);
        if (!closed_equal(looked_up.closed(), env_lookup(state.env, state.focus.ref())))
          throw InvariantViolation("valid lookup disagrees with environment lookup");
      }
    }
    KrivineOutcome out = krivine_step(state);
    if (auto* done = std::get_if<Final>(&out)) return EvalResult{std::move(done->value), std::move(log)};
    if (log.fuel_used() >= fuel) throw FuelExhausted(fuel, std::move(log));
    auto& next = std::get<Continue>(out);
    log.record(step_kind(next.transition), opts.verbose_trace ? to_json(state) : nlohmann::json(nullptr));
    state = std::move(next.next);
  }
}

}  // namespace stlc
