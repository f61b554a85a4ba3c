#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stlc/closed.hpp"
#include "stlc/json_io.hpp"
#include "stlc/plist.hpp"

namespace stlc {

inline constexpr std::size_t kDefaultFuel = 1'000'000;

// ---------------------------------------------------------------------------
// Evaluation contexts

/// Stack of pending arguments along an application spine.
///
/// A context from `source` to `destination` turns a closed term of type
/// `source` into one of type `destination` when plugged. The front of
/// `args()` is the innermost argument, the first one to be applied.
class EvalContext {
 public:
  /// The empty context at type `t` (source = destination = t).
  static EvalContext empty_at(const Ty& t) { return EvalContext(PList<Closed>{}, t, t); }

  /// ARG frame: a context from `type(arg) -> source()` to `destination()`.
  [[nodiscard]] EvalContext push(Closed arg) const {
    Ty src = Ty::arrow(arg.type(), source_);
    return EvalContext(args_.push_front(std::move(arg)), std::move(src), destination_);
  }

  [[nodiscard]] bool empty() const noexcept { return args_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return args_.size(); }
  [[nodiscard]] const Closed& top() const { return args_.front(); }
  [[nodiscard]] EvalContext pop() const {
    return EvalContext(args_.pop_front(), source_.codomain(), destination_);
  }

  [[nodiscard]] const Ty& source() const noexcept { return source_; }
  [[nodiscard]] const Ty& destination() const noexcept { return destination_; }
  [[nodiscard]] const PList<Closed>& args() const noexcept { return args_; }

  friend bool operator==(const EvalContext& a, const EvalContext& b) {
    return a.source_ == b.source_ && a.destination_ == b.destination_ && env_equal(a.args_, b.args_);
  }

 private:
  EvalContext(PList<Closed> args, Ty source, Ty destination)
      : args_(std::move(args)), source_(std::move(source)), destination_(std::move(destination)) {}

  PList<Closed> args_;
  Ty source_;
  Ty destination_;
};

/// Applies the context's arguments to `c`, innermost first.
inline Closed plug(const EvalContext& ctx, Closed c) {
  if (!(c.type() == ctx.source()))
    throw IllTyped("plugging a term of type " + to_string(c.type()) + " into a context expecting " +
                   to_string(ctx.source()));
  for (const Closed& arg : ctx.args()) c = Closed::clapp(std::move(c), arg);
  return c;
}

// ---------------------------------------------------------------------------
// Redexes

enum class RedexKind { Lookup, Rapp, Beta };

inline const char* redex_kind_name(RedexKind k) {
  switch (k) {
    case RedexKind::Lookup:
      return "lookup";
    case RedexKind::Rapp:
      return "rapp";
    case RedexKind::Beta:
      return "beta";
  }
  return "?";
}

/// The three contractible shapes: a variable in an environment, an
/// application in an environment, and a lambda closure applied to an argument.
///
/// Each redex keeps the original Var/App/Lam node so that mapping it back
/// to a closed term rebuilds exactly the term it came from.
class Redex {
 public:
  static Redex lookup(Term var, Env env) {
    if (!var.is_var()) throw std::invalid_argument("lookup redex needs a variable");
    return Redex(RedexKind::Lookup, std::move(var), std::move(env), std::nullopt);
  }
  static Redex rapp(Term app, Env env) {
    if (!app.is_app()) throw std::invalid_argument("rapp redex needs an application");
    return Redex(RedexKind::Rapp, std::move(app), std::move(env), std::nullopt);
  }
  static Redex beta(Term lam, Env env, Closed arg) {
    if (!lam.is_lam()) throw std::invalid_argument("beta redex needs a lambda");
    if (!(lam.param_type() == arg.type()))
      throw IllTyped("beta argument of type " + to_string(arg.type()) + " for binder of type " +
                     to_string(lam.param_type()));
    return Redex(RedexKind::Beta, std::move(lam), std::move(env), std::move(arg));
  }

  [[nodiscard]] RedexKind kind() const noexcept { return kind_; }
  /// The Var, App, or Lam node the redex was found at.
  [[nodiscard]] const Term& focus() const noexcept { return focus_; }
  [[nodiscard]] const Env& env() const noexcept { return env_; }
  [[nodiscard]] Ref ref() const { return focus_.ref(); }
  [[nodiscard]] const Term& body() const { return focus_.body(); }
  [[nodiscard]] const Closed& beta_arg() const {
    if (!arg_) throw std::logic_error("argument of a non-beta redex");
    return *arg_;
  }

  /// Type of the redex as a closed term.
  [[nodiscard]] Ty type() const {
    return kind_ == RedexKind::Beta ? focus_.type().codomain() : focus_.type();
  }

  friend bool operator==(const Redex& a, const Redex& b) {
    if (a.kind_ != b.kind_ || !(a.focus_ == b.focus_) || !env_equal(a.env_, b.env_)) return false;
    if (a.kind_ != RedexKind::Beta) return true;
    return closed_equal(*a.arg_, *b.arg_);
  }

 private:
  Redex(RedexKind kind, Term focus, Env env, std::optional<Closed> arg)
      : kind_(kind), focus_(std::move(focus)), env_(std::move(env)), arg_(std::move(arg)) {}

  RedexKind kind_;
  Term focus_;
  Env env_;
  std::optional<Closed> arg_;
};

/// Maps a redex back to the closed term it stands for.
inline Closed from_redex(const Redex& r) {
  switch (r.kind()) {
    case RedexKind::Lookup:
    case RedexKind::Rapp:
      return Closed::closure(r.focus(), r.env());
    case RedexKind::Beta:
      return Closed::clapp(Closed::closure(r.focus(), r.env()), r.beta_arg());
  }
  throw std::logic_error("unreachable");
}

/// One-step rewrite of a redex.
inline Closed contract(const Redex& r) {
  switch (r.kind()) {
    case RedexKind::Lookup:
      return env_lookup(r.env(), r.ref());
    case RedexKind::Rapp:
      return Closed::clapp(Closed::closure(r.focus().fun(), r.env()),
                           Closed::closure(r.focus().arg(), r.env()));
    case RedexKind::Beta:
      return Closed::closure(r.body(), r.env().push_front(r.beta_arg()));
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Decompositions

/// A closed term split into either a value or a redex in an evaluation
/// context. The term that was decomposed (the subject) is retained when
/// tracked, so the split can be checked against it.
class Decomposition {
 public:
  static Decomposition value(Term lam, Env env, std::optional<Closed> subject = std::nullopt) {
    if (!lam.is_lam()) throw std::invalid_argument("value decomposition needs a lambda");
    return Decomposition(std::move(lam), std::move(env), std::nullopt, std::nullopt, std::move(subject));
  }
  static Decomposition redex(Redex r, EvalContext ctx, std::optional<Closed> subject = std::nullopt) {
    if (!(r.type() == ctx.source()))
      throw IllTyped("redex of type " + to_string(r.type()) + " in a context expecting " +
                     to_string(ctx.source()));
    Term focus = r.focus();
    Env env = r.env();
    return Decomposition(std::move(focus), std::move(env), std::move(r), std::move(ctx), std::move(subject));
  }

  [[nodiscard]] bool is_value() const noexcept { return !redex_.has_value(); }

  /// Lambda of a value decomposition (the closure is `Closure(lam, env)`).
  [[nodiscard]] const Term& lam() const {
    if (!is_value()) throw std::logic_error("lam of a redex decomposition");
    return focus_;
  }
  [[nodiscard]] const Term& body() const { return lam().body(); }
  [[nodiscard]] const Env& env() const {
    if (!is_value()) throw std::logic_error("env of a redex decomposition");
    return env_;
  }
  [[nodiscard]] const Redex& redex() const {
    if (is_value()) throw std::logic_error("redex of a value decomposition");
    return *redex_;
  }
  [[nodiscard]] const EvalContext& context() const {
    if (is_value()) throw std::logic_error("context of a value decomposition");
    return *ctx_;
  }
  [[nodiscard]] const std::optional<Closed>& subject() const noexcept { return subject_; }

  /// The closed term this decomposition describes, rebuilt from its parts.
  [[nodiscard]] Closed recompose() const {
    if (is_value()) return Closed::closure(focus_, env_);
    return plug(*ctx_, from_redex(*redex_));
  }

  /// Value: subject is the lambda closure. Redex: subject equals
  /// plug(context, from_redex(redex)). False when no subject was tracked.
  [[nodiscard]] bool subject_invariant_holds() const {
    return subject_.has_value() && closed_equal(*subject_, recompose());
  }

  void check_subject() const {
    if (!subject_) throw InvariantViolation("decomposition has no tracked subject");
    if (!subject_invariant_holds())
      throw InvariantViolation("decomposition does not recompose to its subject");
  }

  /// Equal parts; subjects are compared only when both sides track one.
  friend bool operator==(const Decomposition& a, const Decomposition& b) {
    if (a.is_value() != b.is_value()) return false;
    if (a.is_value()) {
      if (!(a.focus_ == b.focus_) || !env_equal(a.env_, b.env_)) return false;
    } else if (!(*a.redex_ == *b.redex_) || !(*a.ctx_ == *b.ctx_)) {
      return false;
    }
    if (a.subject_ && b.subject_) return closed_equal(*a.subject_, *b.subject_);
    return true;
  }

 private:
  Decomposition(Term focus, Env env, std::optional<Redex> r, std::optional<EvalContext> ctx,
                std::optional<Closed> subject)
      : focus_(std::move(focus)),
        env_(std::move(env)),
        redex_(std::move(r)),
        ctx_(std::move(ctx)),
        subject_(std::move(subject)) {}

  Term focus_;
  Env env_;
  std::optional<Redex> redex_;
  std::optional<EvalContext> ctx_;
  std::optional<Closed> subject_;
};

/// Inspects the accumulated context once `load` reaches a lambda closure.
/// `lam` is the lambda whose body and environment are being unloaded.
inline Decomposition unload(const EvalContext& ctx, const Term& lam, const Env& env, bool track_subject = true) {
  std::optional<Closed> subject;
  if (track_subject) subject = plug(ctx, Closed::closure(lam, env));
  if (ctx.empty()) return Decomposition::value(lam, env, std::move(subject));
  return Decomposition::redex(Redex::beta(lam, env, ctx.top()), ctx.pop(), std::move(subject));
}

/// Accumulates arguments into `ctx` until a redex or value is found.
/// The subject is `plug(ctx, c)`.
inline Decomposition load(const EvalContext& ctx, const Closed& c, bool track_subject = true) {
  if (!(c.type() == ctx.source()))
    throw IllTyped("loading a term of type " + to_string(c.type()) + " into a context expecting " +
                   to_string(ctx.source()));
  std::optional<Closed> subject;
  if (track_subject) subject = plug(ctx, c);
  EvalContext acc = ctx;
  Closed cur = c;
  while (cur.is_clapp()) {
    acc = acc.push(cur.arg());
    Closed f = cur.fun();
    cur = std::move(f);
  }
  const Term& t = cur.term();
  switch (t.kind()) {
    case TermKind::Lam: {
      // unload's own subject is the same plugged term; keep the one from entry.
      Decomposition d = unload(acc, t, cur.env(), false);
      if (d.is_value()) return Decomposition::value(d.lam(), d.env(), std::move(subject));
      return Decomposition::redex(d.redex(), d.context(), std::move(subject));
    }
    case TermKind::App:
      return Decomposition::redex(Redex::rapp(t, cur.env()), std::move(acc), std::move(subject));
    case TermKind::Var:
      return Decomposition::redex(Redex::lookup(t, cur.env()), std::move(acc), std::move(subject));
  }
  throw std::logic_error("unreachable");
}

/// Splits `c` into a value or a redex in its evaluation context.
inline Decomposition decompose(const Closed& c, bool track_subject = true) {
  return load(EvalContext::empty_at(c.type()), c, track_subject);
}

/// One normal-order step to weak head normal form; values are returned unchanged.
inline Closed head_reduce(const Closed& c) {
  Decomposition d = decompose(c);
  if (d.is_value()) return c;
  return plug(d.context(), contract(d.redex()));
}

// ---------------------------------------------------------------------------
// Step logs and evaluation

enum class Machine { Smallstep, Refocus, Krivine };

inline const char* machine_name(Machine m) {
  switch (m) {
    case Machine::Smallstep:
      return "smallstep";
    case Machine::Refocus:
      return "refocus";
    case Machine::Krivine:
      return "krivine";
  }
  return "?";
}

inline std::optional<Machine> parse_machine(std::string_view name) {
  if (name == "smallstep") return Machine::Smallstep;
  if (name == "refocus") return Machine::Refocus;
  if (name == "krivine") return Machine::Krivine;
  return std::nullopt;
}

/// Redex contractions and Krivine transitions share one step vocabulary.
enum class StepKind { Lookup, Rapp, Beta, App };

inline StepKind step_kind(RedexKind k) {
  switch (k) {
    case RedexKind::Lookup:
      return StepKind::Lookup;
    case RedexKind::Rapp:
      return StepKind::Rapp;
    case RedexKind::Beta:
      return StepKind::Beta;
  }
  throw std::logic_error("unreachable");
}

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Lookup:
      return "lookup";
    case StepKind::Rapp:
      return "rapp";
    case StepKind::Beta:
      return "beta";
    case StepKind::App:
      return "app";
  }
  return "?";
}

struct StepRecord {
  std::size_t n = 0;
  StepKind kind = StepKind::Lookup;
  /// Serialized machine state before the step; null unless verbose tracing.
  nlohmann::json state;

  bool operator==(const StepRecord&) const = default;
};

class StepLog {
 public:
  explicit StepLog(Machine machine) : machine_(machine) {}

  void record(StepKind kind, nlohmann::json state = nullptr) {
    steps_.push_back(StepRecord{steps_.size(), kind, std::move(state)});
  }

  [[nodiscard]] Machine machine() const noexcept { return machine_; }
  [[nodiscard]] const std::vector<StepRecord>& steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t total() const noexcept { return steps_.size(); }
  /// Every step costs one unit of fuel.
  [[nodiscard]] std::size_t fuel_used() const noexcept { return steps_.size(); }

  [[nodiscard]] std::vector<StepKind> kinds() const {
    std::vector<StepKind> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.kind);
    return out;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : steps_) {
      nlohmann::json j{{"n", s.n}};
      j[machine_ == Machine::Krivine ? "transition" : "redex"] = step_kind_name(s.kind);
      if (!s.state.is_null()) j["state"] = s.state;
      steps.push_back(std::move(j));
    }
    return nlohmann::json{{"machine", machine_name(machine_)},
                          {"steps", std::move(steps)},
                          {"total", total()},
                          {"fuel_used", fuel_used()}};
  }

  bool operator==(const StepLog&) const = default;

 private:
  Machine machine_;
  std::vector<StepRecord> steps_;
};

/// The step budget ran out before a value was reached.
class FuelExhausted : public Error {
 public:
  FuelExhausted(std::size_t fuel, StepLog partial)
      : Error("fuel exhausted after " + std::to_string(fuel) + " steps"),
        fuel_(fuel),
        partial_(std::move(partial)) {}
  [[nodiscard]] std::size_t fuel() const noexcept { return fuel_; }
  [[nodiscard]] const StepLog& partial_log() const noexcept { return partial_; }

 private:
  std::size_t fuel_;
  StepLog partial_;
};

struct EvalOptions {
  /// Record the serialized state before each step.
  bool verbose_trace = false;
  /// Re-check decomposition subjects, type preservation and machine
  /// invariants at every step. Throws InvariantViolation on failure.
  bool check_invariants = false;
  /// Called with every (context, closed term) pair handed to refocus/load.
  std::function<void(const EvalContext&, const Closed&)> on_focus;
};

struct EvalResult {
  Value value;
  StepLog log;
};

namespace detail {

inline void require_fuel(std::size_t fuel) {
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");
}

inline void check_contraction(const Redex& r, const Closed& contractum) {
  if (!(contractum.type() == r.type()))
    throw InvariantViolation(std::string("contracting a ") + redex_kind_name(r.kind()) +
                             " redex changed its type");
  check_closed(contractum);
}

inline nlohmann::json redex_state_json(const Decomposition& d) {
  return nlohmann::json{{"term", to_json(d.recompose())},
                        {"redex", redex_kind_name(d.redex().kind())},
                        {"context_size", d.context().size()}};
}

}  // namespace detail

/// Decompose, contract, plug, repeated until a value is reached.
/// One fuel unit and one log record per contraction.
inline EvalResult evaluate_smallstep(const Closed& c, std::size_t fuel = kDefaultFuel,
                                     const EvalOptions& opts = {}) {
  detail::require_fuel(fuel);
  StepLog log(Machine::Smallstep);
  Closed current = c;
  for (;;) {
    if (opts.on_focus) opts.on_focus(EvalContext::empty_at(current.type()), current);
    Decomposition d = decompose(current);
    if (opts.check_invariants) d.check_subject();
    if (d.is_value()) return EvalResult{make_value(std::move(current)), std::move(log)};
    if (log.fuel_used() >= fuel) throw FuelExhausted(fuel, std::move(log));
    log.record(step_kind(d.redex().kind()),
               opts.verbose_trace ? detail::redex_state_json(d) : nlohmann::json(nullptr));
    Closed contractum = contract(d.redex());
    if (opts.check_invariants) detail::check_contraction(d.redex(), contractum);
    current = plug(d.context(), std::move(contractum));
  }
}

}  // namespace stlc
