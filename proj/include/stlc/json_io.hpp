#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "stlc/closed.hpp"
#include "stlc/term.hpp"

namespace stlc {

namespace detail {

inline void collect_free_names(const Term& t, std::size_t depth, std::vector<std::string>& names) {
  switch (t.kind()) {
    case TermKind::Lam:
      collect_free_names(t.body(), depth + 1, names);
      return;
    case TermKind::App:
      collect_free_names(t.fun(), depth, names);
      collect_free_names(t.arg(), depth, names);
      return;
    case TermKind::Var: {
      const auto i = t.ref().index;
      if (i < depth) return;
      const auto slot = i - depth;
      if (slot < names.size() && names[slot].empty()) names[slot] = t.hint();
      return;
    }
  }
}

}  // namespace detail

/// Names for the first `env_size` free indices of `t`, taken from variable
/// hints and made distinct; unnamed slots become `e<i>`.
inline std::vector<std::string> free_variable_names(const Term& t, std::size_t env_size) {
  std::vector<std::string> names(env_size);
  detail::collect_free_names(t, 0, names);
  std::vector<std::string> taken;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string base = names[i].empty() ? "e" + std::to_string(i) : names[i];
    names[i] = detail::fresh_name(taken, base);
    taken.push_back(names[i]);
  }
  return names;
}

/// Surface rendering of a closure's term, naming environment slots.
inline std::string print_closure_term(const Closed& c) {
  return print_term(c.term(), free_variable_names(c.term(), c.env().size()));
}

nlohmann::json to_json(const Closed& c);

inline nlohmann::json to_json(const Env& env) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Closed& entry : env) arr.push_back(to_json(entry));
  return arr;
}

/// `{"kind":"closure","type":..,"term":..,"env":[..]}` or
/// `{"kind":"clapp","type":..,"fun":..,"arg":..}`.
inline nlohmann::json to_json(const Closed& c) {
  nlohmann::json j;
  if (c.is_closure()) {
    j["kind"] = "closure";
    j["type"] = to_string(c.type());
    j["term"] = print_closure_term(c);
    j["env"] = to_json(c.env());
  } else {
    j["kind"] = "clapp";
    j["type"] = to_string(c.type());
    j["fun"] = to_json(c.fun());
    j["arg"] = to_json(c.arg());
  }
  return j;
}

inline nlohmann::json to_json(const Value& v) { return to_json(v.closed()); }

/// One-line summary: the lambda plus its environment's size and entry types.
/// With `verbose`, environments are rendered recursively instead.
inline std::string describe_value(const Value& v, bool verbose = false);

namespace detail {

inline std::string describe_env(const Env& env, bool verbose, int indent) {
  if (env.empty()) return "<empty>";
  std::string out;
  if (!verbose) {
    out = std::to_string(env.size()) + (env.size() == 1 ? " entry" : " entries") + " (";
    bool first = true;
    for (const Closed& e : env) {
      if (!first) out += ", ";
      first = false;
      out += to_string(e.type());
    }
    return out + ")";
  }
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::size_t i = 0;
  for (const Closed& e : env) {
    out += "\n" + pad + "  [" + std::to_string(i++) + "] : " + to_string(e.type()) + " = ";
    if (e.is_closure()) {
      out += print_closure_term(e) + "  [in env: " + describe_env(e.env(), true, indent + 1) + "]";
    } else {
      out += to_json(e).dump();
    }
  }
  return out;
}

}  // namespace detail

inline std::string describe_value(const Value& v, bool verbose) {
  return print_closure_term(v.closed()) + "  [in env: " + detail::describe_env(v.env(), verbose, 0) + "]";
}

}  // namespace stlc
