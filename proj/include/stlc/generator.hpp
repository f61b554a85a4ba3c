#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stlc/term.hpp"

namespace stlc {

struct GenConfig {
  std::uint64_t seed = 42;
  /// Recursion budget. Each lambda, spine application and redex costs one level.
  std::size_t max_depth = 5;
  Ty goal = Ty::arrow(Ty::base(), Ty::base());
  std::size_t count = 1;
  /// Soft cap: past this many nodes only leaves are chosen when possible.
  std::size_t node_cap = 50;
};

/// Type-directed random generator of closed, well-typed terms.
///
/// At each goal it picks, in random order and with backtracking, among a
/// variable (optionally applied to generated arguments), a lambda for arrow
/// goals, and an explicit redex `(\x:s. body) arg`. Output depends only on
/// the configuration.
class TermGenerator {
 public:
  explicit TermGenerator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
    if (cfg.count < 1) throw std::invalid_argument("count must be at least 1");
  }

  /// Next closed term of the goal type.
  Term next() {
    if (cfg_.goal.is_base())
      throw GenerationFailed("no closed term inhabits the base type o (goal o, empty context)");
    for (std::size_t attempt = 0; attempt < kRestarts; ++attempt) {
      nodes_ = 0;
      calls_ = 0;
      std::vector<Binding> scope;
      try {
        if (auto t = gen(cfg_.goal, scope, cfg_.max_depth)) return *t;
      } catch (const BudgetExceeded&) {
      }
    }
    throw GenerationFailed("could not generate a term of type " + to_string(cfg_.goal) + " within depth " +
                           std::to_string(cfg_.max_depth));
  }

  std::vector<Term> generate() {
    std::vector<Term> out;
    out.reserve(cfg_.count);
    for (std::size_t i = 0; i < cfg_.count; ++i) out.push_back(next());
    return out;
  }

 private:
  struct Binding {
    Ty type;
    std::string name;
  };
  struct BudgetExceeded {};

  enum class Choice { Leaf, Spine, Lam, Redex };

  static constexpr std::size_t kRestarts = 64;
  static constexpr std::size_t kCallBudget = 20'000;

  std::size_t draw(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  // Result type after applying `n` arguments, if the spine is that long.
  static std::optional<Ty> result_after(const Ty& t, std::size_t n) {
    const Ty* cur = &t;
    for (std::size_t i = 0; i < n; ++i) {
      if (!cur->is_arrow()) return std::nullopt;
      cur = &cur->codomain();
    }
    return *cur;
  }

  std::optional<Term> gen(const Ty& goal, std::vector<Binding>& scope, std::size_t budget) {
    if (++calls_ > kCallBudget) throw BudgetExceeded{};

    // (choice, variable index or 0, spine length)
    struct Option {
      Choice choice;
      std::size_t var = 0;
      std::size_t args = 0;
      unsigned weight = 1;
    };
    std::vector<Option> options;
    const bool over_cap = nodes_ >= cfg_.node_cap;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      const Ty& vt = scope[scope.size() - 1 - i].type;
      const std::size_t arity = vt.arity();
      for (std::size_t n = 0; n <= arity; ++n) {
        if (!(*result_after(vt, n) == goal)) continue;
        if (n == 0) {
          options.push_back({Choice::Leaf, i, 0, 3});
        } else if (budget >= 1 && !over_cap) {
          options.push_back({Choice::Spine, i, n, 3});
        }
      }
    }
    // A lambda at the root is already a value, so the root leans towards redexes.
    const bool root = scope.empty();
    if (goal.is_arrow() && budget >= 1 && !over_cap) options.push_back({Choice::Lam, 0, 0, root ? 1u : 3u});
    if (budget >= 1 && !over_cap) options.push_back({Choice::Redex, 0, 0, root ? 12u : 4u});
    if (options.empty() && over_cap) return gen_uncapped(goal, scope, budget);

    // Weighted random permutation: repeatedly draw one remaining option.
    while (!options.empty()) {
      unsigned total = 0;
      for (const auto& o : options) total += o.weight;
      std::size_t pick = draw(total);
      std::size_t k = 0;
      while (pick >= options[k].weight) {
        pick -= options[k].weight;
        ++k;
      }
      const Option opt = options[k];
      options.erase(options.begin() + static_cast<std::ptrdiff_t>(k));
      if (auto t = build(opt.choice, opt.var, opt.args, goal, scope, budget)) return t;
    }
    return std::nullopt;
  }

  // Past the node cap with no leaf available: fall back to the full option set.
  std::optional<Term> gen_uncapped(const Ty& goal, std::vector<Binding>& scope, std::size_t budget) {
    const std::size_t saved = cfg_.node_cap;
    cfg_.node_cap = static_cast<std::size_t>(-1);
    auto t = gen(goal, scope, budget);
    cfg_.node_cap = saved;
    return t;
  }

  Term make_var(std::size_t index, const std::vector<Binding>& scope) {
    ++nodes_;
    const auto& b = scope[scope.size() - 1 - index];
    return Term::var(index, b.type, b.name);
  }

  std::optional<Term> build(Choice choice, std::size_t var, std::size_t nargs, const Ty& goal,
                            std::vector<Binding>& scope, std::size_t budget) {
    const std::size_t nodes_before = nodes_;
    std::optional<Term> out;
    switch (choice) {
      case Choice::Leaf:
        out = make_var(var, scope);
        break;
      case Choice::Spine: {
        Term head = make_var(var, scope);
        bool ok = true;
        for (std::size_t i = 0; i < nargs && ok; ++i) {
          const Ty domain = head.type().domain();
          auto a = gen(domain, scope, budget - 1);
          if (!a) {
            ok = false;
            break;
          }
          ++nodes_;
          head = Term::app(std::move(head), std::move(*a));
        }
        if (ok) out = std::move(head);
        break;
      }
      case Choice::Lam: {
        const Ty param = goal.domain();
        scope.push_back(Binding{param, binder_name(scope.size())});
        auto body = gen(goal.codomain(), scope, budget - 1);
        const std::string name = scope.back().name;
        scope.pop_back();
        if (body) {
          ++nodes_;
          out = Term::lam(param, std::move(*body), name);
        }
        break;
      }
      case Choice::Redex: {
        const Ty param = pick_redex_type(goal, scope);
        scope.push_back(Binding{param, binder_name(scope.size())});
        auto body = gen(goal, scope, budget - 1);
        const std::string name = scope.back().name;
        scope.pop_back();
        if (!body) break;
        auto arg = gen(param, scope, budget - 1);
        if (!arg) break;
        nodes_ += 2;
        out = Term::app(Term::lam(param, std::move(*body), name), std::move(*arg));
        break;
      }
    }
    if (!out) nodes_ = nodes_before;
    return out;
  }

  Ty pick_redex_type(const Ty& goal, const std::vector<Binding>& scope) {
    const Ty o = Ty::base();
    const Ty oo = Ty::arrow(o, o);
    std::vector<Ty> candidates{oo, oo, Ty::arrow(oo, oo), o, goal};
    if (goal.is_arrow()) candidates.push_back(goal.domain());
    for (const auto& b : scope) candidates.push_back(b.type);
    return candidates[draw(candidates.size())];
  }

  static std::string binder_name(std::size_t depth) {
    static const char* const letters = "xyzwuvabcdefghpqrst";
    const std::size_t n = 19;
    if (depth < n) return std::string(1, letters[depth]);
    return std::string(1, letters[depth % n]) + std::to_string(depth / n);
  }

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::size_t nodes_ = 0;
  std::size_t calls_ = 0;
};

/// `cfg.count` closed terms of type `cfg.goal`, deterministic in `cfg.seed`.
inline std::vector<Term> generate_term(const GenConfig& cfg) { return TermGenerator(cfg).generate(); }

}  // namespace stlc
