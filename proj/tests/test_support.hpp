#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stlc/stlc.hpp"

#ifndef STLC_CORPUS_DIR
#error "STLC_CORPUS_DIR must point at the corpus/ directory"
#endif

namespace stlc::testing {

inline Ty o() { return Ty::base(); }
inline Ty arr(Ty a, Ty b) { return Ty::arrow(std::move(a), std::move(b)); }
inline Ty oo() { return arr(o(), o()); }

/// `\_:T. 0`
inline Term id_term(const Ty& t = o()) { return Term::lam(t, Term::var(0, t, "x"), "x"); }

inline Closed closure_of(const std::string& text) { return Closed::closure(parse_closed_term(text), Env{}); }

struct CorpusEntry {
  std::string name;
  std::string text;
};

inline std::vector<CorpusEntry> load_corpus() {
  std::vector<CorpusEntry> out;
  for (const auto& entry : std::filesystem::directory_iterator(STLC_CORPUS_DIR)) {
    if (entry.path().extension() != ".lam") continue;
    std::ifstream in(entry.path());
    std::ostringstream buf;
    buf << in.rdbuf();
    out.push_back({entry.path().filename().string(), buf.str()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

inline std::vector<Term> corpus_terms() {
  std::vector<Term> out;
  for (const auto& e : load_corpus()) out.push_back(parse_closed_term(e.text));
  return out;
}

inline std::vector<Term> generated_terms(std::uint64_t seed, std::size_t count, std::size_t depth = 5) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.count = count;
  cfg.max_depth = depth;
  return generate_term(cfg);
}

/// Random simple type with at most `depth` nested arrows.
inline Ty random_type(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return o();
  Ty a = random_type(rng, depth - 1);
  Ty b = random_type(rng, depth - 1);
  return arr(std::move(a), std::move(b));
}

/// Independent evaluator: fold head_reduce until a value appears.
inline std::pair<Closed, std::size_t> head_reduce_to_value(Closed c, std::size_t limit) {
  std::size_t steps = 0;
  while (!is_val(c)) {
    if (steps == limit) throw std::runtime_error("head_reduce_to_value: limit reached");
    c = head_reduce(c);
    ++steps;
  }
  return {c, steps};
}

/// Every (context, closed term) pair handed to refocus while evaluating `c`.
inline std::vector<std::pair<EvalContext, Closed>> harvest_pairs(const Closed& c) {
  std::vector<std::pair<EvalContext, Closed>> pairs;
  EvalOptions opts;
  opts.on_focus = [&](const EvalContext& ctx, const Closed& x) { pairs.emplace_back(ctx, x); };
  evaluate_refocus(c, kDefaultFuel, opts);
  return pairs;
}

// Random pairs built independently of any evaluator: a closed term of type
// A1 -> ... -> An -> t and a context holding arguments of types A1..Ak.
// Arguments come from closures over non-empty environments and from
// closed applications, so every clause of refocus is exercised.
class RandomPairs {
 public:
  explicit RandomPairs(std::uint64_t seed) : rng_(seed) {
    for (auto& t : generated_terms(seed, 200, 4)) pool_.push_back(Closed::closure(t, Env{}));
    GenConfig cfg;
    cfg.seed = seed + 1;
    cfg.count = 200;
    cfg.max_depth = 4;
    cfg.goal = arr(oo(), oo());
    for (auto& t : generate_term(cfg)) pool_.push_back(Closed::closure(t, Env{}));
    // Intermediate closed terms carry non-empty environments and Clapps.
    const std::size_t base = pool_.size();
    for (std::size_t i = 0; i < base; ++i) {
      Closed c = pool_[i];
      for (int k = 0; k < 4 && !is_val(c); ++k) {
        c = head_reduce(c);
        pool_.push_back(c);
      }
    }
  }

  std::pair<EvalContext, Closed> next() {
    const Closed& c = pool_[rng_() % pool_.size()];
    std::vector<Ty> doms;
    for (Ty t = c.type(); !t.is_base() && doms.size() < 3; t = t.codomain()) doms.push_back(t.domain());
    const std::size_t k = rng_() % (doms.size() + 1);
    std::vector<Closed> args;
    for (std::size_t i = 0; i < k; ++i) {
      auto arg = pick_of_type(doms[i]);
      if (!arg) break;
      args.push_back(*arg);
    }
    Ty result = c.type();
    for (std::size_t i = 0; i < args.size(); ++i) result = result.codomain();
    EvalContext ctx = EvalContext::empty_at(result);
    for (auto it = args.rbegin(); it != args.rend(); ++it) ctx = ctx.push(*it);
    return {ctx, c};
  }

 private:
  std::optional<Closed> pick_of_type(const Ty& t) {
    for (int tries = 0; tries < 32; ++tries) {
      const Closed& c = pool_[rng_() % pool_.size()];
      if (c.type() == t) return c;
    }
    return std::nullopt;
  }

  std::mt19937_64 rng_;
  std::vector<Closed> pool_;
};

}  // namespace stlc::testing
