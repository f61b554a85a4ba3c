#include <gtest/gtest.h>

#include "test_support.hpp"

namespace stlc {
namespace {

using testing::arr;
using testing::closure_of;
using testing::id_term;
using testing::o;
using testing::oo;

Closed id_closure() { return Closed::closure(id_term(), Env{}); }
Closed id_oo_closure() { return Closed::closure(id_term(oo()), Env{}); }

TEST(FromRedex, Clauses) {
  const Closed c = id_closure();
  const Env env = Env{}.push_front(c);
  const Term v0 = Term::var(0, oo());
  EXPECT_EQ(from_redex(Redex::lookup(v0, env)), Closed::closure(v0, env));

  const Term app = Term::app(id_term(oo()), id_term());
  EXPECT_EQ(from_redex(Redex::rapp(app, Env{})), Closed::closure(app, Env{}));

  // Beta(Var 0, Nil, c): the lambda \_:o->o. 0 applied to c.
  const Term lam = id_term(oo());
  const Closed x = id_closure();
  EXPECT_EQ(from_redex(Redex::beta(lam, Env{}, x)), Closed::clapp(Closed::closure(lam, Env{}), x));
}

TEST(Contract, Lookup) {
  const Closed c = id_closure();
  EXPECT_TRUE(contract(Redex::lookup(Term::var(0, oo()), Env{}.push_front(c))).same_node(c));
}

TEST(Contract, RappDistributesEnvironment) {
  // Rapp(Lam(Var 0), Lam(Var 0), Nil) with the function at (o->o)->o->o.
  const Term app = Term::app(id_term(oo()), id_term());
  const Closed out = contract(Redex::rapp(app, Env{}));
  EXPECT_EQ(out, Closed::clapp(id_oo_closure(), id_closure()));
  EXPECT_EQ(out.type(), oo());
  EXPECT_NO_THROW(check_closed(out));
}

TEST(Contract, BetaExtendsEnvironment) {
  const Closed c = id_closure();
  const Closed out = contract(Redex::beta(id_term(oo()), Env{}, c));
  EXPECT_EQ(out, Closed::closure(Term::var(0, oo()), Env{}.push_front(c)));
}

TEST(Plug, UnfoldsInnermostFirst) {
  const Ty n = arr(oo(), oo());
  const Closed f = Closed::closure(id_term(n), Env{});
  const Closed x = id_oo_closure();
  const Closed y = id_closure();
  EXPECT_TRUE(plug(EvalContext::empty_at(arr(n, n)), f).same_node(f));

  const EvalContext one = EvalContext::empty_at(oo()).push(y);
  EXPECT_EQ(one.source(), n);
  EXPECT_EQ(plug(one, x), Closed::clapp(x, y));

  // ARG x (ARG y MT) around f gives Clapp(Clapp(f, x), y).
  const EvalContext two = one.push(x);
  EXPECT_EQ(two.source(), arr(n, n));
  EXPECT_EQ(two.destination(), oo());
  EXPECT_EQ(plug(two, f), Closed::clapp(Closed::clapp(f, x), y));
  EXPECT_THROW(plug(two, y), IllTyped);
}

TEST(Load, LambdaAtEmptyContextIsValue) {
  const Decomposition d = load(EvalContext::empty_at(oo()), id_closure());
  ASSERT_TRUE(d.is_value());
  EXPECT_EQ(d.body(), Term::var(0, o()));
  EXPECT_TRUE(d.env().empty());
  EXPECT_TRUE(d.subject_invariant_holds());
}

TEST(Load, ApplicationClosureIsRapp) {
  const Term app = Term::app(id_term(oo()), id_term());
  const Decomposition d = load(EvalContext::empty_at(oo()), Closed::closure(app, Env{}));
  ASSERT_FALSE(d.is_value());
  EXPECT_EQ(d.redex(), Redex::rapp(app, Env{}));
  EXPECT_TRUE(d.context().empty());
  EXPECT_TRUE(d.subject_invariant_holds());
}

TEST(Load, ClosedApplicationPushesThenBeta) {
  const Closed c = id_closure();
  const Closed f = id_oo_closure();
  const Decomposition d = load(EvalContext::empty_at(oo()), Closed::clapp(f, c));
  ASSERT_FALSE(d.is_value());
  EXPECT_EQ(d.redex(), Redex::beta(id_term(oo()), Env{}, c));
  EXPECT_TRUE(d.context().empty());
  EXPECT_TRUE(d.subject_invariant_holds());
}

TEST(Unload, Clauses) {
  const Term lam = id_term(oo());
  const Env e = Env{}.push_front(id_closure());
  const Closed a = id_closure();
  const Closed a2 = id_closure();

  const Decomposition v = unload(EvalContext::empty_at(arr(oo(), oo())), lam, e);
  ASSERT_TRUE(v.is_value());
  EXPECT_EQ(v.lam(), lam);
  EXPECT_TRUE(v.env().same_cells(e));

  const Decomposition b = unload(EvalContext::empty_at(oo()).push(a), lam, e);
  ASSERT_FALSE(b.is_value());
  EXPECT_EQ(b.redex(), Redex::beta(lam, e, a));
  EXPECT_TRUE(b.context().empty());
  EXPECT_TRUE(b.subject_invariant_holds());

  // ARG a (ARG a2 MT): the tail ARG a2 MT is preserved.
  const Term k = Term::lam(oo(), Term::lam(oo(), Term::var(0, oo())));
  const EvalContext tail = EvalContext::empty_at(oo()).push(a2);
  const Decomposition b2 = unload(tail.push(a), k, Env{});
  ASSERT_FALSE(b2.is_value());
  EXPECT_EQ(b2.redex(), Redex::beta(k, Env{}, a));
  EXPECT_EQ(b2.context(), tail);
  EXPECT_TRUE(b2.subject_invariant_holds());
}

TEST(Decompose, Examples) {
  const Decomposition v = decompose(id_closure());
  ASSERT_TRUE(v.is_value());
  EXPECT_EQ(v.body(), Term::var(0, o()));

  const Closed val = id_closure();
  const Closed var = Closed::closure(Term::var(0, oo()), Env{}.push_front(val));
  const Decomposition l = decompose(var);
  ASSERT_FALSE(l.is_value());
  EXPECT_EQ(l.redex(), Redex::lookup(Term::var(0, oo()), Env{}.push_front(val)));
  EXPECT_TRUE(l.context().empty());

  // Clapp(Clapp(f, x), y) with f a lambda closure: two descents, then Beta
  // with ARG y left over.
  const Term k = Term::lam(oo(), Term::lam(oo(), Term::var(1, oo())));
  const Env e = Env{}.push_front(id_oo_closure());
  const Closed f = Closed::closure(k, e);
  const Closed x = id_closure();
  const Closed y = Closed::closure(id_term(), e);
  const Decomposition d = decompose(Closed::clapp(Closed::clapp(f, x), y));
  ASSERT_FALSE(d.is_value());
  EXPECT_EQ(d.redex(), Redex::beta(k, e, x));
  EXPECT_EQ(d.context(), EvalContext::empty_at(oo()).push(y));
  EXPECT_TRUE(d.subject_invariant_holds());
}

TEST(HeadReduce, Examples) {
  const Closed v = id_closure();
  EXPECT_TRUE(head_reduce(v).same_node(v));

  const Term app = Term::app(id_term(oo()), id_term());
  const Closed env_entry = id_closure();
  const Term lifted = Term::app(Term::lam(oo(), Term::var(0, oo())), Term::var(0, oo()));
  const Env env = Env{}.push_front(env_entry);
  EXPECT_EQ(head_reduce(Closed::closure(lifted, env)),
            Closed::clapp(Closed::closure(lifted.fun(), env), Closed::closure(lifted.arg(), env)));
  EXPECT_EQ(head_reduce(Closed::closure(app, Env{})), Closed::clapp(id_oo_closure(), id_closure()));

  EXPECT_EQ(head_reduce(Closed::clapp(id_oo_closure(), v)), Closed::closure(Term::var(0, oo()), Env{}.push_front(v)));
}

TEST(EvaluateSmallstep, ValueTakesNoSteps) {
  const auto r = evaluate_smallstep(id_closure(), 10);
  EXPECT_EQ(r.value.closed(), id_closure());
  EXPECT_EQ(r.log.total(), 0u);
}

TEST(EvaluateSmallstep, WorkedExample) {
  const Closed c = closure_of("(\\x:o->o. x) (\\y:o. y)");
  const auto r = evaluate_smallstep(c, 100);
  EXPECT_EQ(r.value.closed(), id_closure());
  EXPECT_TRUE(r.value.env().empty());
  EXPECT_EQ(r.log.kinds(), (std::vector<StepKind>{StepKind::Rapp, StepKind::Beta, StepKind::Lookup}));

  // Cross-check: head_reduce three times lands on the same value.
  Closed h = c;
  for (int i = 0; i < 3; ++i) h = head_reduce(h);
  EXPECT_TRUE(is_val(h));
  EXPECT_EQ(h, r.value.closed());
}

TEST(EvaluateSmallstep, ZeroFuelIsRejected) {
  EXPECT_THROW(evaluate_smallstep(id_closure(), 0), std::invalid_argument);
}

TEST(EvaluateSmallstep, FuelExhaustionKeepsPartialLog) {
  const Closed c = closure_of("(\\x:o->o. x) (\\y:o. y)");
  try {
    evaluate_smallstep(c, 2);
    FAIL() << "expected FuelExhausted";
  } catch (const FuelExhausted& e) {
    EXPECT_EQ(e.fuel(), 2u);
    EXPECT_EQ(e.partial_log().total(), 2u);
  }
  EXPECT_NO_THROW(evaluate_smallstep(c, 3));
}

TEST(StepLog, JsonSchema) {
  const auto r = evaluate_smallstep(closure_of("(\\x:o->o. x) (\\y:o. y)"), 100);
  const auto j = r.log.to_json();
  EXPECT_EQ(j["machine"], "smallstep");
  EXPECT_EQ(j["total"], 3);
  EXPECT_EQ(j["fuel_used"], 3);
  ASSERT_EQ(j["steps"].size(), 3u);
  EXPECT_EQ(j["steps"][0], (nlohmann::json{{"n", 0}, {"redex", "rapp"}}));
  EXPECT_EQ(j["steps"][2]["redex"], "lookup");

  EvalOptions verbose;
  verbose.verbose_trace = true;
  const auto v = evaluate_smallstep(closure_of("(\\x:o->o. x) (\\y:o. y)"), 100, verbose).log.to_json();
  EXPECT_EQ(v["steps"][0]["state"]["redex"], "rapp");
  EXPECT_EQ(v["steps"][0]["state"]["term"]["kind"], "closure");
}

// Properties over the corpus and generated terms, at every intermediate
// closed term met during evaluation.
class ReductionProperty : public ::testing::Test {
 protected:
  static std::vector<Term> terms() {
    auto t = testing::corpus_terms();
    for (auto& g : testing::generated_terms(17, 300)) t.push_back(g);
    return t;
  }
};

TEST_F(ReductionProperty, DecompositionSoundnessAndTypePreservation) {
  std::size_t checked = 0;
  for (const Term& t : terms()) {
    Closed c = Closed::closure(t, Env{});
    for (;;) {
      const Decomposition d = decompose(c);
      ASSERT_TRUE(d.subject_invariant_holds());
      if (d.is_value()) {
        EXPECT_EQ(Closed::closure(d.lam(), d.env()), c);
        break;
      }
      EXPECT_EQ(plug(d.context(), from_redex(d.redex())), c);
      const Closed out = contract(d.redex());
      EXPECT_EQ(out.type(), from_redex(d.redex()).type());
      EXPECT_NO_THROW(check_closed(out));
      c = plug(d.context(), out);
      ++checked;
    }
  }
  EXPECT_GT(checked, 500u);
}

TEST_F(ReductionProperty, HeadReduceFixesValues) {
  for (const Term& t : terms()) {
    const Value v = evaluate_smallstep(Closed::closure(t, Env{})).value;
    EXPECT_TRUE(head_reduce(v.closed()).same_node(v.closed()));
  }
}

TEST_F(ReductionProperty, IterationMatchesHeadReduceFold) {
  for (const Term& t : terms()) {
    const Closed c = Closed::closure(t, Env{});
    const auto r = evaluate_smallstep(c);
    const auto [v, steps] = testing::head_reduce_to_value(c, 100'000);
    EXPECT_EQ(r.value.closed(), v);
    EXPECT_EQ(r.log.total(), steps);
  }
}

TEST_F(ReductionProperty, CheckedEvaluationRaisesNothing) {
  EvalOptions opts;
  opts.check_invariants = true;
  for (const Term& t : terms()) EXPECT_NO_THROW(evaluate_smallstep(Closed::closure(t, Env{}), kDefaultFuel, opts));
}

}  // namespace
}  // namespace stlc
