#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace stlc {
namespace {

using testing::arr;
using testing::o;
using testing::oo;

TEST(ParseType, Base) { EXPECT_EQ(parse_type("o"), o()); }

TEST(ParseType, ArrowIsRightAssociative) {
  const Ty t = parse_type("o -> o -> o");
  EXPECT_EQ(t, arr(o(), arr(o(), o())));
  EXPECT_EQ(to_string(t, true), "(o -> (o -> o))");
  EXPECT_EQ(parse_type(to_string(t, true)), t);
}

TEST(ParseType, ParenthesizedDomain) {
  const Ty t = parse_type("(o -> o) -> o");
  EXPECT_EQ(t, arr(oo(), o()));
  EXPECT_EQ(to_string(t), "(o -> o) -> o");
  EXPECT_EQ(parse_type(to_string(t, true)), t);
}

TEST(ParseType, WhitespaceInsensitive) {
  EXPECT_EQ(parse_type("  ( o->o )->o  "), arr(oo(), o()));
  EXPECT_EQ(parse_type("o->o->o"), parse_type("o -> (o -> o)"));
}

TEST(ParseType, Errors) {
  EXPECT_THROW(parse_type(""), SyntaxError);
  EXPECT_THROW(parse_type("o ->"), SyntaxError);
  EXPECT_THROW(parse_type("(o -> o"), SyntaxError);
  EXPECT_THROW(parse_type("oo"), SyntaxError);
  try {
    parse_type("o -> x");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(ParseType, PrintParseRoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Ty t = testing::random_type(rng, 5);
    EXPECT_EQ(parse_type(to_string(t)), t);
    EXPECT_EQ(parse_type(to_string(t, true)), t);
  }
}

TEST(ParseTerm, Lambda) {
  EXPECT_EQ(parse_term("\\x:o. x"), SurfaceTerm::lam("x", o(), SurfaceTerm::var("x")));
}

TEST(ParseTerm, ApplicationIsLeftAssociative) {
  const auto expected = SurfaceTerm::app(SurfaceTerm::app(SurfaceTerm::var("f"), SurfaceTerm::var("x")),
                                         SurfaceTerm::var("y"));
  EXPECT_EQ(parse_term("f x y"), expected);
  EXPECT_EQ(parse_term("(f x) y"), expected);
  EXPECT_FALSE(parse_term("f (x y)") == expected);
}

TEST(ParseTerm, NestedLambdaWithApplicationBody) {
  const auto s = parse_term("\\f:o->o. \\x:o. f x");
  const auto expected = SurfaceTerm::lam(
      "f", oo(),
      SurfaceTerm::lam("x", o(), SurfaceTerm::app(SurfaceTerm::var("f"), SurfaceTerm::var("x"))));
  EXPECT_EQ(s, expected);
  EXPECT_EQ(print_surface(s), "\\f:o -> o. \\x:o. f x");
  EXPECT_EQ(parse_term(print_surface(s)), s);
  EXPECT_EQ(parse_term(print_surface(s, true)), s);
}

TEST(ParseTerm, LambdaExtendsRightAndMayEndASpine) {
  const auto s = parse_term("f \\x:o. x y");
  ASSERT_EQ(s.kind(), SurfaceTerm::Kind::App);
  EXPECT_EQ(s.arg().kind(), SurfaceTerm::Kind::Lam);
  EXPECT_EQ(s.arg().body().kind(), SurfaceTerm::Kind::App);
}

TEST(ParseTerm, UnicodeLambdaAndComments) {
  EXPECT_EQ(parse_term("# identity\n\xCE\xBBx:o. x  # trailing"), parse_term("\\x:o. x"));
}

TEST(ParseTerm, SpansCoverTheirSource) {
  const std::string text = "(\\x:o->o. x) (\\y:o. y)";
  const auto s = parse_term(text);
  EXPECT_LE(s.span().end, text.size());
  EXPECT_EQ(s.fun().span().begin, 1u);
  EXPECT_EQ(text.substr(s.fun().body().span().begin, 1), "x");
}

TEST(ParseTerm, Errors) {
  EXPECT_THROW(parse_term(""), SyntaxError);
  EXPECT_THROW(parse_term("\\x. x"), SyntaxError);
  EXPECT_THROW(parse_term("\\x:o x"), SyntaxError);
  EXPECT_THROW(parse_term("(x y"), SyntaxError);
  EXPECT_THROW(parse_term("x )"), SyntaxError);
  try {
    parse_term("\\x:o. (x");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
}

// Untyped random surface terms with a small name pool, so shadowing and
// free variables both occur.
SurfaceTerm random_surface(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"x", "y", "f", "g'", "x_1"};
  const auto pick = rng() % 3;
  if (depth == 0 || pick == 0) return SurfaceTerm::var(names[rng() % 5]);
  if (pick == 1) return SurfaceTerm::lam(names[rng() % 5], testing::random_type(rng, 3), random_surface(rng, depth - 1));
  return SurfaceTerm::app(random_surface(rng, depth - 1), random_surface(rng, depth - 1));
}

TEST(ParseTerm, PrintParseRoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const SurfaceTerm s = random_surface(rng, 6);
    EXPECT_EQ(parse_term(print_surface(s)), s) << print_surface(s);
    EXPECT_EQ(parse_term(print_surface(s, true)), s) << print_surface(s, true);
  }
}

}  // namespace
}  // namespace stlc
