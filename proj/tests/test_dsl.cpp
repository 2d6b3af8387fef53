#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crq/dsl.hpp"
#include "test_support.hpp"

using namespace crq;

namespace {

SrcPtr random_bool_node(std::mt19937_64& rng, int depth);

Formula random_formula(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"A", "B", "C", "H", "K"};
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
  switch (pick(rng)) {
    case 0: return Formula::atom(names[rng() % 5]);
    case 1: return rng() & 1 ? Formula::constant(true) : Formula::constant(false);
    case 2: return Formula::negate(random_formula(rng, depth - 1));
    case 3: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

SrcPtr make_bool(Formula f) {
  auto n = std::make_shared<SrcNode>();
  n->kind = SrcNode::Kind::Bool;
  n->fml = std::move(f);
  return n;
}

SrcPtr make_cond(Formula c, Formula a) {
  auto n = std::make_shared<SrcNode>();
  n->kind = SrcNode::Kind::Cond;
  n->cons = std::move(c);
  n->ante = std::move(a);
  return n;
}

SrcPtr random_node(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
  switch (pick(rng)) {
    case 0: return make_bool(random_formula(rng, 2));
    case 1: return make_cond(random_formula(rng, 2), random_formula(rng, 2));
    case 2: {  // conjunction of two or three members
      auto n = std::make_shared<SrcNode>();
      n->kind = SrcNode::Kind::Conj;
      int count = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < count; ++i) n->items.push_back(random_node(rng, depth - 1));
      return n;
    }
    default: {  // iterated; both sides plain boolexps would have fused into Cond
      auto n = std::make_shared<SrcNode>();
      n->kind = SrcNode::Kind::Iter;
      n->lhs = random_node(rng, depth - 1);
      n->rhs = random_node(rng, depth - 1);
      if (n->lhs->kind == SrcNode::Kind::Bool && n->rhs->kind == SrcNode::Kind::Bool)
        n->rhs = make_cond(random_formula(rng, 2), random_formula(rng, 2));
      return n;
    }
  }
}

}  // namespace

TEST_CASE("simple conditional") {
  SrcPtr n = parse("C|A");
  REQUIRE(n->kind == SrcNode::Kind::Cond);
  CHECK(structurally_equal(n->cons, Formula::atom("C")));
  CHECK(structurally_equal(n->ante, Formula::atom("A")));
}

TEST_CASE("iterated conditional with a conditional antecedent") {
  SrcPtr n = parse("(B|K)|(A|H)");
  REQUIRE(n->kind == SrcNode::Kind::Iter);
  CHECK(n->lhs->kind == SrcNode::Kind::Cond);
  CHECK(n->rhs->kind == SrcNode::Kind::Cond);
}

TEST_CASE("generalized iterated conditional over a conjunction") {
  SrcPtr n = parse("A|((C|A) && C)");
  REQUIRE(n->kind == SrcNode::Kind::Iter);
  CHECK(n->lhs->kind == SrcNode::Kind::Bool);
  REQUIRE(n->rhs->kind == SrcNode::Kind::Conj);
  CHECK(n->rhs->items.size() == 2);
  CHECK(n->rhs->items[0]->kind == SrcNode::Kind::Cond);
  CHECK(n->rhs->items[1]->kind == SrcNode::Kind::Bool);
}

TEST_CASE("operator precedence fixtures") {
  // not > and > or > '|'
  SrcPtr n = parse("not A and B|C or D");
  REQUIRE(n->kind == SrcNode::Kind::Cond);
  CHECK(structurally_equal(n->cons, Formula::conj(Formula::negate(Formula::atom("A")),
                                                  Formula::atom("B"))));
  CHECK(structurally_equal(n->ante, Formula::disj(Formula::atom("C"), Formula::atom("D"))));

  // '|' binds tighter than '&&'
  SrcPtr m = parse("A && B|C");
  REQUIRE(m->kind == SrcNode::Kind::Conj);
  CHECK(m->items[0]->kind == SrcNode::Kind::Bool);
  CHECK(m->items[1]->kind == SrcNode::Kind::Cond);

  // a bare boolexp conditions on "true" only at elaboration
  SrcPtr b = parse("A and not B");
  CHECK(b->kind == SrcNode::Kind::Bool);
}

TEST_CASE("bar chaining requires parentheses") {
  CHECK_THROWS_AS(parse("A|B|C"), AmbiguousBar);
  CHECK_THROWS_AS(parse("(A|B)|C|D"), AmbiguousBar);
  CHECK_THROWS_AS(parse("A|(B|C)|D"), AmbiguousBar);
  CHECK_NOTHROW(parse("(A|B)|C"));
  CHECK_NOTHROW(parse("A|(B|C)"));
}

TEST_CASE("syntax errors carry one-based positions") {
  try {
    parse("C |\n @A");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 2);
  }
  try {
    parse("A & B");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 3);
  }
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("A and"), SyntaxError);
  CHECK_THROWS_AS(parse("(A"), SyntaxError);
  CHECK_THROWS_AS(parse("A) "), SyntaxError);
}

TEST_CASE("printing and reparsing is the identity on syntax trees") {
  std::mt19937_64 rng(20230107);
  for (int k = 0; k < 1000; ++k) {
    SrcPtr n = random_node(rng, 2);
    std::string text = print(n);
    SrcPtr back;
    INFO("printed form: " << text);
    REQUIRE_NOTHROW(back = parse(text));
    CHECK(equal(*n, *back));
  }
}

TEST_CASE("arbitrary input never escapes the syntax-error contract") {
  std::mt19937_64 rng(112233);
  const std::string alphabet = "ABCab|&()_ and or not true false\n\t01";
  for (int k = 0; k < 2000; ++k) {
    std::string text;
    int len = static_cast<int>(rng() % 24);
    for (int i = 0; i < len; ++i) text.push_back(alphabet[rng() % alphabet.size()]);
    try {
      SrcPtr n = parse(text);
      // Whatever parsed must round-trip.
      CHECK(equal(*n, *parse(print(n))));
    } catch (const SyntaxError&) {
      // expected for most random strings (AmbiguousBar included)
    }
  }
}

TEST_CASE("lowering to structured compounds") {
  CompoundExpr cond = lower(*parse("C|A"));
  CHECK(cond.kind() == CompoundExpr::Kind::Conditional);

  CompoundExpr conj = lower(*parse("(A|H) && (B|K) && C"));
  REQUIRE(conj.kind() == CompoundExpr::Kind::Conjunction);
  CHECK(conj.conjuncts().size() == 3);

  CompoundExpr flat = lower(*parse("((A|H) && (B|K)) && C"));
  REQUIRE(flat.kind() == CompoundExpr::Kind::Conjunction);
  CHECK(flat.conjuncts().size() == 3);

  CompoundExpr iter = lower(*parse("A|((C|A) && C)"));
  REQUIRE(iter.kind() == CompoundExpr::Kind::Iterated);
  CHECK(iter.antecedent().size() == 2);

  CompoundExpr mixed = lower(*parse("(C|A) && (K|(C|A))"));
  CHECK(mixed.kind() == CompoundExpr::Kind::MixedConjunction);

  CHECK_THROWS_AS(lower(*parse("((B|K)|(A|H))|(C|A)")), UnsupportedCompound);
  CHECK_THROWS_AS(lower(*parse("(K|(C|A)) && (B|(C|A))")), UnsupportedCompound);
}

TEST_CASE("elaboration builds the documented tables") {
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(Formula::atom("C"), Formula::atom("A"));
  AssessmentContext ctx;
  ctx.set(conditional_key(*space, c_given_a), Rational(9, 10));
  ValueTable t = elaborate(*parse("C|A"), space, ctx);
  CHECK(t == indicator(space, c_given_a, Rational(9, 10)));

  // Conjoining the conditional with its consequent event.
  ValueTable conj = elaborate(*parse("(C|A) && C"), space, ctx);
  CHECK(conj.value(0) == 1);                 // A C
  CHECK(conj.value(1) == 0);                 // A ~C
  CHECK(conj.value(2) == Rational(9, 10));   // ~A C
  CHECK(conj.value(3) == 0);                 // ~A ~C

  try {
    elaborate(*parse("A|(C|A)"), space, ctx);
    FAIL("expected MissingAssessment");
  } catch (const MissingAssessment& e) {
    REQUIRE(e.missing.size() == 1);
    CHECK(e.missing[0] == "A|(C|A)");
  }

  CHECK_THROWS_AS(elaborate(*parse("Z|A"), space, ctx), UnknownAtom);
}

TEST_CASE("canonical context keys ignore conjunct order") {
  auto space = EventSpace::make({"A", "H", "B", "K"});
  CompoundExpr left = lower(*parse("(A|H) && (B|K)"));
  CompoundExpr right = lower(*parse("(B|K) && (A|H)"));
  bool same = !(*expr_key(*space, left) < *expr_key(*space, right)) &&
              !(*expr_key(*space, right) < *expr_key(*space, left));
  CHECK(same);
}
