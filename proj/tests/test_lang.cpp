#include <gtest/gtest.h>

#include "bcl/bcl.hpp"
#include "support/fixtures.hpp"

using namespace bcl;

namespace {

Vocabulary colours() { return Vocabulary::make({"p", "q"}, {"yellow", "red", "blue"}); }

TEST(Parse, ImplicationWithBox) {
  const auto voc = colours();
  const Formula f = parse_formula("~p & ~q -> [q] t(blue)", voc);
  const Formula want = implies(conj(neg(feature(0)), neg(feature(1))),
                               box(FeatureSet::single(1), decision(voc.value("blue"))));
  EXPECT_EQ(f, want);
}

TEST(Parse, DecisionAtom) {
  const auto voc = Vocabulary::make({"p"}, {"x", "y"});
  EXPECT_EQ(parse_formula("t(x)", voc), decision(0));
  EXPECT_EQ(parse_formula("t(y)", voc), decision(1));
}

TEST(Parse, CounterfactualDefaultsToEveryFeature) {
  const auto voc = colours();
  const Formula f = parse_formula("(t(red) => q)", voc);
  EXPECT_EQ(f, counterfactual(voc.all_features(), decision(1), feature(1)));
  EXPECT_EQ(parse_formula(render_formula(f, voc), voc), f);
}

TEST(Parse, CounterfactualWithIndex) {
  const auto voc = colours();
  EXPECT_EQ(parse_formula("(p =>{q} t(red))", voc), counterfactual(FeatureSet::single(1), feature(0), decision(1)));
  EXPECT_EQ(parse_formula("(p =>{} t(red))", voc), counterfactual({}, feature(0), decision(1)));
}

TEST(Parse, EmptyIndexModalities) {
  const auto voc = colours();
  EXPECT_EQ(parse_formula("[] p", voc), box({}, feature(0)));
  EXPECT_EQ(parse_formula("<> p", voc), diamond({}, feature(0)));
  EXPECT_EQ(parse_formula("<p,q> t(red)", voc), diamond(voc.all_features(), decision(1)));
}

TEST(Parse, AssignmentIsDistinguishedFromBoxByColonEquals) {
  const auto voc = colours();
  EXPECT_EQ(parse_formula("[red := p] t(red)", voc), assign(1, feature(0), decision(1)));
  EXPECT_EQ(parse_formula("[p] t(red)", voc), box(FeatureSet::single(0), decision(1)));
}

TEST(Parse, KnowledgeAndObservability) {
  const auto voc = Vocabulary::epistemic({"p", "q"}, {"x", "y"});
  EXPECT_EQ(parse_formula("K ~p", voc), know(neg(feature(0))));
  EXPECT_EQ(parse_formula("o(p) -> K o(p)", voc), implies(feature(2), know(feature(2))));
  EXPECT_EQ(parse_formula("K (p & q)", voc), know(conj(feature(0), feature(1))));
}

TEST(Parse, Constants) {
  const auto voc = colours();
  EXPECT_EQ(parse_formula("true", voc), top());
  EXPECT_EQ(parse_formula("~false", voc), neg(bottom()));
}

TEST(Parse, Precedence) {
  const auto voc = Vocabulary::make({"p", "q", "r"}, {"x"});
  const Formula p = feature(0), q = feature(1), r = feature(2);
  EXPECT_EQ(parse_formula("p | q & r", voc), disj(p, conj(q, r)));
  EXPECT_EQ(parse_formula("p -> q -> r", voc), implies(p, implies(q, r)));
  EXPECT_EQ(parse_formula("p <-> q <-> r", voc), iff(iff(p, q), r));
  EXPECT_EQ(parse_formula("p -> q <-> r", voc), iff(implies(p, q), r));
  EXPECT_EQ(parse_formula("~p & q", voc), conj(neg(p), q));
  EXPECT_EQ(parse_formula("[p] q & r", voc), conj(box(FeatureSet::single(0), q), r));
  EXPECT_EQ(parse_formula("p | q -> r", voc), implies(disj(p, q), r));
}

TEST(Parse, DecisionAtomsInIndexAreDropped) {
  const auto voc = colours();
  EXPECT_EQ(parse_formula("[q, t(blue)] p", voc), box(FeatureSet::single(1), feature(0)));
}

TEST(Parse, SyntaxErrorReportsPosition) {
  const auto voc = colours();
  try {
    parse_formula("p & & q", voc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_formula("(p => q", voc), ParseError);
  EXPECT_THROW(parse_formula("p q", voc), ParseError);
  EXPECT_THROW(parse_formula("", voc), ParseError);
}

TEST(Parse, UnknownNames) {
  const auto voc = colours();
  EXPECT_THROW(parse_formula("r", voc), UnknownNameError);
  EXPECT_THROW(parse_formula("t(green)", voc), UnknownNameError);
  EXPECT_THROW(parse_formula("[r] p", voc), UnknownNameError);
  EXPECT_THROW(parse_formula("o(p)", voc), UnknownNameError);
}

TEST(Render, Examples) {
  const auto voc = Vocabulary::epistemic({"p"}, {"x", "y"});
  EXPECT_EQ(render_formula(box({}, feature(0)), voc), "[] p");
  EXPECT_EQ(render_formula(know(neg(feature(0))), voc), "K ~p");
  EXPECT_EQ(render_formula(assign(0, feature(0), decision(0)), voc), "[x := p] t(x)");
  EXPECT_EQ(render_formula(counterfactual(voc.all_features(), feature(0), decision(1)), voc), "(p => t(y))");
  EXPECT_EQ(render_formula(counterfactual({}, feature(0), decision(1)), voc), "(p =>{} t(y))");
  EXPECT_EQ(render_formula(diamond(FeatureSet::single(1), feature(1)), voc), "<o(p)> o(p)");
}

TEST(Render, MinimalParentheses) {
  const auto voc = Vocabulary::make({"p", "q", "r"}, {"x"});
  const Formula p = feature(0), q = feature(1), r = feature(2);
  EXPECT_EQ(render_formula(conj(disj(p, q), r), voc), "(p | q) & r");
  EXPECT_EQ(render_formula(disj(p, conj(q, r)), voc), "p | q & r");
  EXPECT_EQ(render_formula(implies(implies(p, q), r), voc), "(p -> q) -> r");
  EXPECT_EQ(render_formula(implies(p, implies(q, r)), voc), "p -> q -> r");
  EXPECT_EQ(render_formula(neg(conj(p, q)), voc), "~(p & q)");
}

TEST(AtomsOf, Examples) {
  const auto voc = Vocabulary::make({"p", "q"}, {"x", "blue"});
  const auto a = atoms_of(parse_formula("p & t(x)", voc));
  EXPECT_EQ(a.features, FeatureSet::single(0));
  EXPECT_EQ(a.decisions, std::set<ValueId>{0});
  EXPECT_TRUE(a.index_features.empty());

  const auto b = atoms_of(parse_formula("[q] t(blue)", voc));
  EXPECT_TRUE(b.features.empty());
  EXPECT_EQ(b.decisions, std::set<ValueId>{1});
  EXPECT_EQ(b.index_features, FeatureSet::single(1));

  EXPECT_TRUE(atoms_of(Term().to_formula()).empty());
}

class RoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(RoundTrip, RenderThenParseIsIdentity) {
  const auto voc = GetParam() % 2 == 0 ? Vocabulary::make({"p", "q", "r"}, {"x", "y", "?"})
                                       : Vocabulary::epistemic({"p", "q"}, {"x", "y"});
  FormulaGenOptions opt;
  opt.max_depth = 5;
  opt.counterfactuals = true;
  opt.assignments = true;
  opt.knowledge = true;
  FormulaGenerator gen(voc, 1000 + GetParam(), opt);
  for (int i = 0; i < 200; ++i) {
    const Formula f = gen();
    const std::string text = render_formula(f, voc);
    const Formula back = parse_formula(text, voc);
    EXPECT_EQ(back, f) << text;
    EXPECT_EQ(normalize(back), normalize(f)) << text;
    EXPECT_EQ(render_formula(back, voc), text);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RoundTrip, ::testing::Range(0, 6));

TEST(Normalize, RemovesDerivedConnectives) {
  const auto voc = Vocabulary::make({"p", "q"}, {"x", "y"});
  FormulaGenOptions opt;
  opt.max_depth = 4;
  opt.counterfactuals = true;
  FormulaGenerator gen(voc, 7, opt);
  for (int i = 0; i < 100; ++i) {
    const Formula n = normalize(gen());
    for (Op op : {Op::kOr, Op::kImplies, Op::kIff, Op::kDiamond, Op::kFalse}) {
      EXPECT_FALSE(contains_op(n, op));
    }
  }
}

TEST(Normalize, PreservesSatisfactionOnEveryModel) {
  auto voc = fixtures::plain_vocabulary(2, 2);
  FormulaGenOptions opt;
  opt.max_depth = 4;
  opt.counterfactuals = true;
  opt.assignments = true;
  FormulaGenerator gen(*voc, 11, opt);
  std::vector<Formula> corpus;
  for (int i = 0; i < 60; ++i) corpus.push_back(gen());
  fixtures::for_each_model(voc, [&](const ClassifierModel& c) {
    for (const auto& f : corpus) {
      EXPECT_EQ(extension(c, f), extension(c, normalize(f))) << render_formula(f, *voc);
    }
  });
}

TEST(Vocabulary, Validation) {
  EXPECT_THROW(Vocabulary::make({"p", "p"}, {"x"}), Error);
  EXPECT_THROW(Vocabulary::make({"p"}, {}), Error);
  EXPECT_THROW(Vocabulary::make({"p"}, {"x", "x"}), Error);
  EXPECT_THROW(Vocabulary::make({"K"}, {"x"}), Error);
  EXPECT_THROW(Vocabulary::make({"p"}, {"x"}, {"q"}), UnknownNameError);
  EXPECT_THROW(Vocabulary::make({"a b"}, {"x"}), Error);
}

TEST(Vocabulary, EpistemicProfile) {
  const auto voc = Vocabulary::epistemic({"p", "q"}, {"x"});
  ASSERT_EQ(voc.feature_count(), 4u);
  EXPECT_EQ(voc.feature_name(2), "o(p)");
  EXPECT_EQ(voc.feature_name(3), "o(q)");
  EXPECT_EQ(voc.observability_of(1), 3u);
  EXPECT_EQ(voc.visible(State(0b1010)), FeatureSet::single(1));
  EXPECT_EQ(voc.basic_part(State(0b1111)), State(0b0011));
}

TEST(Term, InvariantsAndRendering) {
  const auto voc = Vocabulary::make({"p1", "p2", "q1", "q2"}, {"x", "y"});
  EXPECT_THROW(Term(FeatureSet::single(0), FeatureSet::single(0)), Error);
  const Term t = parse_term("~p1 & ~q2", voc);
  EXPECT_EQ(t.negatives(), FeatureSet(0b1001));
  EXPECT_TRUE(t.positives().empty());
  EXPECT_EQ(t.render(voc), "~p1 & ~q2");
  EXPECT_EQ(t.flipped().render(voc), "p1 & q2");
  EXPECT_EQ(Term().render(voc), "true");
  EXPECT_TRUE(parse_term("true", voc).is_top());
  EXPECT_THROW(parse_term("p1 | q1", voc), Error);
  EXPECT_THROW(parse_term("p1 & ~p1", voc), Error);

  const Term inst = Term::instance(State(0b0110), voc.all_features());
  EXPECT_EQ(inst.render(voc), "~p1 & p2 & q1 & ~q2");
  EXPECT_TRUE(t.subterm_of(inst));
  EXPECT_TRUE(inst.holds(State(0b0110)));
  EXPECT_FALSE(inst.holds(State(0b0111)));
}

TEST(Term, OrderIsBySizeThenAtomThenSign) {
  const auto voc = Vocabulary::make({"a", "b"}, {"x"});
  std::vector<Term> ts{parse_term("a & b", voc), parse_term("b", voc), parse_term("a", voc),
                       parse_term("~a", voc), Term()};
  std::sort(ts.begin(), ts.end(), term_order);
  std::vector<std::string> got;
  for (const auto& t : ts) got.push_back(t.render(voc));
  EXPECT_EQ(got, (std::vector<std::string>{"true", "~a", "a", "b", "a & b"}));
}

}  // namespace
