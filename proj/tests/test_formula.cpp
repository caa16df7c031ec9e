#include <gtest/gtest.h>

#include "wpml/formula.hpp"
#include "wpml/random.hpp"

using namespace wpml;

namespace {

Formula P(const char* s) { return parse_formula(s); }
Formula L(const char* s) { return Formula::letter(s); }

}  // namespace

TEST(Parse, LinearityPair) {
  auto pr = parse_pair("[]p & []q |- [](p & q)");
  EXPECT_EQ(pr.lhs, Formula::conj(Formula::box(L("p")), Formula::box(L("q"))));
  EXPECT_EQ(pr.rhs, Formula::box(Formula::conj(L("p"), L("q"))));
}

TEST(Parse, ModalTopPair) {
  auto pr = parse_pair("T |- []T");
  EXPECT_EQ(pr.lhs, Formula::top());
  EXPECT_EQ(pr.rhs, Formula::box(Formula::top()));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(P("p v q & r"), Formula::disj(L("p"), Formula::conj(L("q"), L("r"))));
  EXPECT_EQ(P("[]p & q"), Formula::conj(Formula::box(L("p")), L("q")));
  EXPECT_EQ(P("<>[]p"), Formula::dia(Formula::box(L("p"))));
}

TEST(Parse, LeftAssociative) {
  EXPECT_EQ(P("p & q & r"), Formula::conj(Formula::conj(L("p"), L("q")), L("r")));
  EXPECT_EQ(P("p v q v r"), Formula::disj(Formula::disj(L("p"), L("q")), L("r")));
}

TEST(Parse, Constants) {
  EXPECT_TRUE(P("T").is(Op::Top));
  EXPECT_TRUE(P("F").is(Op::Bot));
  EXPECT_EQ(P("p1 & x_2").left().name(), "p1");
}

TEST(Parse, DispatchesOnTurnstile) {
  EXPECT_TRUE(std::holds_alternative<Formula>(parse("p & q")));
  EXPECT_TRUE(std::holds_alternative<ConsequencePair>(parse("p |- q")));
}

TEST(Parse, ErrorsCarryPosition) {
  struct Case {
    const char* text;
    std::size_t pos;
  };
  for (auto c : {Case{"p &", 3}, Case{"(p", 2}, Case{"p q", 2}, Case{"", 0}, Case{"p & v", 4}}) {
    try {
      parse_formula(c.text);
      ADD_FAILURE() << c.text;
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.position(), c.pos) << c.text;
      EXPECT_EQ(e.kind(), ErrorKind::Parse);
    }
  }
  EXPECT_THROW(parse_pair("p q"), SyntaxError);
  EXPECT_THROW(parse_formula("p |- q"), SyntaxError);
}

TEST(Parse, PrintRoundTripOnRandomCorpus) {
  Rng rng(11);
  const std::vector<std::string> ls = {"p", "q", "r", "s"};
  for (int i = 0; i < 1000; ++i) {
    auto f = random_formula(rng, ls, rng.below(9), true);
    auto printed = to_string(f);
    EXPECT_EQ(parse_formula(printed), f) << printed;
    EXPECT_EQ(to_string(parse_formula(printed)), printed);
  }
}

TEST(Substitute, Examples) {
  Substitution s = {{"p", P("<>r")}, {"q", P("q")}};
  EXPECT_EQ(substitute(P("p & q"), s), P("<>r & q"));
  EXPECT_EQ(substitute(P("T"), s), P("T"));
  EXPECT_EQ(substitute(P("[]p"), {{"p", P("p v q")}}), P("[](p v q)"));
}

TEST(Substitute, IsSimultaneous) {
  EXPECT_EQ(substitute(P("p & q"), {{"p", P("q")}, {"q", P("p")}}), P("q & p"));
}

TEST(Match, InfersSubstitution) {
  Substitution s;
  ASSERT_TRUE(match(P("[]p & []q"), P("[](a v b) & []c"), s));
  EXPECT_EQ(s.at("p"), P("a v b"));
  EXPECT_EQ(s.at("q"), P("c"));
  Substitution t;
  EXPECT_FALSE(match(P("p & p"), P("a & b"), t));
}

TEST(Queries, LettersSubformulasSize) {
  auto f = P("[](p & q) v <>p");
  EXPECT_EQ(letters(f), (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(subformulas(f).size(), 6U);  // p, q, p&q, [](p&q), <>p, whole
  EXPECT_EQ(connectives(f), 4U);
  EXPECT_EQ(f.size(), 7U);
  EXPECT_FALSE(is_modality_free(f));
  EXPECT_TRUE(is_modality_free(P("p & (q v T)")));
}

TEST(Order, StructuralAndTotal) {
  EXPECT_TRUE(P("p") < P("q") || P("q") < P("p"));
  EXPECT_EQ(P("p & q") <=> P("p & q"), std::strong_ordering::equal);
  EXPECT_NE(P("p & q"), P("q & p"));
}
