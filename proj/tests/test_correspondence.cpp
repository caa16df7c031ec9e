#include <gtest/gtest.h>

#include "convert.hpp"
#include "oracles.hpp"
#include "wpml/correspondence.hpp"
#include "wpml/duality.hpp"
#include "wpml/random.hpp"

using namespace wpml;

namespace {

std::vector<ModalLFrame> small_frames(std::size_t n) {
  std::vector<ModalLFrame> out;
  for_each_small_modal_lframe(n, [&](const ModalLFrame& F) {
    out.push_back(F);
    return true;
  });
  return out;
}

bool oracle_axiom_valid(const oracle::Frame& F, Axiom a) {
  for (const auto& p : axiom_pairs(a))
    if (!oracle::frame_valid(F, p)) return false;
  return true;
}

}  // namespace

TEST(Axioms, PairsAndNames) {
  EXPECT_EQ(axiom_pairs(Axiom::T)[0], parse_pair("[]p |- p"));
  EXPECT_EQ(axiom_pairs(Axiom::Dot2).size(), 1U);
  EXPECT_EQ(parse_axiom(".2"), Axiom::Dot2);
  EXPECT_EQ(parse_axiom("4"), Axiom::Four);
  EXPECT_THROW(parse_axiom("K"), Error);
  EXPECT_EQ(axiom_set({Axiom::T, Axiom::B}).size(), 4U);
}

TEST(Conditions, IdentitySatisfiesAll) {
  auto F = ModalLFrame::identity(LFrame::chain(3));
  for (auto c : all_conditions()) EXPECT_TRUE(frame_satisfies(F, c)) << to_string(c);
}

TEST(Conditions, AgreeWithOracle) {
  std::size_t intransitive = 0;
  for (const auto& F : small_frames(4)) {
    auto O = to_frame(F);
    for (auto c : all_conditions()) {
      auto v = condition_violation(F, c);
      EXPECT_EQ(!v.has_value(), oracle::condition(O, to_string(c)));
      if (v && c == FrameCondition::Transitivity) {
        const auto& w = v->witness;
        EXPECT_TRUE(F.R(w[0], w[1]) && F.R(w[1], w[2]) && !F.R(w[0], w[2]));
        ++intransitive;
      }
    }
  }
  EXPECT_GT(intransitive, 0U);
}

TEST(Conditions, TotalRelationIsDirected) {
  // total on the 1-point frame only, since 1 R x iff x = 1
  auto F = ModalLFrame::identity(LFrame::chain(1));
  EXPECT_TRUE(frame_satisfies(F, FrameCondition::Directedness));
  auto total = ModalLFrame::from_pairs(LFrame::chain(2), {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  EXPECT_TRUE(modal_lframe_violation(total).has_value());
  EXPECT_TRUE(frame_satisfies(total, FrameCondition::Directedness));
}

TEST(Correspondence, IdentityAndT) {
  auto r = correspondence_check(ModalLFrame::identity(LFrame::chain(3)), Axiom::T);
  EXPECT_TRUE(r.condition_holds);
  EXPECT_EQ(r.pair_valid, (std::vector<bool>{true, true}));
  EXPECT_TRUE(r.consistent);
}

TEST(Correspondence, TightFramesMatchOracleValidity) {
  std::size_t tight = 0;
  for (const auto& F : small_frames(4)) {
    auto O = to_frame(F);
    for (auto ax : all_axioms()) {
      const bool cond = oracle::condition(O, to_string(condition_of(ax)));
      const bool valid = oracle_axiom_valid(O, ax);
      auto r = correspondence_check(F, ax);
      EXPECT_EQ(r.condition_holds, cond);
      EXPECT_TRUE(r.sound);
      if (cond) EXPECT_TRUE(valid) << to_string(ax);
      if (is_tight(F)) {
        EXPECT_EQ(valid, cond) << to_string(ax);
        EXPECT_EQ(r.existential_holds, std::optional<bool>(cond));
        EXPECT_TRUE(r.consistent);
      }
    }
    tight += is_tight(F);
  }
  EXPECT_GT(tight, 20U);
}

TEST(Correspondence, CountervaluationRefutes) {
  auto F = ModalLFrame::from_pairs(LFrame::chain(2), {{0, 1}, {1, 1}});
  auto r = correspondence_check(F, Axiom::T);
  EXPECT_FALSE(r.condition_holds);
  EXPECT_FALSE(r.pair_valid[0]);
  ASSERT_TRUE(r.countervaluations[0].has_value());
  const auto& V = *r.countervaluations[0];
  auto p = axiom_pairs(Axiom::T)[0];
  EXPECT_FALSE(subset(truth_set(F, V, p.lhs), truth_set(F, V, p.rhs)));
}

TEST(Correspondence, TValidatingAlgebrasGiveReflexiveSpaces) {
  Rng rng(41);
  std::size_t hits = 0;
  for (int i = 0; i < 200; ++i) {
    auto A = random_modal_lattice(rng, rng.range(1, 4));
    auto OA = to_algebra(A);
    if (!oracle::valid_in(OA, axiom_pairs(Axiom::T)[0]) || !oracle::valid_in(OA, axiom_pairs(Axiom::T)[1])) continue;
    ++hits;
    EXPECT_TRUE(oracle::condition(to_frame(fil_l(A).frame), "reflexivity"));
  }
  EXPECT_GT(hits, 20U);
}

TEST(Correspondence, DirectedTightFrameValidatesDot2) {
  std::size_t seen = 0;
  for (const auto& F : small_frames(4)) {
    if (!is_tight(F) || !frame_satisfies(F, FrameCondition::Directedness)) continue;
    ++seen;
    EXPECT_TRUE(oracle::frame_valid(to_frame(F), parse_pair("<>[]p |- []<>p")));
  }
  EXPECT_GT(seen, 5U);
}

TEST(Preservation, IdentityLegs) {
  for (const auto& F : small_frames(3)) {
    std::vector<Id> id(F.size());
    for (Id i = 0; i < id.size(); ++i) id[i] = i;
    for (auto c : all_conditions()) {
      if (!frame_satisfies(F, c)) {
        EXPECT_THROW(pullback_preserves(c, F, F, F, id, id), Error);
        continue;
      }
      EXPECT_TRUE(pullback_preserves(c, F, F, F, id, id).holds);
    }
  }
}

TEST(Preservation, SeededSpansAgainstOracle) {
  for (auto c : all_conditions()) {
    Rng rng(7, static_cast<std::uint64_t>(c));
    for (int i = 0; i < 25; ++i) {
      auto s = random_co_vformation(rng, c);
      auto r = pullback_preserves(c, s.Y1, s.Y2, s.X, s.f1, s.f2);
      auto P = pullback(s.Y1, s.Y2, s.X, s.f1, s.f2);
      EXPECT_TRUE(r.holds) << to_string(c);
      EXPECT_TRUE(oracle::condition(to_frame(P.frame), to_string(c))) << to_string(c);
    }
  }
}

TEST(Preservation, HornConditionsSurviveProducts) {
  Rng rng(3);
  for (auto c : {FrameCondition::Reflexivity, FrameCondition::Transitivity, FrameCondition::Symmetry,
                 FrameCondition::Euclideanity}) {
    for (int i = 0; i < 15; ++i) {
      auto Y1 = random_modal_lframe(rng, rng.range(1, 4), c);
      auto Y2 = random_modal_lframe(rng, rng.range(1, 4), c);
      EXPECT_TRUE(product_satisfies(c, Y1, Y2)) << to_string(c);
    }
  }
}
