#include <gtest/gtest.h>

#include "convert.hpp"
#include "oracles.hpp"
#include "wpml/lframe.hpp"
#include "wpml/random.hpp"

using namespace wpml;
using oracle::PointSet;

namespace {

LFrame m2() {
  // 0 < a, b < 1; ids 0, a=1, b=2, 1=3
  return LFrame::from_meet({"0", "a", "b", "1"}, {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}}, 3);
}

std::vector<PointSet> as_sets(const std::vector<Mask>& ms) {
  std::vector<PointSet> out;
  for (Mask m : ms) {
    PointSet s;
    for_each_bit(m, [&](Id i) { s.insert(i); });
    out.push_back(s);
  }
  return out;
}

oracle::FrameVal to_val(const FrameValuation& V) {
  oracle::FrameVal out;
  for (std::size_t i = 0; i < V.letters.size(); ++i) out[V.letters[i]] = as_sets({V.values[i]})[0];
  return out;
}

/// Literal bounded L-morphism conditions.
bool oracle_bounded(const oracle::Frame& X, const oracle::Frame& Y, const std::vector<std::size_t>& f) {
  if (f[X.one] != Y.one) return false;
  for (std::size_t a = 0; a < X.n(); ++a)
    for (std::size_t b = 0; b < X.n(); ++b)
      if (f[X.meet[a][b]] != Y.meet[f[a]][f[b]]) return false;
  for (std::size_t x = 0; x < X.n(); ++x) {
    if (f[x] == Y.one && x != X.one) return false;
    for (std::size_t yp = 0; yp < Y.n(); ++yp)
      for (std::size_t zp = 0; zp < Y.n(); ++zp) {
        if (!Y.le(Y.meet[yp][zp], f[x])) continue;
        bool ok = false;
        for (std::size_t y = 0; y < X.n(); ++y)
          for (std::size_t z = 0; z < X.n(); ++z)
            ok = ok || (Y.le(yp, f[y]) && Y.le(zp, f[z]) && X.le(X.meet[y][z], x));
        if (!ok) return false;
      }
    for (std::size_t y = 0; y < X.n(); ++y)
      if (X.rel(x, y) && !Y.rel(f[x], f[y])) return false;
    for (std::size_t z = 0; z < Y.n(); ++z) {
      if (!Y.rel(f[x], z)) continue;
      bool below = false, above = false;
      for (std::size_t y = 0; y < X.n(); ++y) {
        below = below || (X.rel(x, y) && Y.le(f[y], z));
        above = above || (X.rel(x, y) && Y.le(z, f[y]));
      }
      if (!below || !above) return false;
    }
  }
  return true;
}

}  // namespace

TEST(LFrame, MeetTableLaws) {
  EXPECT_THROW(LFrame::from_meet({{0, 1}, {0, 1}}, 1), Error);  // not commutative
  EXPECT_THROW(LFrame::from_meet({{0, 0}, {0, 1}}, 0), Error);  // 0 is not neutral
  auto X = LFrame::chain(3);
  EXPECT_EQ(X.one(), 2U);
  EXPECT_EQ(X.bottom(), 0U);
  EXPECT_TRUE(X.leq(0, 1));
  EXPECT_EQ(frame_join(m2(), 1, 2), 3U);
}

TEST(Validate, IdentityAccepted) {
  for (const auto& L : lattices_up_to(5))
    EXPECT_FALSE(modal_lframe_violation(ModalLFrame::identity(LFrame::from_lattice(L))).has_value());
}

TEST(Validate, OnlyOneRelatedToOne) {
  auto r = validate_modal_lframe(LFrame::chain(2), {{1, 1}});
  ASSERT_TRUE(std::holds_alternative<Violation>(r));
  const auto& v = std::get<Violation>(r);
  EXPECT_EQ(v.condition, "i");
  EXPECT_EQ(v.witness, (std::vector<Id>{0, 1, 1}));
}

TEST(Validate, TwoChainWithUpwardEdge) {
  EXPECT_TRUE(std::holds_alternative<ModalLFrame>(validate_modal_lframe(LFrame::chain(2), {{1, 1}, {0, 0}, {0, 1}})));
}

TEST(Validate, AgreesWithOracleOnAllRelationsUpToThreePoints) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& L : lattices_of_size(n)) {
      auto X = LFrame::from_lattice(L);
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n * n)); ++m) {
        std::vector<Mask> succ(n, 0);
        for (std::size_t k = 0; k < n * n; ++k)
          if ((m >> k) & 1U) succ[k / n] |= bit(static_cast<Id>(k % n));
        ModalLFrame F(X, succ);
        EXPECT_EQ(!modal_lframe_violation(F).has_value(), oracle::is_modal_lframe(to_frame(F)));
      }
    }
}

TEST(Validate, EnumerationIsCompleteUpToFourPoints) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& L : lattices_of_size(n)) {
      auto X = LFrame::from_lattice(L);
      std::set<std::vector<Mask>> seen;
      for_each_modal_lframe(X, [&](const ModalLFrame& F) {
        seen.insert(F.succ_rows());
        return true;
      });
      std::size_t brute = 0;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n * n)); ++m) {
        std::vector<Mask> succ(n, 0);
        for (std::size_t k = 0; k < n * n; ++k)
          if ((m >> k) & 1U) succ[k / n] |= bit(static_cast<Id>(k % n));
        if (oracle::is_modal_lframe(to_frame(ModalLFrame(X, succ)))) {
          ++brute;
          EXPECT_TRUE(seen.count(succ));
        }
      }
      EXPECT_EQ(seen.size(), brute) << n;
    }
}

TEST(Filters, Examples) {
  EXPECT_EQ(filters(LFrame::chain(3)).size(), 3U);
  auto fs = filters(m2());
  EXPECT_EQ(fs, (std::vector<Mask>{0b1000, 0b1010, 0b1100, 0b1111}));
  EXPECT_EQ(filters(LFrame::chain(1)).size(), 1U);
}

TEST(Filters, AgreeWithOracle) {
  for (const auto& L : lattices_up_to(6)) {
    auto F = ModalLFrame::identity(LFrame::from_lattice(L));
    auto lib = as_sets(filters(F.base()));
    auto ref = oracle::filters(to_frame(F));
    std::sort(lib.begin(), lib.end());
    std::sort(ref.begin(), ref.end());
    EXPECT_EQ(lib, ref);
  }
}

TEST(FilF, Examples) {
  auto one = fil_f(ModalLFrame::identity(LFrame::chain(1)));
  EXPECT_EQ(one.algebra.size(), 1U);
  auto A = fil_f(ModalLFrame::identity(m2()));
  EXPECT_EQ(A.algebra.size(), 4U);
  for (Id i = 0; i < 4; ++i) {
    EXPECT_EQ(A.algebra.box[i], i);
    EXPECT_EQ(A.algebra.diamond[i], i);
  }
  // two incomparable middle elements: ↑a and ↑b
  EXPECT_FALSE(A.algebra.base.leq(1, 2));
  EXPECT_FALSE(A.algebra.base.leq(2, 1));
  EXPECT_EQ(A.algebra.base.bot(), 0U);
  EXPECT_EQ(A.algebra.base.top(), 3U);
}

TEST(FilF, IsAModalLatticeOnEverySmallFrame) {
  std::size_t count = 0;
  for_each_small_modal_lframe(4, [&](const ModalLFrame& F) {
    auto A = fil_f(F);
    EXPECT_TRUE(oracle::is_modal_lattice(to_algebra(A.algebra)));
    ++count;
    return true;
  });
  EXPECT_GT(count, 50U);
}

TEST(FilF, RejectsNonModalRelation) {
  // □{2} = {0, 2} is not up-closed
  EXPECT_THROW(fil_f(ModalLFrame::from_pairs(LFrame::chain(3), {{0, 2}, {1, 0}, {2, 2}})), Error);
}

TEST(Satisfaction, Constants) {
  auto F = ModalLFrame::identity(m2());
  FrameValuation V{{"p"}, {0b1010}};
  EXPECT_EQ(truth_set(F, V, parse_formula("T")), 0b1111U);
  EXPECT_EQ(truth_set(F, V, parse_formula("F")), 0b1000U);
  for (Id x = 0; x < 4; ++x) {
    EXPECT_EQ(satisfies(F, V, x, parse_formula("[]p")), satisfies(F, V, x, parse_formula("p")));
    EXPECT_EQ(satisfies(F, V, x, parse_formula("F")), x == 3);
  }
  EXPECT_THROW(truth_set(F, V, parse_formula("q")), Error);
}

TEST(Satisfaction, DisjunctionIsGeneratedFilter) {
  FrameValuation V{{"p", "q"}, {0b1010, 0b1100}};
  EXPECT_EQ(truth_set(ModalLFrame::identity(m2()), V, parse_formula("p v q")), 0b1111U);
}

TEST(Satisfaction, AgreesWithOracleOnRandomModels) {
  Rng rng(21);
  const std::vector<std::string> ls = {"p", "q"};
  for (int i = 0; i < 300; ++i) {
    auto F = random_modal_lframe(rng, rng.range(1, 5));
    auto fs = filters(F.base());
    FrameValuation V{ls, {rng.pick(fs), rng.pick(fs)}};
    auto f = random_formula(rng, ls, rng.below(6), true);
    const Mask t = truth_set(F, V, f);
    EXPECT_TRUE(F.base().is_filter(t)) << to_string(f);
    auto OF = to_frame(F);
    auto OV = to_val(V);
    for (Id x = 0; x < F.size(); ++x) EXPECT_EQ(has(t, x), oracle::forces(OF, OV, x, f)) << to_string(f);
  }
}

TEST(FrameValidates, Examples) {
  auto refl = ModalLFrame::from_pairs(LFrame::chain(2), {{0, 0}, {0, 1}, {1, 1}});
  EXPECT_TRUE(frame_valid(refl, parse_pair("[]p |- p")));
  // 0 R 1 only: 0 is not reflexive
  auto up = ModalLFrame::from_pairs(LFrame::chain(2), {{0, 1}, {1, 1}});
  ASSERT_FALSE(modal_lframe_violation(up).has_value());
  auto v = frame_validates(up, parse_pair("[]p |- p"));
  ASSERT_TRUE(std::holds_alternative<FrameValuation>(v));
  EXPECT_EQ(std::get<FrameValuation>(v).values, (std::vector<Mask>{0b10}));
  for_each_small_modal_lframe(3, [](const ModalLFrame& F) {
    EXPECT_TRUE(frame_valid(F, parse_pair("F |- p")));
    return true;
  });
}

TEST(FrameValidates, AgreesWithOracle) {
  Rng rng(5);
  const std::vector<std::string> ls = {"p", "q"};
  for (int i = 0; i < 200; ++i) {
    auto F = random_modal_lframe(rng, rng.range(1, 4));
    ConsequencePair g{random_formula(rng, ls, rng.below(4), true), random_formula(rng, ls, rng.below(4), true)};
    EXPECT_EQ(frame_valid(F, g), oracle::frame_valid(to_frame(F), g)) << to_string(g);
  }
}

TEST(Morphisms, IdentityAndConstant) {
  auto X = ModalLFrame::identity(LFrame::chain(3));
  EXPECT_FALSE(bounded_l_morphism_violation(X, X, {0, 1, 2}).has_value());
  auto v = l_morphism_violation(LFrame::chain(2), LFrame::chain(2), {1, 1});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->condition, "1");
}

TEST(Morphisms, AgreeWithOracleOnAllMapsBetweenSmallFrames) {
  std::vector<ModalLFrame> fr;
  for_each_small_modal_lframe(3, [&](const ModalLFrame& F) {
    fr.push_back(F);
    return true;
  });
  std::size_t bounded = 0;
  for (const auto& X : fr)
    for (const auto& Y : fr) {
      const std::size_t n = X.size(), m = Y.size();
      std::vector<Id> f(n, 0);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
          const bool lib = !bounded_l_morphism_violation(X, Y, f).has_value();
          EXPECT_EQ(lib, oracle_bounded(to_frame(X), to_frame(Y), {f.begin(), f.end()}));
          bounded += lib;
          return;
        }
        for (Id y = 0; y < m; ++y) {
          f[i] = y;
          rec(i + 1);
        }
      };
      rec(0);
    }
  EXPECT_GT(bounded, fr.size());
}

TEST(SuccessorExtrema, WithinR) {
  for_each_small_modal_lframe(4, [](const ModalLFrame& F) {
    for (auto [x, y] : F.pairs()) {
      auto [z, t] = successor_extrema(F, x, y);
      EXPECT_TRUE(F.R(x, z) && F.R(x, t));
      EXPECT_TRUE(F.base().leq(z, y) && F.base().leq(y, t));
    }
    return true;
  });
  EXPECT_THROW(successor_extrema(ModalLFrame::identity(LFrame::chain(2)), 0, 1), Error);
}
