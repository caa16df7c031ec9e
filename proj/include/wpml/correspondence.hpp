// The axioms T, 4, B, 5, .2, their first-order frame conditions, the
// existential conditions used on tight frames, correspondence checks and
// preservation of the conditions by pullbacks.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpml/amalgam.hpp"
#include "wpml/common.hpp"
#include "wpml/duality.hpp"
#include "wpml/formula.hpp"
#include "wpml/lframe.hpp"

namespace wpml {

enum class Axiom { T, Four, B, Five, Dot2 };

inline const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> v = {Axiom::T, Axiom::Four, Axiom::B, Axiom::Five, Axiom::Dot2};
  return v;
}

inline const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::T: return "T";
    case Axiom::Four: return "4";
    case Axiom::B: return "B";
    case Axiom::Five: return "5";
    case Axiom::Dot2: return ".2";
  }
  return "?";
}

inline Axiom parse_axiom(const std::string& s) {
  for (Axiom a : all_axioms())
    if (s == to_string(a)) return a;
  throw Error(ErrorKind::Parse, "unknown axiom '" + s + "' (expected T, 4, B, 5 or .2)");
}

/// The consequence pairs of each axiom.
inline std::vector<ConsequencePair> axiom_pairs(Axiom a) {
  switch (a) {
    case Axiom::T: return {parse_pair("[]p |- p"), parse_pair("p |- <>p")};
    case Axiom::Four: return {parse_pair("[]p |- [][]p"), parse_pair("<><>p |- <>p")};
    case Axiom::B: return {parse_pair("p |- []<>p"), parse_pair("<>[]p |- p")};
    case Axiom::Five: return {parse_pair("<>p |- []<>p"), parse_pair("<>[]p |- []p")};
    case Axiom::Dot2: return {parse_pair("<>[]p |- []<>p")};
  }
  return {};
}

inline std::vector<ConsequencePair> axiom_set(const std::vector<Axiom>& gamma) {
  std::vector<ConsequencePair> out;
  for (Axiom a : gamma)
    for (auto& p : axiom_pairs(a)) out.push_back(p);
  return out;
}

enum class FrameCondition { Reflexivity, Transitivity, Symmetry, Euclideanity, Directedness };

inline const std::vector<FrameCondition>& all_conditions() {
  static const std::vector<FrameCondition> v = {FrameCondition::Reflexivity, FrameCondition::Transitivity,
                                                FrameCondition::Symmetry, FrameCondition::Euclideanity,
                                                FrameCondition::Directedness};
  return v;
}

inline const char* to_string(FrameCondition c) {
  switch (c) {
    case FrameCondition::Reflexivity: return "reflexivity";
    case FrameCondition::Transitivity: return "transitivity";
    case FrameCondition::Symmetry: return "symmetry";
    case FrameCondition::Euclideanity: return "euclideanity";
    case FrameCondition::Directedness: return "directedness";
  }
  return "?";
}

inline FrameCondition condition_of(Axiom a) {
  switch (a) {
    case Axiom::T: return FrameCondition::Reflexivity;
    case Axiom::Four: return FrameCondition::Transitivity;
    case Axiom::B: return FrameCondition::Symmetry;
    case Axiom::Five: return FrameCondition::Euclideanity;
    case Axiom::Dot2: return FrameCondition::Directedness;
  }
  return FrameCondition::Reflexivity;
}

/// Evaluates the first-order condition; the least failing tuple on failure.
inline std::optional<Violation> condition_violation(const ModalLFrame& F, FrameCondition c) {
  const std::size_t n = F.size();
  const char* name = to_string(c);
  switch (c) {
    case FrameCondition::Reflexivity:
      for (Id x = 0; x < n; ++x)
        if (!F.R(x, x)) return Violation{name, {x}};
      break;
    case FrameCondition::Transitivity:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z)
            if (F.R(x, y) && F.R(y, z) && !F.R(x, z)) return Violation{name, {x, y, z}};
      break;
    case FrameCondition::Symmetry:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          if (F.R(x, y) && !F.R(y, x)) return Violation{name, {x, y}};
      break;
    case FrameCondition::Euclideanity:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z)
            if (F.R(x, y) && F.R(x, z) && !F.R(y, z)) return Violation{name, {x, y, z}};
      break;
    case FrameCondition::Directedness:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z)
            if (F.R(x, y) && F.R(x, z) && (F.succ(y) & F.succ(z)) == 0) return Violation{name, {x, y, z}};
      break;
  }
  return std::nullopt;
}

inline bool frame_satisfies(const ModalLFrame& F, FrameCondition c) { return !condition_violation(F, c); }

/// The existential conditions the axiom yields on modal L-spaces, before
/// convexity is used. Witness names the clause ("a" or "b") and the tuple.
inline std::optional<Violation> existential_violation(const ModalLFrame& F, Axiom ax) {
  const auto& X = F.base();
  const std::size_t n = F.size();
  const std::string tag = to_string(ax);
  auto any = [&](Mask m, auto pred) {
    bool r = false;
    for_each_bit(m, [&](Id t) { r = r || pred(t); });
    return r;
  };
  switch (ax) {
    case Axiom::T:
      for (Id x = 0; x < n; ++x) {
        if (!any(F.succ(x), [&](Id y) { return X.leq(y, x); })) return Violation{tag + "a", {x}};
        if (!any(F.succ(x), [&](Id y) { return X.leq(x, y); })) return Violation{tag + "b", {x}};
      }
      break;
    case Axiom::Four:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z) {
            if (!F.R(x, y) || !F.R(y, z)) continue;
            if (!any(F.succ(x), [&](Id t) { return X.leq(t, z); })) return Violation{tag + "a", {x, y, z}};
            if (!any(F.succ(x), [&](Id t) { return X.leq(z, t); })) return Violation{tag + "b", {x, y, z}};
          }
      break;
    case Axiom::B:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y) {
          if (!F.R(x, y)) continue;
          if (!any(F.succ(y), [&](Id z) { return X.leq(x, z); })) return Violation{tag + "a", {x, y}};
          if (!any(F.succ(y), [&](Id z) { return X.leq(z, x); })) return Violation{tag + "b", {x, y}};
        }
      break;
    case Axiom::Five:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z) {
            if (!F.R(x, y) || !F.R(x, z)) continue;
            if (!any(F.succ(y), [&](Id t) { return X.leq(z, t); })) return Violation{tag + "a", {x, y, z}};
            if (!any(F.succ(y), [&](Id t) { return X.leq(t, z); })) return Violation{tag + "b", {x, y, z}};
          }
      break;
    case Axiom::Dot2:
      for (Id x = 0; x < n; ++x)
        for (Id y = 0; y < n; ++y)
          for (Id z = 0; z < n; ++z) {
            if (!F.R(x, y) || !F.R(x, z)) continue;
            bool ok = false;
            for_each_bit(F.succ(y), [&](Id u) { ok = ok || (F.succ(z) & X.up(u)) != 0; });
            if (!ok) return Violation{tag, {x, y, z}};
          }
      break;
  }
  return std::nullopt;
}

struct CorrespondenceReport {
  Axiom axiom = Axiom::T;
  FrameCondition condition = FrameCondition::Reflexivity;
  bool condition_holds = false;
  std::optional<Violation> condition_witness;
  std::vector<bool> pair_valid;
  std::vector<std::optional<FrameValuation>> countervaluations;
  bool tight = false;
  std::optional<bool> existential_holds;  // tight frames only
  bool sound = false;                     // condition ⇒ all pairs valid
  std::optional<bool> converse;           // tight: valid ⇔ condition ⇔ existential
  bool consistent = false;
};

inline CorrespondenceReport correspondence_check(const ModalLFrame& F, Axiom ax,
                                                 std::size_t budget = kDefaultBudget) {
  CorrespondenceReport r;
  r.axiom = ax;
  r.condition = condition_of(ax);
  r.condition_witness = condition_violation(F, r.condition);
  r.condition_holds = !r.condition_witness;
  bool all_valid = true;
  for (const auto& p : axiom_pairs(ax)) {
    auto v = frame_validates(F, p, budget);
    const bool ok = std::holds_alternative<Valid>(v);
    r.pair_valid.push_back(ok);
    r.countervaluations.push_back(ok ? std::nullopt : std::optional<FrameValuation>(std::get<FrameValuation>(v)));
    all_valid = all_valid && ok;
  }
  r.sound = !r.condition_holds || all_valid;
  r.tight = is_tight(F);
  if (r.tight) {
    r.existential_holds = !existential_violation(F, ax);
    r.converse = (all_valid == r.condition_holds) && (all_valid == *r.existential_holds);
  }
  r.consistent = r.sound && r.converse.value_or(true);
  return r;
}

// ---------------------------------------------------------------------------
// Pullback closure

struct PreservationReport {
  bool legs_satisfy = false;
  bool holds = false;
  std::optional<Violation> witness;
  std::size_t pullback_size = 0;
};

/// Whether Pb(f1,f2) satisfies the condition, given that Y1, Y2 and X do.
inline PreservationReport pullback_preserves(FrameCondition c, const ModalLFrame& Y1, const ModalLFrame& Y2,
                                             const ModalLFrame& X, const std::vector<Id>& f1,
                                             const std::vector<Id>& f2) {
  PreservationReport r;
  r.legs_satisfy = frame_satisfies(Y1, c) && frame_satisfies(Y2, c) && frame_satisfies(X, c);
  if (!r.legs_satisfy) throw Error(ErrorKind::Precondition, std::string("legs do not satisfy ") + to_string(c));
  const auto P = pullback(Y1, Y2, X, f1, f2);
  r.pullback_size = P.points.size();
  r.witness = condition_violation(P.frame, c);
  r.holds = !r.witness;
  return r;
}

/// Horn closure check: every universal-Horn condition holding in Y1 and Y2
/// holds in the full product Y1 × Y2 (of which Pb is a substructure).
inline bool product_satisfies(FrameCondition c, const ModalLFrame& Y1, const ModalLFrame& Y2) {
  const std::size_t n1 = Y1.size(), n2 = Y2.size();
  check_size(n1 * n2, "product frame");
  std::vector<std::vector<Id>> meet(n1 * n2, std::vector<Id>(n1 * n2));
  std::vector<Mask> succ(n1 * n2, 0);
  for (Id a = 0; a < n1 * n2; ++a)
    for (Id b = 0; b < n1 * n2; ++b) {
      meet[a][b] = Y1.base().meet(a / n2, b / n2) * n2 + Y2.base().meet(a % n2, b % n2);
      if (Y1.R(a / n2, b / n2) && Y2.R(a % n2, b % n2)) succ[a] |= bit(b);
    }
  auto base = LFrame::from_meet(std::move(meet), Y1.base().one() * n2 + Y2.base().one());
  return frame_satisfies(ModalLFrame(std::move(base), std::move(succ)), c);
}

}  // namespace wpml
