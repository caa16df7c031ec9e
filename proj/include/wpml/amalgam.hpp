// Superamalgamation through the dual pullback, witness extraction, and the
// comparison with (L1,L2)-filters on glued lattices.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wpml/common.hpp"
#include "wpml/duality.hpp"
#include "wpml/lattice.hpp"
#include "wpml/lframe.hpp"

namespace wpml {

/// K ↪ L1 and K ↪ L2.
struct VFormation {
  FiniteModalLattice K, L1, L2;
  LatticeMorphism h1, h2;
};

/// Throws Validation unless all three algebras are modal lattices and both
/// legs are embeddings (modal when flagged).
inline void validate_vformation(const VFormation& v) {
  require_modal_lattice(v.K);
  require_modal_lattice(v.L1);
  require_modal_lattice(v.L2);
  int leg = 1;
  for (const auto* p : {&v.h1, &v.h2}) {
    const auto& cod = leg == 1 ? v.L1 : v.L2;
    if (auto bad = check_homomorphism(v.K, cod, *p)) {
      throw Error(ErrorKind::Validation, "h" + std::to_string(leg) + " does not preserve " + bad->condition);
    }
    if (!is_injective(p->map)) throw Error(ErrorKind::Validation, "h" + std::to_string(leg) + " is not injective");
    ++leg;
  }
}

struct PullbackFrame {
  ModalLFrame frame;
  std::vector<std::pair<Id, Id>> points;  // lexicographic
  std::vector<Id> pi1, pi2;
};

/// Pb(f1,f2) = {(y1,y2) : f1(y1) = f2(y2)} with componentwise ⋏ and R.
/// Validates the legs, the resulting frame and both projections.
inline PullbackFrame pullback(const ModalLFrame& Y1, const ModalLFrame& Y2, const ModalLFrame& X,
                              const std::vector<Id>& f1, const std::vector<Id>& f2) {
  int leg = 1;
  for (const auto* fp : {&f1, &f2}) {
    const auto& Y = leg == 1 ? Y1 : Y2;
    if (auto bad = bounded_l_morphism_violation(Y, X, *fp)) {
      throw Error(ErrorKind::Precondition, "MorphismInvalid: f" + std::to_string(leg) + " fails " + bad->condition);
    }
    if (!is_surjective(*fp, X.size())) {
      throw Error(ErrorKind::Precondition, "NotSurjective: f" + std::to_string(leg));
    }
    ++leg;
  }
  PullbackFrame P;
  std::map<std::pair<Id, Id>, Id> index;
  for (Id a = 0; a < Y1.size(); ++a)
    for (Id b = 0; b < Y2.size(); ++b)
      if (f1[a] == f2[b]) {
        index.emplace(std::make_pair(a, b), P.points.size());
        P.points.emplace_back(a, b);
      }
  const std::size_t n = P.points.size();
  check_size(n, "pullback");
  std::vector<std::string> names(n);
  std::vector<std::vector<Id>> meet(n, std::vector<Id>(n));
  for (Id i = 0; i < n; ++i) {
    const auto [a, b] = P.points[i];
    names[i] = "(" + Y1.base().name(a) + "," + Y2.base().name(b) + ")";
    for (Id j = 0; j < n; ++j) {
      const auto [c, d] = P.points[j];
      meet[i][j] = index.at({Y1.base().meet(a, c), Y2.base().meet(b, d)});
    }
  }
  auto base = LFrame::from_meet(std::move(names), std::move(meet), index.at({Y1.base().one(), Y2.base().one()}));
  std::vector<Mask> succ(n, 0);
  for (Id i = 0; i < n; ++i)
    for (Id j = 0; j < n; ++j)
      if (Y1.R(P.points[i].first, P.points[j].first) && Y2.R(P.points[i].second, P.points[j].second)) {
        succ[i] |= bit(j);
      }
  P.frame = ModalLFrame(std::move(base), std::move(succ));
  for (const auto& [a, b] : P.points) {
    P.pi1.push_back(a);
    P.pi2.push_back(b);
  }
  if (auto bad = modal_lframe_violation(P.frame)) {
    throw Error(ErrorKind::InternalInconsistency, "pullback violates modal L-frame condition " + bad->condition);
  }
  if (auto bad = bounded_l_morphism_violation(P.frame, Y1, P.pi1)) {
    throw Error(ErrorKind::InternalInconsistency, "pi1 fails " + bad->condition);
  }
  if (auto bad = bounded_l_morphism_violation(P.frame, Y2, P.pi2)) {
    throw Error(ErrorKind::InternalInconsistency, "pi2 fails " + bad->condition);
  }
  if (!is_surjective(P.pi1, Y1.size()) || !is_surjective(P.pi2, Y2.size())) {
    throw Error(ErrorKind::InternalInconsistency, "a pullback projection is not surjective");
  }
  return P;
}

struct WitnessEntry {
  Id a = 0;
  Id b = 0;
  std::optional<Id> c;
};

struct AmalgamReport {
  bool commutes = false;
  bool p1_injective = false;
  bool p2_injective = false;
  bool p1_homomorphism = false;
  bool p2_homomorphism = false;
  bool claim_holds = false;
  std::size_t claims_checked = 0;
  std::size_t pullback_size = 0;
  std::vector<WitnessEntry> witnesses;  // every (a,b) with p1(a) ⊆ p2(b)
  std::vector<std::string> failures;
  bool pass = false;
};

/// The dual construction for one V-formation. p1/p2 hold, for each element,
/// the point set π_i⁻¹[φ_i(a)] ⊆ Pb.
struct Superamalgam {
  ModalLSpaceFin XK, X1, X2;
  std::vector<Id> f1, f2;
  PullbackFrame pb;
  std::vector<Mask> p1, p2;
  AmalgamReport report;
};

namespace detail {

inline std::vector<Mask> embed_points(const ModalLSpaceFin& X, const std::vector<Id>& pi, std::size_t n_alg) {
  std::vector<Mask> out(n_alg, 0);
  for (Id a = 0; a < n_alg; ++a)
    for (Id P = 0; P < pi.size(); ++P)
      if (has(X.provenance[pi[P]], a)) out[a] |= bit(P);
  return out;
}

/// Checks that a ↦ p[a] is a modal-lattice homomorphism into Fil_F(Pb)
/// without building that lattice.
inline std::optional<std::string> check_point_embedding(const FiniteModalLattice& A, const ModalLFrame& F,
                                                        const std::vector<Mask>& p) {
  const auto& X = F.base();
  const auto& L = A.base;
  for (Id a = 0; a < L.size(); ++a)
    if (!X.is_filter(p[a])) return "image of " + L.name(a) + " is not a filter";
  if (p[L.bot()] != bit(X.one())) return "bottom not preserved";
  if (p[L.top()] != full_mask(X.size())) return "top not preserved";
  for (Id a = 0; a < L.size(); ++a) {
    if (p[A.box[a]] != F.box(p[a])) return "box not preserved at " + L.name(a);
    if (p[A.diamond[a]] != F.diamond(p[a])) return "diamond not preserved at " + L.name(a);
    for (Id b = 0; b < L.size(); ++b) {
      if (p[L.meet(a, b)] != (p[a] & p[b])) return "meet not preserved";
      Mask gen = 0;
      for_each_bit(p[a], [&](Id y) { for_each_bit(p[b], [&](Id z) { gen |= X.up(X.meet(y, z)); }); });
      if (p[L.join(a, b)] != gen) return "join not preserved";
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Runs the dual pullback construction and verifies commutativity,
/// injectivity, homomorphism of both p_i, the separation claim on every
/// pair of filters, and a witness in K for every (a,b) with p1(a) ⊆ p2(b).
inline Superamalgam superamalgamate(const VFormation& v) {
  validate_vformation(v);
  Superamalgam S;
  S.XK = fil_l(v.K);
  S.X1 = fil_l(v.L1);
  S.X2 = fil_l(v.L2);
  S.f1 = dual_of_hom(v.K, S.XK, S.X1, v.h1);
  S.f2 = dual_of_hom(v.K, S.XK, S.X2, v.h2);
  S.pb = pullback(S.X1.frame, S.X2.frame, S.XK.frame, S.f1, S.f2);
  S.p1 = detail::embed_points(S.X1, S.pb.pi1, v.L1.size());
  S.p2 = detail::embed_points(S.X2, S.pb.pi2, v.L2.size());

  auto& r = S.report;
  r.pullback_size = S.pb.points.size();
  r.commutes = true;
  for (Id c = 0; c < v.K.size(); ++c)
    if (S.p1[v.h1(c)] != S.p2[v.h2(c)]) {
      r.commutes = false;
      r.failures.push_back("p1 h1 and p2 h2 differ at " + v.K.base.name(c));
    }
  r.p1_injective = is_injective(std::vector<Id>(S.p1.begin(), S.p1.end()));
  r.p2_injective = is_injective(std::vector<Id>(S.p2.begin(), S.p2.end()));
  if (!r.p1_injective) r.failures.push_back("p1 is not injective");
  if (!r.p2_injective) r.failures.push_back("p2 is not injective");
  auto e1 = detail::check_point_embedding(v.L1, S.pb.frame, S.p1);
  auto e2 = detail::check_point_embedding(v.L2, S.pb.frame, S.p2);
  r.p1_homomorphism = !e1;
  r.p2_homomorphism = !e2;
  if (e1) r.failures.push_back("p1: " + *e1);
  if (e2) r.failures.push_back("p2: " + *e2);

  // Separation claim, for every filter U of Y1 and V of Y2.
  const auto& Y1 = S.X1.frame.base();
  const auto& Y2 = S.X2.frame.base();
  const auto& X = S.XK.frame.base();
  r.claim_holds = true;
  auto claim_fail = [&](const std::string& what, Mask U, Mask V) {
    if (r.claim_holds) r.failures.push_back("claim: " + what + " for U=" + mask_name(Y1, U) + " V=" + mask_name(Y2, V));
    r.claim_holds = false;
  };
  for (Mask U : filters(Y1)) {
    Mask up_f1U = 0;
    for_each_bit(U, [&](Id y) { up_f1U |= X.up(S.f1[y]); });
    Mask pre1 = 0;
    for (Id P = 0; P < S.pb.points.size(); ++P)
      if (has(U, S.pb.pi1[P])) pre1 |= bit(P);
    for (Mask V : filters(Y2)) {
      ++r.claims_checked;
      Mask down_f2 = 0;
      for_each_bit(full_mask(Y2.size()) & ~V, [&](Id y) { down_f2 |= X.down(S.f2[y]); });
      if (!X.is_filter(up_f1U)) claim_fail("up f1[U] is not a filter", U, V);
      if (!X.is_filter(full_mask(X.size()) & ~down_f2)) claim_fail("complement of down f2[Y2-V] is not a filter", U, V);
      Mask pre2 = 0;
      for (Id P = 0; P < S.pb.points.size(); ++P)
        if (has(V, S.pb.pi2[P])) pre2 |= bit(P);
      if (!subset(pre1, pre2)) continue;
      if ((up_f1U & down_f2) != 0) {
        claim_fail("up f1[U] meets down f2[Y2-V]", U, V);
        continue;
      }
      try {
        const Mask W = separating_filter(X, up_f1U, down_f2);
        Mask f1W = 0, f2W = 0;
        for (Id y = 0; y < Y1.size(); ++y)
          if (has(W, S.f1[y])) f1W |= bit(y);
        for (Id y = 0; y < Y2.size(); ++y)
          if (has(W, S.f2[y])) f2W |= bit(y);
        if (!subset(U, f1W) || !subset(f2W, V)) claim_fail("separating filter does not interpolate", U, V);
      } catch (const Error& e) {
        claim_fail(e.what(), U, V);
      }
    }
  }

  bool all_witnessed = true;
  for (Id a = 0; a < v.L1.size(); ++a)
    for (Id b = 0; b < v.L2.size(); ++b) {
      if (!subset(S.p1[a], S.p2[b])) continue;
      WitnessEntry w{a, b, std::nullopt};
      for (Id c = 0; c < v.K.size() && !w.c; ++c)
        if (v.L1.base.leq(a, v.h1(c)) && v.L2.base.leq(v.h2(c), b)) w.c = c;
      if (!w.c) {
        all_witnessed = false;
        r.failures.push_back("no witness for (" + v.L1.base.name(a) + "," + v.L2.base.name(b) + ")");
      }
      r.witnesses.push_back(w);
    }
  r.pass = r.commutes && r.p1_injective && r.p2_injective && r.p1_homomorphism && r.p2_homomorphism &&
           r.claim_holds && all_witnessed;
  return S;
}

struct NoneNeeded {
  bool operator==(const NoneNeeded&) const = default;
};
struct NoWitness {
  bool operator==(const NoWitness&) const = default;
};

using AlgebraicInterpolant = std::variant<NoneNeeded, Id, NoWitness>;

/// The least c ∈ K with a ≤ h1(c) and h2(c) ≤ b when p1(a) ⊆ p2(b).
inline AlgebraicInterpolant find_algebraic_interpolant(const VFormation& v, const Superamalgam& S, Id a, Id b) {
  if (!subset(S.p1.at(a), S.p2.at(b))) return NoneNeeded{};
  for (Id c = 0; c < v.K.size(); ++c)
    if (v.L1.base.leq(a, v.h1(c)) && v.L2.base.leq(v.h2(c), b)) return c;
  return NoWitness{};
}

inline AlgebraicInterpolant find_algebraic_interpolant(const VFormation& v, Id a, Id b) {
  return find_algebraic_interpolant(v, superamalgamate(v), a, b);
}

// ---------------------------------------------------------------------------
// (L1,L2)-filters

struct JonssonReport {
  std::size_t carrier_size = 0;
  std::vector<Mask> filters;  // nonempty (L1,L2)-filters over the glued carrier
  std::size_t pullback_size = 0;
  bool bijection = false;
  bool order_reversing_iso = false;
  bool is_lattice = false;
  bool superamalgam = false;
  std::vector<std::string> failures;
  bool pass = false;
};

inline constexpr std::size_t kMaxGluedCarrier = 20;

/// K's ids must be a common prefix of L1 and L2 with h1, h2 the identity on
/// it. The glued carrier lists L1, then L2's ids beyond K. Non-modal only.
inline JonssonReport jonsson_filters(const VFormation& v) {
  const std::size_t k = v.K.size(), n1 = v.L1.size(), n2 = v.L2.size();
  for (Id c = 0; c < k; ++c)
    if (v.h1(c) != c || v.h2(c) != c) {
      throw Error(ErrorKind::Precondition, "GluingMismatch: K ids must embed identically as a prefix of L1 and L2");
    }
  validate_vformation(v);
  for (Id a = 0; a < k; ++a)
    for (Id b = 0; b < k; ++b)
      if (v.L1.base.leq(a, b) != v.L2.base.leq(a, b)) {
        throw Error(ErrorKind::Precondition, "GluingMismatch: L1 and L2 disagree on K");
      }
  JonssonReport r;
  const std::size_t N = n1 + n2 - k;
  r.carrier_size = N;
  if (N > kMaxGluedCarrier) throw Error(ErrorKind::ResourceBound, "glued carrier exceeds 20 elements");
  auto g2 = [&](Id j) -> Id { return j < k ? j : n1 + (j - k); };  // L2 id → glued id
  Mask in1 = full_mask(n1), in2 = 0;
  for (Id j = 0; j < n2; ++j) in2 |= bit(g2(j));

  // Glued order: transitive closure of ≤1 ∪ ≤2.
  std::vector<Mask> up(N, 0);
  for (Id a = 0; a < n1; ++a)
    for (Id b = 0; b < n1; ++b)
      if (v.L1.base.leq(a, b)) up[a] |= bit(b);
  for (Id a = 0; a < n2; ++a)
    for (Id b = 0; b < n2; ++b)
      if (v.L2.base.leq(a, b)) up[g2(a)] |= bit(g2(b));
  for (bool changed = true; changed;) {
    changed = false;
    for (Id a = 0; a < N; ++a) {
      Mask m = up[a];
      for_each_bit(up[a], [&](Id b) { m |= up[b]; });
      if (m != up[a]) {
        up[a] = m;
        changed = true;
      }
    }
  }
  auto meet_closed = [&](Mask F) {
    bool ok = true;
    for_each_bit(F & in1, [&](Id a) {
      for_each_bit(F & in1, [&](Id b) {
        if (!has(F, v.L1.base.meet(a, b))) ok = false;
      });
    });
    for (Id a = 0; a < n2 && ok; ++a)
      for (Id b = 0; b < n2 && ok; ++b)
        if (has(F, g2(a)) && has(F, g2(b)) && !has(F, g2(v.L2.base.meet(a, b)))) ok = false;
    return ok;
  };
  for (Mask F = 1; F < (Mask{1} << N); ++F) {
    Mask closure = 0;
    for_each_bit(F, [&](Id a) { closure |= up[a]; });
    if (closure == F && meet_closed(F)) r.filters.push_back(F);
  }

  // Pullback of the dual legs.
  auto S = superamalgamate(v);
  r.pullback_size = S.pb.points.size();
  std::vector<Id> image;
  bool well_defined = true;
  for (Mask F : r.filters) {
    const Mask G1 = F & in1;
    Mask G2 = 0;
    for (Id j = 0; j < n2; ++j)
      if (has(F, g2(j))) G2 |= bit(j);
    std::optional<Id> hit;
    for (Id P = 0; P < S.pb.points.size(); ++P)
      if (S.X1.provenance[S.pb.pi1[P]] == G1 && S.X2.provenance[S.pb.pi2[P]] == G2) hit = P;
    if (!hit) {
      well_defined = false;
      r.failures.push_back("filter " + std::to_string(F) + " has no pullback point");
      continue;
    }
    image.push_back(*hit);
  }
  r.bijection = well_defined && image.size() == r.pullback_size && is_injective(image);
  if (!r.bijection) r.failures.push_back("F -> (F cap L1, F cap L2) is not a bijection onto Pb");

  if (r.bijection) {
    r.order_reversing_iso = true;
    const auto& PX = S.pb.frame.base();
    for (std::size_t i = 0; i < r.filters.size(); ++i)
      for (std::size_t j = 0; j < r.filters.size(); ++j)
        if (subset(r.filters[i], r.filters[j]) != PX.leq(image[i], image[j])) r.order_reversing_iso = false;
    if (!r.order_reversing_iso) r.failures.push_back("bijection is not an order isomorphism");
  }

  // Reverse inclusion is a lattice, and a ↦ ↑a embeds both sides as a
  // superamalgam.
  const std::size_t m = r.filters.size();
  std::vector<std::vector<bool>> leq(m, std::vector<bool>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) leq[i][j] = subset(r.filters[j], r.filters[i]);
  std::optional<FiniteLattice> M;
  auto find = [&](Mask F) -> std::optional<Id> {
    auto it = std::find(r.filters.begin(), r.filters.end(), F);
    if (it == r.filters.end()) return std::nullopt;
    return static_cast<Id>(it - r.filters.begin());
  };
  try {
    auto bot = find(full_mask(N));
    auto top = find(up[v.K.base.top()]);
    if (bot && top) M = FiniteLattice::from_order(leq, *bot, *top);
  } catch (const LatticeError& e) {
    r.failures.push_back(std::string("reverse inclusion: ") + e.what());
  }
  r.is_lattice = M.has_value();
  if (M) {
    auto Mm = FiniteModalLattice::identity(*M);
    bool ok = true;
    LatticeMorphism q1{std::vector<Id>(n1), false}, q2{std::vector<Id>(n2), false};
    for (Id a = 0; a < n1 && ok; ++a) {
      auto i = find(up[a]);
      ok = i.has_value();
      if (ok) q1.map[a] = *i;
    }
    for (Id b = 0; b < n2 && ok; ++b) {
      auto i = find(up[g2(b)]);
      ok = i.has_value();
      if (ok) q2.map[b] = *i;
    }
    auto L1 = FiniteModalLattice::identity(v.L1.base);
    auto L2 = FiniteModalLattice::identity(v.L2.base);
    ok = ok && !check_homomorphism(L1, Mm, q1) && !check_homomorphism(L2, Mm, q2) && is_injective(q1.map) &&
         is_injective(q2.map);
    for (Id a = 0; a < n1 && ok; ++a)
      for (Id b = 0; b < n2 && ok; ++b) {
        if (!M->leq(q1(a), q2(b))) continue;
        bool w = false;
        for (Id c = 0; c < k && !w; ++c) w = v.L1.base.leq(a, c) && v.L2.base.leq(c, b);
        ok = w;
      }
    r.superamalgam = ok;
    if (!ok) r.failures.push_back("up-set embeddings do not form a superamalgam");
  }
  r.pass = r.bijection && r.order_reversing_iso && r.is_lattice && r.superamalgam;
  return r;
}

}  // namespace wpml
