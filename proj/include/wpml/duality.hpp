// Finite duality between modal lattices and tight modal L-frames: the
// filter-space functor, its inverse direction via fil_f, morphism
// dualization, round trips, tightness and separation.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpml/common.hpp"
#include "wpml/lattice.hpp"
#include "wpml/lframe.hpp"

namespace wpml {

/// A finite modal L-space: the frame plus, per point, the algebra filter it
/// came from (empty when the frame was not produced by fil_l).
struct ModalLSpaceFin {
  ModalLFrame frame;
  std::vector<Mask> provenance;
};

/// Filters of a finite lattice, ordered by mask: the principal up-sets.
inline std::vector<Mask> algebra_filters(const FiniteLattice& L) {
  std::vector<Mask> out;
  for (Id a = 0; a < L.size(); ++a) out.push_back(L.up(a));
  std::sort(out.begin(), out.end());
  return out;
}

/// Points are the filters of A; ⋏ = ∩, 1 = the improper filter, and
/// F R G iff (□a ∈ F ⇒ a ∈ G) and (a ∈ G ⇒ ◇a ∈ F) for all a.
inline ModalLSpaceFin fil_l(const FiniteModalLattice& A) {
  const auto& L = A.base;
  const auto fs = algebra_filters(L);
  const std::size_t n = fs.size();
  auto idx = [&](Mask m) -> Id {
    auto it = std::lower_bound(fs.begin(), fs.end(), m);
    if (it == fs.end() || *it != m) throw Error(ErrorKind::InternalInconsistency, "intersection of filters is not a filter");
    return static_cast<Id>(it - fs.begin());
  };
  std::vector<std::string> names(n);
  std::vector<std::vector<Id>> meet(n, std::vector<Id>(n));
  for (Id i = 0; i < n; ++i) {
    names[i] = "^" + L.name(L.meet_all(fs[i]));
    for (Id j = 0; j < n; ++j) meet[i][j] = idx(fs[i] & fs[j]);
  }
  auto X = LFrame::from_meet(std::move(names), std::move(meet), idx(full_mask(L.size())));
  std::vector<Mask> succ(n, 0);
  for (Id i = 0; i < n; ++i) {
    for (Id j = 0; j < n; ++j) {
      bool ok = true;
      for (Id a = 0; a < L.size() && ok; ++a) {
        if (has(fs[i], A.box[a]) && !has(fs[j], a)) ok = false;
        if (has(fs[j], a) && !has(fs[i], A.diamond[a])) ok = false;
      }
      if (ok) succ[i] |= bit(j);
    }
  }
  return {ModalLFrame(std::move(X), std::move(succ)), fs};
}

/// In the finite case every filter is clopen, so this is fil_f.
inline FilterLattice clopfil(const ModalLSpaceFin& X) { return fil_f(X.frame); }

struct RoundTrip {
  FilterLattice codomain;
  LatticeMorphism iso;  // a ↦ φ(a) = {F : a ∈ F}
};

/// The unit a ↦ φ(a) into clopfil(fil_l(A)), verified to be a bijective
/// modal-lattice homomorphism. Failure throws InternalInconsistency.
inline RoundTrip round_trip_iso(const FiniteModalLattice& A) {
  const auto X = fil_l(A);
  auto C = clopfil(X);
  LatticeMorphism phi{std::vector<Id>(A.size()), true};
  for (Id a = 0; a < A.size(); ++a) {
    Mask pts = 0;
    for (Id F = 0; F < X.provenance.size(); ++F)
      if (has(X.provenance[F], a)) pts |= bit(F);
    auto i = C.index_of(pts);
    if (!i) {
      throw Error(ErrorKind::InternalInconsistency, "phi(" + A.base.name(a) + ") is not a filter of the dual space");
    }
    phi.map[a] = *i;
  }
  if (C.algebra.size() != A.size() || !is_injective(phi.map)) {
    throw Error(ErrorKind::InternalInconsistency, "phi is not a bijection");
  }
  if (auto v = check_homomorphism(A, C.algebra, phi)) {
    std::string w;
    for (auto i : v->witness) w += " " + A.base.name(i);
    throw Error(ErrorKind::InternalInconsistency, "phi does not preserve " + v->condition + " at" + w);
  }
  return {std::move(C), std::move(phi)};
}

/// F ↦ h⁻¹[F] from fil_l(B) to fil_l(A), for h: A → B.
inline std::vector<Id> dual_of_hom(const FiniteModalLattice& A, const ModalLSpaceFin& XA,
                                   const ModalLSpaceFin& XB, const LatticeMorphism& h) {
  std::vector<Id> f(XB.provenance.size());
  for (Id F = 0; F < XB.provenance.size(); ++F) {
    Mask pre = 0;
    for (Id a = 0; a < A.size(); ++a)
      if (has(XB.provenance[F], h(a))) pre |= bit(a);
    auto it = std::lower_bound(XA.provenance.begin(), XA.provenance.end(), pre);
    if (it == XA.provenance.end() || *it != pre) {
      throw Error(ErrorKind::InternalInconsistency, "preimage of a filter is not a filter");
    }
    f[F] = static_cast<Id>(it - XA.provenance.begin());
  }
  return f;
}

inline std::vector<Id> dual_of_hom(const FiniteModalLattice& A, const FiniteModalLattice& B,
                                   const LatticeMorphism& h) {
  return dual_of_hom(A, fil_l(A), fil_l(B), h);
}

/// U ↦ f⁻¹[U] from fil_f(Y) to fil_f(X), for f: X → Y.
inline LatticeMorphism dual_of_frame_morphism(const FilterLattice& FX, const FilterLattice& FY,
                                              const std::vector<Id>& f, bool modal) {
  LatticeMorphism g{std::vector<Id>(FY.filters.size()), modal};
  for (Id u = 0; u < FY.filters.size(); ++u) {
    Mask pre = 0;
    for (Id x = 0; x < f.size(); ++x)
      if (has(FY.filters[u], f[x])) pre |= bit(x);
    auto i = FX.index_of(pre);
    if (!i) throw Error(ErrorKind::Precondition, "preimage of a filter is not a filter; not an L-morphism");
    g.map[u] = *i;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Tightness

/// x R' y iff for every filter U: x ∈ □U ⇒ y ∈ U, and y ∈ U ⇒ x ∈ ◇U.
inline ModalLFrame tighten(const ModalLFrame& F) {
  const auto fs = filters(F.base());
  std::vector<Mask> boxes, dias;
  for (Mask U : fs) {
    boxes.push_back(F.box(U));
    dias.push_back(F.diamond(U));
  }
  std::vector<Mask> succ(F.size(), 0);
  for (Id x = 0; x < F.size(); ++x)
    for (Id y = 0; y < F.size(); ++y) {
      bool ok = true;
      for (std::size_t u = 0; u < fs.size() && ok; ++u) {
        if (has(boxes[u], x) && !has(fs[u], y)) ok = false;
        if (has(fs[u], y) && !has(dias[u], x)) ok = false;
      }
      if (ok) succ[x] |= bit(y);
    }
  return {F.base(), std::move(succ)};
}

inline bool is_tight(const ModalLFrame& F) { return tighten(F).succ_rows() == F.succ_rows(); }

/// x ↦ {U : x ∈ U} from F into fil_l(fil_f(F)) when it is an isomorphism of
/// modal L-frames; it is one exactly when F is tight.
inline std::optional<std::vector<Id>> frame_round_trip(const ModalLFrame& F) {
  const auto A = fil_f(F);
  const auto S = fil_l(A.algebra);
  const std::size_t n = F.size();
  if (S.frame.size() != n) return std::nullopt;
  std::vector<Id> g(n);
  for (Id x = 0; x < n; ++x) {
    Mask m = 0;
    for (Id i = 0; i < A.filters.size(); ++i)
      if (has(A.filters[i], x)) m |= bit(i);
    auto it = std::find(S.provenance.begin(), S.provenance.end(), m);
    if (it == S.provenance.end()) return std::nullopt;
    g[x] = static_cast<Id>(it - S.provenance.begin());
  }
  if (!is_injective(g)) return std::nullopt;
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      if (g[F.base().meet(x, y)] != S.frame.base().meet(g[x], g[y]) || F.R(x, y) != S.frame.R(g[x], g[y]))
        return std::nullopt;
  return g;
}

// ---------------------------------------------------------------------------
// Separation

/// For a filter U and a set V whose complement is a filter, disjoint from U:
/// the inclusion-least filter W with U ⊆ W and W ∩ V = ∅, which is U itself.
inline Mask separating_filter(const LFrame& X, Mask U, Mask V) {
  if (!X.is_filter(U)) throw Error(ErrorKind::Precondition, "U is not a filter");
  if (!X.is_filter(full_mask(X.size()) & ~V)) throw Error(ErrorKind::Precondition, "the complement of V is not a filter");
  if ((U & V) != 0) throw Error(ErrorKind::Precondition, "U and V intersect");
  const Mask W = X.generated_filter(U);
  if ((W & V) != 0) throw Error(ErrorKind::InternalInconsistency, "generated filter meets V");
  return W;
}

}  // namespace wpml
