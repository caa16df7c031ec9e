// Seeded generators. Every draw goes through Rng::below, so a seed gives the
// same objects on every platform (std distributions are not portable).

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wpml/amalgam.hpp"
#include "wpml/correspondence.hpp"
#include "wpml/formula.hpp"
#include "wpml/lattice.hpp"
#include "wpml/lframe.hpp"

namespace wpml {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}
  /// Stream `index` of `seed`; sweeps give each instance its own stream.
  Rng(std::uint64_t seed, std::uint64_t index) : gen_(splitmix64(seed ^ splitmix64(index + 1))) {}

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      const std::uint64_t r = gen_();
      if (r < limit) return r % n;
    }
  }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  Mask mask(std::size_t n) { return n == 0 ? 0 : gen_() & full_mask(n); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Semilattices and lattices

/// A random ∩-closed family of subsets of an n-set containing the full set,
/// grown one random subset at a time until it has exactly n members.
/// Ordered by inclusion, it is an L-frame with 1 = the full set.
inline LFrame random_lframe(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Precondition, "size must be at least 1");
  check_size(n, "random L-frame");
  std::vector<Mask> fam = {full_mask(n)};
  auto close = [](std::vector<Mask> f, Mask s) {
    f.push_back(s);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const Mask m = f[i] & f[j];
        if (std::find(f.begin(), f.end(), m) == f.end()) f.push_back(m);
      }
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
  };
  for (std::size_t tries = 0; fam.size() < n; ++tries) {
    if (tries > 64 * n) fam = {full_mask(n)}, tries = 0;
    auto next = close(fam, rng.mask(n));
    if (next.size() <= n) fam = std::move(next);
  }
  std::sort(fam.begin(), fam.end(), [](Mask a, Mask b) {
    return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
  });
  std::vector<std::vector<Id>> meet(n, std::vector<Id>(n));
  for (Id i = 0; i < n; ++i)
    for (Id j = 0; j < n; ++j)
      meet[i][j] = static_cast<Id>(std::find(fam.begin(), fam.end(), fam[i] & fam[j]) - fam.begin());
  return LFrame::from_meet(std::move(meet), n - 1);
}

/// The L-frame's order as a bounded lattice (finite meet semilattices with
/// top are lattices).
inline FiniteLattice lattice_of(const LFrame& X) {
  std::vector<std::vector<bool>> leq(X.size(), std::vector<bool>(X.size()));
  for (Id a = 0; a < X.size(); ++a)
    for (Id b = 0; b < X.size(); ++b) leq[a][b] = X.leq(a, b);
  return FiniteLattice::from_order(X.names(), leq, X.bottom(), X.one());
}

inline FiniteLattice random_lattice(Rng& rng, std::size_t n) { return lattice_of(random_lframe(rng, n)); }

// ---------------------------------------------------------------------------
// Modal L-frames

namespace detail {

/// One repair pass. Adds pairs for failures of (i), (ii), (iv), (v) and the
/// optional frame condition. Returns whether anything changed.
inline bool repair_pass(const LFrame& X, std::vector<Mask>& succ, std::optional<FrameCondition> cond) {
  const std::size_t n = X.size();
  const Id one = X.one();
  const auto before = succ;
  auto add = [&](Id x, Id y) {
    if (x != one) succ[x] |= bit(y);
  };
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y) {
      if (!X.leq(x, y)) continue;
      // (i): a successor of x below z
      for_each_bit(succ[y], [&](Id z) {
        if ((succ[x] & X.down(z)) == 0) add(x, X.meet(z, X.meet_all(succ[x])));
      });
      // (ii): 1 is above everything
      for_each_bit(succ[x], [&](Id w) {
        if ((succ[y] & X.up(w)) == 0) add(y, one);
      });
    }
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      for_each_bit(succ[x], [&](Id u) { for_each_bit(succ[y], [&](Id v) { add(X.meet(x, y), X.meet(u, v)); }); });
  if (cond) {
    for (Id x = 0; x < n; ++x) switch (*cond) {
        case FrameCondition::Reflexivity: add(x, x); break;
        case FrameCondition::Transitivity:
          for_each_bit(succ[x], [&](Id y) { for_each_bit(succ[y], [&](Id z) { add(x, z); }); });
          break;
        case FrameCondition::Symmetry: for_each_bit(succ[x], [&](Id y) { add(y, x); }); break;
        case FrameCondition::Euclideanity:
          for_each_bit(succ[x], [&](Id y) { for_each_bit(succ[x], [&](Id z) { add(y, z); }); });
          break;
        case FrameCondition::Directedness:
          for_each_bit(succ[x], [&](Id y) {
            for_each_bit(succ[x], [&](Id z) {
              if ((succ[y] & succ[z]) == 0) add(y, one), add(z, one);
            });
          });
          break;
      }
  }
  succ[one] = bit(one);
  return succ != before;
}

}  // namespace detail

/// Random R on X, repaired by closure for at most 3 passes; rejected and
/// redrawn if the result is not a valid modal L-frame (or misses `cond`).
/// After 64 rejections the identity relation is returned, which is always
/// valid and satisfies every condition.
inline ModalLFrame random_relation(Rng& rng, const LFrame& X, std::optional<FrameCondition> cond = std::nullopt) {
  const std::size_t n = X.size();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Mask> succ(n, 0);
    for (Id x = 0; x < n; ++x) {
      // sparse rows: one or two random points
      succ[x] = bit(rng.below(n));
      if (rng.chance(1, 3)) succ[x] |= bit(rng.below(n));
    }
    for (int pass = 0; pass < 3 && detail::repair_pass(X, succ, cond); ++pass) {
    }
    ModalLFrame F(X, succ);
    if (modal_lframe_violation(F)) continue;
    if (cond && !frame_satisfies(F, *cond)) continue;
    return F;
  }
  return ModalLFrame::identity(X);
}

inline ModalLFrame random_modal_lframe(Rng& rng, std::size_t n, std::optional<FrameCondition> cond = std::nullopt) {
  return random_relation(rng, random_lframe(rng, n), cond);
}

/// fil_f of a random valid frame, so the identities hold by construction.
inline FiniteModalLattice random_modal_lattice(Rng& rng, std::size_t n,
                                               std::optional<FrameCondition> cond = std::nullopt) {
  return fil_f(random_modal_lframe(rng, n, cond)).algebra;
}

// ---------------------------------------------------------------------------
// Formulas

/// A formula with exactly `connectives` connectives (∧, ∨, □, ◇) over the
/// given letters; leaves are letters, or ⊤/⊥ with probability 1/8.
inline Formula random_formula(Rng& rng, const std::vector<std::string>& ls, std::size_t connectives, bool modal) {
  if (connectives == 0) {
    if (ls.empty() || rng.chance(1, 8)) return rng.chance(1, 2) ? Formula::top() : Formula::bot();
    return Formula::letter(rng.pick(ls));
  }
  const auto op = rng.below(modal ? 4 : 2);
  if (op >= 2) {
    auto c = random_formula(rng, ls, connectives - 1, modal);
    return op == 2 ? Formula::box(c) : Formula::dia(c);
  }
  const auto left = rng.below(connectives);
  auto a = random_formula(rng, ls, left, modal);
  auto b = random_formula(rng, ls, connectives - 1 - left, modal);
  return op == 0 ? Formula::conj(a, b) : Formula::disj(a, b);
}

// ---------------------------------------------------------------------------
// Subalgebras, V-formations, spans

/// The modal subalgebra of A generated by `gens` (with ⊥, ⊤), as an algebra
/// on the generated elements in increasing id order plus its inclusion.
inline std::pair<FiniteModalLattice, LatticeMorphism> generated_subalgebra(const FiniteModalLattice& A, Mask gens,
                                                                           bool modal = true) {
  const auto& L = A.base;
  Mask s = gens | bit(L.bot()) | bit(L.top());
  for (Mask prev = 0; prev != s;) {
    prev = s;
    for_each_bit(prev, [&](Id a) {
      if (modal) s |= bit(A.box[a]) | bit(A.diamond[a]);
      for_each_bit(prev, [&](Id b) { s |= bit(L.meet(a, b)) | bit(L.join(a, b)); });
    });
  }
  const auto ids = members(s);
  auto local = [&](Id a) { return static_cast<Id>(std::find(ids.begin(), ids.end(), a) - ids.begin()); };
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(ids.size(), std::vector<bool>(ids.size()));
  for (Id i = 0; i < ids.size(); ++i) {
    names.push_back(L.name(ids[i]));
    for (Id j = 0; j < ids.size(); ++j) leq[i][j] = L.leq(ids[i], ids[j]);
  }
  FiniteModalLattice K{FiniteLattice::from_order(std::move(names), leq, local(L.bot()), local(L.top())), {}, {}};
  for (Id a : ids) {
    K.box.push_back(modal ? local(A.box[a]) : local(a));
    K.diamond.push_back(modal ? local(A.diamond[a]) : local(a));
  }
  if (!modal) K = FiniteModalLattice::identity(K.base);
  return {std::move(K), LatticeMorphism{ids, modal}};
}

struct VFormationBounds {
  std::size_t max_k = 4;
  std::size_t max_l = 5;
};

/// L1 = fil_f of a random frame; K a random generated subalgebra of L1 with
/// at most max_k elements; L2 = fil_f of further random frames until one
/// admits an embedding of K (a random one is chosen), else L2 = L1 with a
/// second embedding chosen among all K ↪ L1. `cond` constrains all frames.
inline VFormation random_vformation(Rng& rng, const VFormationBounds& b = {},
                                    std::optional<FrameCondition> cond = std::nullopt) {
  for (;;) {
    auto L1 = random_modal_lattice(rng, rng.range(1, b.max_l), cond);
    auto [K, h1] = generated_subalgebra(L1, rng.mask(L1.size()) & rng.mask(L1.size()));
    if (K.size() > b.max_k) continue;
    std::vector<LatticeMorphism> embs;
    FiniteModalLattice L2 = L1;
    for (int tries = 0; tries < 16 && embs.empty(); ++tries) {
      L2 = random_modal_lattice(rng, rng.range(K.size(), b.max_l), cond);
      embs = all_embeddings(K, L2, true);
    }
    if (embs.empty()) {
      L2 = L1;
      embs = all_embeddings(K, L2, true);
    }
    auto h2 = rng.pick(embs);
    return VFormation{std::move(K), std::move(L1), std::move(L2), std::move(h1), std::move(h2)};
  }
}

/// The dual co-V-formation of a random V-formation: surjective bounded
/// L-morphisms f1: Y1 → X, f2: Y2 → X between tight frames. Spans whose
/// frames miss `cond` are discarded.
struct CoVFormation {
  ModalLFrame Y1, Y2, X;
  std::vector<Id> f1, f2;
  std::size_t discarded = 0;
};

inline CoVFormation random_co_vformation(Rng& rng, FrameCondition cond, const VFormationBounds& b = {}) {
  std::size_t discarded = 0;
  for (;;) {
    auto v = random_vformation(rng, b, cond);
    auto XK = fil_l(v.K), X1 = fil_l(v.L1), X2 = fil_l(v.L2);
    if (!frame_satisfies(XK.frame, cond) || !frame_satisfies(X1.frame, cond) || !frame_satisfies(X2.frame, cond)) {
      ++discarded;
      continue;
    }
    auto f1 = dual_of_hom(v.K, XK, X1, v.h1);
    auto f2 = dual_of_hom(v.K, XK, X2, v.h2);
    return CoVFormation{X1.frame, X2.frame, XK.frame, std::move(f1), std::move(f2), discarded};
  }
}

/// Renames ids by `perm` (old → new).
inline FiniteLattice permute(const FiniteLattice& L, const std::vector<Id>& perm) {
  const std::size_t n = L.size();
  std::vector<std::string> names(n);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (Id a = 0; a < n; ++a) {
    names[perm[a]] = L.name(a);
    for (Id b = 0; b < n; ++b) leq[perm[a]][perm[b]] = L.leq(a, b);
  }
  return FiniteLattice::from_order(std::move(names), leq, perm[L.bot()], perm[L.top()]);
}

/// A non-modal span K ⊆ L1, K ⊆ L2 by inclusion: K's ids are 0..k-1 in
/// both L1 and L2 and both legs are identity maps.
inline VFormation random_inclusion_span(Rng& rng, const VFormationBounds& b = {}) {
  for (;;) {
    auto L1 = FiniteModalLattice::identity(random_lattice(rng, rng.range(1, b.max_l)));
    auto [K, h1] = generated_subalgebra(L1, rng.mask(L1.size()) & rng.mask(L1.size()), false);
    if (K.size() > b.max_k) continue;
    auto L2 = FiniteModalLattice::identity(random_lattice(rng, rng.range(K.size(), b.max_l)));
    auto embs = all_embeddings(K, L2, false);
    if (embs.empty()) continue;
    const auto h2 = rng.pick(embs);
    auto front = [&](const std::vector<Id>& h, std::size_t n) {
      std::vector<Id> perm(n, 0);
      Id next = K.size();
      for (Id a = 0; a < n; ++a) {
        auto it = std::find(h.begin(), h.end(), a);
        perm[a] = it != h.end() ? static_cast<Id>(it - h.begin()) : next++;
      }
      return perm;
    };
    std::vector<Id> id(K.size());
    for (Id c = 0; c < K.size(); ++c) id[c] = c;
    auto P1 = FiniteModalLattice::identity(permute(L1.base, front(h1.map, L1.size())));
    auto P2 = FiniteModalLattice::identity(permute(L2.base, front(h2.map, L2.size())));
    return VFormation{std::move(K), std::move(P1), std::move(P2), LatticeMorphism{id, false},
                      LatticeMorphism{id, false}};
  }
}

}  // namespace wpml
