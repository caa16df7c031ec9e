// L-frames (finite meet semilattices with top), modal L-frames, their
// filters, the filter lattice, morphism checkers and relational semantics.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wpml/common.hpp"
#include "wpml/formula.hpp"
#include "wpml/lattice.hpp"

namespace wpml {

class LFrame {
 public:
  /// Validates a meet table (commutative, idempotent, associative, `one`
  /// neutral). Throws Validation naming the failing law and elements.
  static LFrame from_meet(std::vector<std::string> names, std::vector<std::vector<Id>> meet, Id one);

  static LFrame from_meet(std::vector<std::vector<Id>> meet, Id one) {
    std::vector<std::string> names(meet.size());
    for (Id i = 0; i < names.size(); ++i) names[i] = std::to_string(i);
    return from_meet(std::move(names), std::move(meet), one);
  }

  /// The semilattice reduct of a lattice, with 1 = ⊤.
  static LFrame from_lattice(const FiniteLattice& L) {
    std::vector<std::vector<Id>> m(L.size(), std::vector<Id>(L.size()));
    for (Id a = 0; a < L.size(); ++a)
      for (Id b = 0; b < L.size(); ++b) m[a][b] = L.meet(a, b);
    return from_meet(L.names(), std::move(m), L.top());
  }

  /// n-element chain 0 ⪯ 1 ⪯ ... ⪯ n-1 with 1 = n-1.
  static LFrame chain(std::size_t n) { return from_lattice(FiniteLattice::chain(n)); }

  std::size_t size() const { return n_; }
  Id one() const { return one_; }
  /// The least element, meet of everything.
  Id bottom() const { return bottom_; }
  Id meet(Id a, Id b) const { return meet_[a * n_ + b]; }
  bool leq(Id a, Id b) const { return meet(a, b) == a; }
  Mask up(Id a) const { return up_[a]; }
  Mask down(Id a) const { return down_[a]; }
  const std::string& name(Id a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }

  std::vector<std::vector<Id>> meet_table() const {
    std::vector<std::vector<Id>> m(n_, std::vector<Id>(n_));
    for (Id a = 0; a < n_; ++a)
      for (Id b = 0; b < n_; ++b) m[a][b] = meet(a, b);
    return m;
  }

  Id meet_all(Mask s) const {
    Id acc = one_;
    for_each_bit(s, [&](Id i) { acc = meet(acc, i); });
    return acc;
  }

  /// Up-closure of a set.
  Mask up_closure(Mask s) const {
    Mask out = 0;
    for_each_bit(s, [&](Id i) { out |= up_[i]; });
    return out;
  }

  /// Down-closure of a set.
  Mask down_closure(Mask s) const {
    Mask out = 0;
    for_each_bit(s, [&](Id i) { out |= down_[i]; });
    return out;
  }

  bool is_filter(Mask s) const {
    if (s == 0 || up_closure(s) != s) return false;
    bool closed = true;
    for_each_bit(s, [&](Id a) {
      for_each_bit(s, [&](Id b) {
        if (!has(s, meet(a, b))) closed = false;
      });
    });
    return closed;
  }

  /// The least filter containing s (for nonempty s: ↑ of the meet of s).
  Mask generated_filter(Mask s) const { return s == 0 ? bit(one_) : up_[meet_all(s)]; }

  bool operator==(const LFrame& o) const { return n_ == o.n_ && one_ == o.one_ && meet_ == o.meet_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<Id> meet_;
  Id one_ = 0;
  Id bottom_ = 0;
  std::vector<Mask> up_, down_;
};

inline LFrame LFrame::from_meet(std::vector<std::string> names, std::vector<std::vector<Id>> meet, Id one) {
  const std::size_t n = meet.size();
  if (n == 0) throw Error(ErrorKind::Validation, "empty frame");
  check_size(n, "frame");
  if (names.size() != n) throw Error(ErrorKind::Validation, "names and meet table disagree in size");
  if (one >= n) throw Error(ErrorKind::Validation, "one is not an element");
  for (const auto& row : meet) {
    if (row.size() != n) throw Error(ErrorKind::Validation, "meet table is not square");
    for (Id v : row)
      if (v >= n) throw Error(ErrorKind::Validation, "meet table refers to a nonexistent element");
  }
  auto fail = [](const std::string& law, std::vector<Id> w) {
    std::string s = law + " fails at (";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    throw Error(ErrorKind::Validation, s + ")");
  };
  for (Id a = 0; a < n; ++a) {
    if (meet[a][a] != a) fail("idempotence", {a});
    if (meet[a][one] != a) fail("top", {a});
    for (Id b = 0; b < n; ++b) {
      if (meet[a][b] != meet[b][a]) fail("commutativity", {a, b});
      for (Id c = 0; c < n; ++c)
        if (meet[meet[a][b]][c] != meet[a][meet[b][c]]) fail("associativity", {a, b, c});
    }
  }
  LFrame X;
  X.n_ = n;
  X.names_ = std::move(names);
  X.one_ = one;
  X.meet_.resize(n * n);
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b) X.meet_[a * n + b] = meet[a][b];
  X.up_.assign(n, 0);
  X.down_.assign(n, 0);
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b)
      if (X.leq(a, b)) {
        X.up_[a] |= bit(b);
        X.down_[b] |= bit(a);
      }
  X.bottom_ = X.meet_all(full_mask(n));
  return X;
}

/// A meet semilattice with an accessibility relation stored as successor
/// masks. Construction does not validate; see validate_modal_lframe.
class ModalLFrame {
 public:
  ModalLFrame() = default;
  ModalLFrame(LFrame base, std::vector<Mask> succ) : base_(std::move(base)), succ_(std::move(succ)) {
    if (succ_.size() != base_.size()) throw Error(ErrorKind::Validation, "relation rows do not match frame size");
    for (Mask m : succ_)
      if (!subset(m, full_mask(base_.size()))) throw Error(ErrorKind::Validation, "relation refers to a nonexistent element");
  }

  static ModalLFrame from_pairs(LFrame base, const std::vector<std::pair<Id, Id>>& R) {
    std::vector<Mask> succ(base.size(), 0);
    for (auto [x, y] : R) {
      if (x >= base.size() || y >= base.size()) throw Error(ErrorKind::Validation, "relation refers to a nonexistent element");
      succ[x] |= bit(y);
    }
    return {std::move(base), std::move(succ)};
  }

  /// R = identity.
  static ModalLFrame identity(LFrame base) {
    std::vector<Mask> succ(base.size());
    for (Id i = 0; i < succ.size(); ++i) succ[i] = bit(i);
    return {std::move(base), std::move(succ)};
  }

  const LFrame& base() const { return base_; }
  std::size_t size() const { return base_.size(); }
  Mask succ(Id x) const { return succ_[x]; }
  const std::vector<Mask>& succ_rows() const { return succ_; }
  bool R(Id x, Id y) const { return has(succ_[x], y); }

  std::vector<std::pair<Id, Id>> pairs() const {
    std::vector<std::pair<Id, Id>> out;
    for (Id x = 0; x < size(); ++x)
      for_each_bit(succ_[x], [&](Id y) { out.emplace_back(x, y); });
    return out;
  }

  Mask box(Mask U) const {
    Mask out = 0;
    for (Id x = 0; x < size(); ++x)
      if (subset(succ_[x], U)) out |= bit(x);
    return out;
  }

  Mask diamond(Mask U) const {
    Mask out = 0;
    for (Id x = 0; x < size(); ++x)
      if ((succ_[x] & U) != 0) out |= bit(x);
    return out;
  }

  bool operator==(const ModalLFrame&) const = default;

 private:
  LFrame base_;
  std::vector<Mask> succ_;
};

/// First violated condition among (i)-(v), with the least witness tuple.
inline std::optional<Violation> modal_lframe_violation(const ModalLFrame& F) {
  const auto& X = F.base();
  const std::size_t n = X.size();
  // (i) x ⪯ y, y R z ⇒ ∃w: x R w ⪯ z
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y) {
      if (!X.leq(x, y)) continue;
      for (Id z = 0; z < n; ++z)
        if (F.R(y, z) && (F.succ(x) & X.down(z)) == 0) return Violation{"i", {x, y, z}};
    }
  // (ii) x ⪯ y, x R w ⇒ ∃z: y R z, w ⪯ z
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y) {
      if (!X.leq(x, y)) continue;
      for (Id w = 0; w < n; ++w)
        if (F.R(x, w) && (F.succ(y) & X.up(w)) == 0) return Violation{"ii", {x, y, w}};
    }
  // (iii) (x⋏y) R z ⇒ ∃u,v: x R u, y R v, u⋏v ⪯ z
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      for (Id z = 0; z < n; ++z) {
        if (!F.R(X.meet(x, y), z)) continue;
        bool found = false;
        for_each_bit(F.succ(x), [&](Id u) {
          for_each_bit(F.succ(y), [&](Id v) {
            if (X.leq(X.meet(u, v), z)) found = true;
          });
        });
        if (!found) return Violation{"iii", {x, y, z}};
      }
  // (iv) x R u, y R v ⇒ (x⋏y) R (u⋏v)
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      for (Id u = 0; u < n; ++u) {
        if (!F.R(x, u)) continue;
        for (Id v = 0; v < n; ++v)
          if (F.R(y, v) && !F.R(X.meet(x, y), X.meet(u, v))) return Violation{"iv", {x, y, u, v}};
      }
  // (v) 1 R x iff x = 1
  for (Id x = 0; x < n; ++x)
    if (F.R(X.one(), x) != (x == X.one())) return Violation{"v", {x}};
  return std::nullopt;
}

inline std::variant<ModalLFrame, Violation> validate_modal_lframe(const LFrame& X,
                                                                  const std::vector<std::pair<Id, Id>>& R) {
  auto F = ModalLFrame::from_pairs(X, R);
  if (auto v = modal_lframe_violation(F)) return *v;
  return F;
}

/// Throws a Validation error naming the violated condition.
inline void require_modal_lframe(const ModalLFrame& F) {
  if (auto v = modal_lframe_violation(F)) {
    std::string s = "modal L-frame condition (" + v->condition + ") fails at (";
    for (std::size_t i = 0; i < v->witness.size(); ++i) s += (i ? "," : "") + std::to_string(v->witness[i]);
    throw Error(ErrorKind::Validation, s + ")");
  }
}

// ---------------------------------------------------------------------------
// Filters and the filter lattice

/// All filters, ordered by mask value. In a finite meet semilattice these
/// are exactly the principal up-sets.
inline std::vector<Mask> filters(const LFrame& X) {
  std::vector<Mask> out;
  for (Id x = 0; x < X.size(); ++x) out.push_back(X.up(x));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string mask_name(const LFrame& X, Mask m) {
  std::string s = "{";
  bool first = true;
  for_each_bit(m, [&](Id i) {
    if (!first) s += ",";
    s += X.name(i);
    first = false;
  });
  return s + "}";
}

/// The filter lattice together with the filter each element stands for.
struct FilterLattice {
  FiniteModalLattice algebra;
  std::vector<Mask> filters;

  std::optional<Id> index_of(Mask m) const {
    auto it = std::lower_bound(filters.begin(), filters.end(), m);
    if (it == filters.end() || *it != m) return std::nullopt;
    return static_cast<Id>(it - filters.begin());
  }
};

inline FiniteLattice filter_lattice(const LFrame& X, const std::vector<Mask>& fs) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(fs.size(), std::vector<bool>(fs.size()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    names.push_back(mask_name(X, fs[i]));
    for (std::size_t j = 0; j < fs.size(); ++j) leq[i][j] = subset(fs[i], fs[j]);
  }
  const auto find = [&](Mask m) {
    return static_cast<Id>(std::lower_bound(fs.begin(), fs.end(), m) - fs.begin());
  };
  return FiniteLattice::from_order(std::move(names), leq, find(bit(X.one())), find(full_mask(X.size())));
}

/// Filters ordered by inclusion: meet = ∩, join = generated filter,
/// ⊥ = {1}, ⊤ = the improper filter; identity modalities.
inline FilterLattice fil_f(const LFrame& X) {
  auto fs = filters(X);
  auto L = filter_lattice(X, fs);
  return {FiniteModalLattice::identity(std::move(L)), std::move(fs)};
}

/// As above with □U = {x : R[x] ⊆ U} and ◇U = {x : R[x] ∩ U ≠ ∅}.
inline FilterLattice fil_f(const ModalLFrame& F) {
  const auto& X = F.base();
  FilterLattice out = fil_f(X);
  auto& A = out.algebra;
  for (Id i = 0; i < out.filters.size(); ++i) {
    const auto b = out.index_of(F.box(out.filters[i]));
    const auto d = out.index_of(F.diamond(out.filters[i]));
    if (!b || !d) {
      throw Error(ErrorKind::Validation, "box or diamond of filter " + mask_name(X, out.filters[i]) +
                                             " is not a filter; the relation is not a modal L-frame");
    }
    A.box[i] = *b;
    A.diamond[i] = *d;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

/// First failure of: ⋏ and 1 preserved; f(x)=1 ⇒ x=1 ("1");
/// y'⋏z' ⪯ f(x) ⇒ ∃y,z: y' ⪯ f(y), z' ⪯ f(z), y⋏z ⪯ x ("2", witness x,y',z').
inline std::optional<Violation> l_morphism_violation(const LFrame& X, const LFrame& Y, const std::vector<Id>& f) {
  if (f.size() != X.size()) return Violation{"arity", {}};
  for (Id x = 0; x < X.size(); ++x)
    if (f[x] >= Y.size()) return Violation{"range", {x}};
  if (f[X.one()] != Y.one()) return Violation{"one", {X.one()}};
  for (Id a = 0; a < X.size(); ++a)
    for (Id b = 0; b < X.size(); ++b)
      if (f[X.meet(a, b)] != Y.meet(f[a], f[b])) return Violation{"meet", {a, b}};
  for (Id x = 0; x < X.size(); ++x)
    if (f[x] == Y.one() && x != X.one()) return Violation{"1", {x}};
  // Preimage up-sets: for each y', the set of y with y' ⪯ f(y).
  std::vector<Mask> above(Y.size(), 0);
  for (Id y = 0; y < X.size(); ++y)
    for_each_bit(Y.down(f[y]), [&](Id yp) { above[yp] |= bit(y); });
  for (Id x = 0; x < X.size(); ++x)
    for (Id yp = 0; yp < Y.size(); ++yp)
      for (Id zp = 0; zp < Y.size(); ++zp) {
        if (!Y.leq(Y.meet(yp, zp), f[x])) continue;
        bool found = false;
        for_each_bit(above[yp], [&](Id y) {
          if (found) return;
          for_each_bit(above[zp], [&](Id z) {
            if (X.leq(X.meet(y, z), x)) found = true;
          });
        });
        if (!found) return Violation{"2", {x, yp, zp}};
      }
  return std::nullopt;
}

/// L-morphism plus forth ("forth", witness x,y) and the two back conditions
/// ("back-below" and "back-above", witness x,z).
inline std::optional<Violation> bounded_l_morphism_violation(const ModalLFrame& X, const ModalLFrame& Y,
                                                             const std::vector<Id>& f) {
  if (auto v = l_morphism_violation(X.base(), Y.base(), f)) return v;
  const auto& YB = Y.base();
  for (Id x = 0; x < X.size(); ++x)
    for (Id y = 0; y < X.size(); ++y)
      if (X.R(x, y) && !Y.R(f[x], f[y])) return Violation{"forth", {x, y}};
  for (Id x = 0; x < X.size(); ++x) {
    for (Id z = 0; z < Y.size(); ++z) {
      if (!Y.R(f[x], z)) continue;
      bool below = false, above = false;
      for_each_bit(X.succ(x), [&](Id y) {
        if (YB.leq(f[y], z)) below = true;
        if (YB.leq(z, f[y])) above = true;
      });
      if (!below) return Violation{"back-below", {x, z}};
      if (!above) return Violation{"back-above", {x, z}};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Relational semantics

/// Letters (sorted) and the filter assigned to each.
struct FrameValuation {
  std::vector<std::string> letters;
  std::vector<Mask> values;

  Mask at(const std::string& p) const {
    auto it = std::lower_bound(letters.begin(), letters.end(), p);
    if (it == letters.end() || *it != p) throw Error(ErrorKind::UndefinedLetter, p);
    return values[static_cast<std::size_t>(it - letters.begin())];
  }

  bool operator==(const FrameValuation&) const = default;
};

/// {x : x ⊩ φ}.
inline Mask truth_set(const ModalLFrame& F, const FrameValuation& V, const Formula& f) {
  const auto& X = F.base();
  switch (f.op()) {
    case Op::Top: return full_mask(X.size());
    case Op::Bot: return bit(X.one());
    case Op::Letter: return V.at(f.name());
    case Op::And: return truth_set(F, V, f.left()) & truth_set(F, V, f.right());
    case Op::Or: {
      const Mask a = truth_set(F, V, f.left());
      const Mask b = truth_set(F, V, f.right());
      Mask out = 0;
      for_each_bit(a, [&](Id y) { for_each_bit(b, [&](Id z) { out |= X.up(X.meet(y, z)); }); });
      return out;
    }
    case Op::Box: return F.box(truth_set(F, V, f.child()));
    case Op::Dia: return F.diamond(truth_set(F, V, f.child()));
  }
  return 0;
}

inline bool satisfies(const ModalLFrame& F, const FrameValuation& V, Id x, const Formula& f) {
  return has(truth_set(F, V, f), x);
}

using FrameVerdict = std::variant<Valid, FrameValuation>;

/// Valid iff V(lhs) ⊆ V(rhs) for every filter valuation; otherwise the first
/// countervaluation, letters sorted and filters taken in mask order.
inline FrameVerdict frame_validates(const ModalLFrame& F, const ConsequencePair& pair,
                                    std::size_t budget = kDefaultBudget) {
  const auto fs = filters(F.base());
  auto ls = letters(pair);
  FrameValuation V{{ls.begin(), ls.end()}, std::vector<Mask>(ls.size())};
  std::optional<FrameValuation> counter;
  for_each_tuple(fs.size(), V.letters.size(), budget, [&](const std::vector<Id>& t) {
    for (std::size_t i = 0; i < t.size(); ++i) V.values[i] = fs[t[i]];
    if (!subset(truth_set(F, V, pair.lhs), truth_set(F, V, pair.rhs))) {
      counter = V;
      return false;
    }
    return true;
  });
  if (counter) return *counter;
  return Valid{};
}

inline bool frame_valid(const ModalLFrame& F, const ConsequencePair& pair, std::size_t budget = kDefaultBudget) {
  return std::holds_alternative<Valid>(frame_validates(F, pair, budget));
}

// ---------------------------------------------------------------------------
// Order helpers

/// For x R y: z minimal and t maximal in R[x] with z ⪯ y ⪯ t, least ids.
inline std::pair<Id, Id> successor_extrema(const ModalLFrame& F, Id x, Id y) {
  if (!F.R(x, y)) throw Error(ErrorKind::Precondition, "successor_extrema needs x R y");
  const auto& X = F.base();
  const Mask S = F.succ(x);
  std::optional<Id> z, t;
  for_each_bit(S & X.down(y), [&](Id c) {
    if (!z && (S & X.down(c)) == bit(c)) z = c;
  });
  for_each_bit(S & X.up(y), [&](Id c) {
    if (!t && (S & X.up(c)) == bit(c)) t = c;
  });
  return {*z, *t};
}

/// Least upper bound of a nonempty set: the meet of its common upper bounds.
inline Id frame_join(const LFrame& X, Mask C) {
  if (C == 0) throw Error(ErrorKind::Precondition, "frame_join needs a nonempty set");
  Mask ub = full_mask(X.size());
  for_each_bit(C, [&](Id c) { ub &= X.up(c); });
  return X.meet_all(ub);
}

inline Id frame_join(const LFrame& X, Id a, Id b) { return frame_join(X, bit(a) | bit(b)); }

// ---------------------------------------------------------------------------
// Enumeration

/// Calls `fn` with every valid modal L-frame on the semilattice X, relation
/// rows in lexicographic order of (R[0], R[1], ...) as masks. Only rows that
/// are nonempty and ⋏-closed are tried (forced by (i), (iv) and (v)).
/// `fn` returns false to stop. Returns false iff stopped early.
template <typename Fn>
bool for_each_modal_lframe(const LFrame& X, Fn&& fn) {
  const std::size_t n = X.size();
  std::vector<Mask> rows;
  for (Mask m = 1; m <= full_mask(n); ++m) {
    bool closed = true;
    for_each_bit(m, [&](Id a) {
      for_each_bit(m, [&](Id b) {
        if (!has(m, X.meet(a, b))) closed = false;
      });
    });
    if (closed) rows.push_back(m);
  }
  std::vector<Mask> succ(n, 0);
  std::function<bool(Id)> rec = [&](Id x) -> bool {
    if (x == n) {
      ModalLFrame F(X, succ);
      if (modal_lframe_violation(F)) return true;
      return fn(F);
    }
    if (x == X.one()) {
      succ[x] = bit(x);
      return rec(x + 1);
    }
    for (Mask m : rows) {
      succ[x] = m;
      if (!rec(x + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

/// Every valid modal L-frame with 1..max_size points, smallest first.
template <typename Fn>
bool for_each_small_modal_lframe(std::size_t max_size, Fn&& fn) {
  for (std::size_t n = 1; n <= max_size; ++n)
    for (const auto& L : lattices_of_size(n))
      if (!for_each_modal_lframe(LFrame::from_lattice(L), fn)) return false;
  return true;
}

}  // namespace wpml
