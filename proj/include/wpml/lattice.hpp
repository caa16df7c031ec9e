// Finite bounded lattices and modal lattices: construction from an order
// matrix, the modal identities, homomorphisms, validity of consequence
// pairs, distributivity and bounded epimorphism checks, and exhaustive
// enumeration of small lattices up to isomorphism.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wpml/common.hpp"
#include "wpml/formula.hpp"

namespace wpml {

/// Default cap on the number of valuations swept by validity checks.
inline constexpr std::size_t kDefaultBudget = 10'000'000;

/// Reads WPML_BUDGET from the environment, falling back to the default.
inline std::size_t budget_from_env() {
  if (const char* s = std::getenv("WPML_BUDGET"); s != nullptr && *s != '\0') {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

enum class LatticeDefect { NotAPoset, NotALattice, WrongBounds };

inline const char* to_string(LatticeDefect d) {
  switch (d) {
    case LatticeDefect::NotAPoset: return "NotAPoset";
    case LatticeDefect::NotALattice: return "NotALattice";
    case LatticeDefect::WrongBounds: return "WrongBounds";
  }
  return "?";
}

class LatticeError : public Error {
 public:
  LatticeError(LatticeDefect defect, std::string detail, std::vector<Id> witness)
      : Error(ErrorKind::Validation, std::string(to_string(defect)) + ": " + detail),
        defect_(defect),
        witness_(std::move(witness)) {}

  LatticeDefect defect() const noexcept { return defect_; }
  const std::vector<Id>& witness() const noexcept { return witness_; }

 private:
  LatticeDefect defect_;
  std::vector<Id> witness_;
};

/// Bounded lattice on ids 0..n-1. The order is the source of truth; meet and
/// join tables are derived once at construction.
class FiniteLattice {
 public:
  /// Validates `leq` (row a, column b: a ≤ b) and derives meet/join tables.
  /// Throws LatticeError naming the first violated axiom.
  static FiniteLattice from_order(std::vector<std::string> names,
                                  const std::vector<std::vector<bool>>& leq, Id bot, Id top);

  /// Unnamed variant; elements are named by their ids.
  static FiniteLattice from_order(const std::vector<std::vector<bool>>& leq, Id bot, Id top) {
    std::vector<std::string> names(leq.size());
    for (Id i = 0; i < names.size(); ++i) names[i] = std::to_string(i);
    return from_order(std::move(names), leq, bot, top);
  }

  /// The n-element chain 0 < 1 < ... < n-1.
  static FiniteLattice chain(std::size_t n) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (Id a = 0; a < n; ++a)
      for (Id b = a; b < n; ++b) leq[a][b] = true;
    return from_order(leq, 0, n - 1);
  }

  std::size_t size() const { return n_; }
  Id bot() const { return bot_; }
  Id top() const { return top_; }
  bool leq(Id a, Id b) const { return has(up_[a], b); }
  /// {b : a ≤ b}
  Mask up(Id a) const { return up_[a]; }
  /// {b : b ≤ a}
  Mask down(Id a) const { return down_[a]; }
  Id meet(Id a, Id b) const { return meet_[a * n_ + b]; }
  Id join(Id a, Id b) const { return join_[a * n_ + b]; }
  const std::string& name(Id a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }

  std::vector<std::vector<bool>> order_matrix() const {
    std::vector<std::vector<bool>> m(n_, std::vector<bool>(n_));
    for (Id a = 0; a < n_; ++a)
      for (Id b = 0; b < n_; ++b) m[a][b] = leq(a, b);
    return m;
  }

  /// Meet of a set of elements (⊤ for the empty set).
  Id meet_all(Mask s) const {
    Id acc = top_;
    for_each_bit(s, [&](Id i) { acc = meet(acc, i); });
    return acc;
  }

  /// Join of a set of elements (⊥ for the empty set).
  Id join_all(Mask s) const {
    Id acc = bot_;
    for_each_bit(s, [&](Id i) { acc = join(acc, i); });
    return acc;
  }

  bool operator==(const FiniteLattice& o) const {
    return n_ == o.n_ && bot_ == o.bot_ && top_ == o.top_ && up_ == o.up_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  Id bot_ = 0;
  Id top_ = 0;
  std::vector<Mask> up_;
  std::vector<Mask> down_;
  std::vector<Id> meet_;
  std::vector<Id> join_;
};

inline FiniteLattice FiniteLattice::from_order(std::vector<std::string> names,
                                               const std::vector<std::vector<bool>>& leq,
                                               Id bot, Id top) {
  const std::size_t n = leq.size();
  if (n == 0) throw LatticeError(LatticeDefect::NotAPoset, "empty carrier", {});
  check_size(n, "lattice");
  for (const auto& row : leq) {
    if (row.size() != n) throw Error(ErrorKind::Validation, "order matrix is not square");
  }
  if (names.size() != n) throw Error(ErrorKind::Validation, "names and order matrix disagree in size");

  FiniteLattice L;
  L.n_ = n;
  L.names_ = std::move(names);
  L.up_.assign(n, 0);
  L.down_.assign(n, 0);
  for (Id a = 0; a < n; ++a) {
    for (Id b = 0; b < n; ++b) {
      if (leq[a][b]) {
        L.up_[a] |= bit(b);
        L.down_[b] |= bit(a);
      }
    }
  }

  for (Id a = 0; a < n; ++a) {
    if (!leq[a][a]) throw LatticeError(LatticeDefect::NotAPoset, "not reflexive at " + std::to_string(a), {a});
  }
  for (Id a = 0; a < n; ++a) {
    for (Id b = a + 1; b < n; ++b) {
      if (leq[a][b] && leq[b][a]) {
        throw LatticeError(LatticeDefect::NotAPoset,
                           "not antisymmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")",
                           {a, b});
      }
    }
  }
  for (Id a = 0; a < n; ++a) {
    for (Id b = 0; b < n; ++b) {
      if (!leq[a][b]) continue;
      for (Id c = 0; c < n; ++c) {
        if (leq[b][c] && !leq[a][c]) {
          throw LatticeError(LatticeDefect::NotAPoset,
                             "not transitive at (" + std::to_string(a) + "," + std::to_string(b) +
                                 "," + std::to_string(c) + ")",
                             {a, b, c});
        }
      }
    }
  }

  L.meet_.assign(n * n, 0);
  L.join_.assign(n * n, 0);
  for (Id a = 0; a < n; ++a) {
    for (Id b = a; b < n; ++b) {
      const Mask lower = L.down_[a] & L.down_[b];
      const Mask upper = L.up_[a] & L.up_[b];
      std::optional<Id> glb;
      for_each_bit(lower, [&](Id c) {
        if (!glb && subset(lower, L.down_[c])) glb = c;
      });
      if (!glb) {
        throw LatticeError(LatticeDefect::NotALattice,
                           "no meet for (" + std::to_string(a) + "," + std::to_string(b) + ")", {a, b});
      }
      std::optional<Id> lub;
      for_each_bit(upper, [&](Id c) {
        if (!lub && subset(upper, L.up_[c])) lub = c;
      });
      if (!lub) {
        throw LatticeError(LatticeDefect::NotALattice,
                           "no join for (" + std::to_string(a) + "," + std::to_string(b) + ")", {a, b});
      }
      L.meet_[a * n + b] = L.meet_[b * n + a] = *glb;
      L.join_[a * n + b] = L.join_[b * n + a] = *lub;
    }
  }

  if (bot >= n || top >= n || L.down_[bot] != bit(bot) || L.up_[top] != bit(top) ||
      L.up_[bot] != full_mask(n)) {
    throw LatticeError(LatticeDefect::WrongBounds,
                       "declared bounds (" + std::to_string(bot) + "," + std::to_string(top) +
                           ") are not the least and greatest elements",
                       {bot, top});
  }
  L.bot_ = bot;
  L.top_ = top;
  return L;
}

/// A bounded lattice with box and diamond operation tables.
struct FiniteModalLattice {
  FiniteLattice base;
  std::vector<Id> box;
  std::vector<Id> diamond;

  /// The lattice with box = diamond = identity.
  static FiniteModalLattice identity(FiniteLattice L) {
    std::vector<Id> id(L.size());
    std::iota(id.begin(), id.end(), Id{0});
    return {std::move(L), id, id};
  }

  std::size_t size() const { return base.size(); }

  bool operator==(const FiniteModalLattice&) const = default;
};

// ---------------------------------------------------------------------------
// Modal identities

struct IdentityViolation {
  std::string identity;
  Id a = 0;
  Id b = 0;

  bool operator==(const IdentityViolation&) const = default;
};

/// Every failure of ⊤=□⊤, ⊤=◇⊤, □a∧□b=□(a∧b), ◇a∨◇b≤◇(a∨b), ◇a∧□b≤◇(a∧b),
/// in the order listed and then by (a, b).
inline std::vector<IdentityViolation> check_modal_identities(const FiniteModalLattice& A) {
  const auto& L = A.base;
  const std::size_t n = L.size();
  std::vector<IdentityViolation> out;
  if (A.box.size() != n || A.diamond.size() != n) {
    throw Error(ErrorKind::Validation, "box/diamond tables must have one entry per element");
  }
  for (Id a = 0; a < n; ++a) {
    if (A.box[a] >= n || A.diamond[a] >= n) {
      throw Error(ErrorKind::Validation, "box/diamond table refers to a nonexistent element");
    }
  }
  const auto& bx = A.box;
  const auto& dm = A.diamond;
  if (bx[L.top()] != L.top()) out.push_back({"top-box", L.top(), L.top()});
  if (dm[L.top()] != L.top()) out.push_back({"top-diamond", L.top(), L.top()});
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b)
      if (L.meet(bx[a], bx[b]) != bx[L.meet(a, b)]) out.push_back({"box-meet", a, b});
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b)
      if (!L.leq(L.join(dm[a], dm[b]), dm[L.join(a, b)])) out.push_back({"diamond-join", a, b});
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b)
      if (!L.leq(L.meet(dm[a], bx[b]), dm[L.meet(a, b)])) out.push_back({"diamond-box", a, b});
  return out;
}

/// Throws a Validation error unless A is a modal lattice.
inline void require_modal_lattice(const FiniteModalLattice& A) {
  auto v = check_modal_identities(A);
  if (!v.empty()) {
    throw Error(ErrorKind::Validation, "modal identity " + v.front().identity + " fails at (" +
                                           std::to_string(v.front().a) + "," +
                                           std::to_string(v.front().b) + ")");
  }
}

inline bool is_distributive(const FiniteLattice& L) {
  const std::size_t n = L.size();
  for (Id a = 0; a < n; ++a)
    for (Id b = 0; b < n; ++b)
      for (Id c = 0; c < n; ++c)
        if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Homomorphisms

struct LatticeMorphism {
  std::vector<Id> map;
  bool modal = false;

  Id operator()(Id a) const { return map[a]; }
  bool operator==(const LatticeMorphism&) const = default;
};

inline bool is_injective(const std::vector<Id>& map) {
  std::set<Id> seen(map.begin(), map.end());
  return seen.size() == map.size();
}

inline bool is_surjective(const std::vector<Id>& map, std::size_t codomain_size) {
  std::set<Id> seen(map.begin(), map.end());
  return seen.size() == codomain_size;
}

/// First operation that `h` fails to preserve, if any.
inline std::optional<Violation> check_homomorphism(const FiniteModalLattice& A,
                                                   const FiniteModalLattice& B,
                                                   const LatticeMorphism& h) {
  const auto& L = A.base;
  const auto& M = B.base;
  if (h.map.size() != L.size()) return Violation{"arity", {}};
  for (Id a = 0; a < L.size(); ++a)
    if (h(a) >= M.size()) return Violation{"range", {a}};
  if (h(L.bot()) != M.bot()) return Violation{"bottom", {L.bot()}};
  if (h(L.top()) != M.top()) return Violation{"top", {L.top()}};
  for (Id a = 0; a < L.size(); ++a) {
    for (Id b = 0; b < L.size(); ++b) {
      if (h(L.meet(a, b)) != M.meet(h(a), h(b))) return Violation{"meet", {a, b}};
      if (h(L.join(a, b)) != M.join(h(a), h(b))) return Violation{"join", {a, b}};
    }
  }
  if (h.modal) {
    for (Id a = 0; a < L.size(); ++a) {
      if (h(A.box[a]) != B.box[h(a)]) return Violation{"box", {a}};
      if (h(A.diamond[a]) != B.diamond[h(a)]) return Violation{"diamond", {a}};
    }
  }
  return std::nullopt;
}

/// Streams every structure-preserving map A → B in lexicographic order of
/// the map array. `emit` returns false to stop early.
inline void enumerate_homs(const FiniteModalLattice& A, const FiniteModalLattice& B, bool modal,
                           const std::function<bool(const LatticeMorphism&)>& emit) {
  const auto& L = A.base;
  const auto& M = B.base;
  const std::size_t n = L.size();
  const std::size_t m = M.size();
  constexpr Id kUnset = static_cast<Id>(-1);
  std::vector<Id> map(n, kUnset);

  auto consistent = [&](Id i) {
    const Id fi = map[i];
    if (i == L.bot() && fi != M.bot()) return false;
    if (i == L.top() && fi != M.top()) return false;
    // Check each constraint exactly when its largest index is assigned.
    for (Id j = 0; j <= i; ++j) {
      for (Id k = j; k <= i; ++k) {
        const Id mt = L.meet(j, k);
        if (mt <= i && std::max({j, k, mt}) == i && map[mt] != M.meet(map[j], map[k])) return false;
        const Id jn = L.join(j, k);
        if (jn <= i && std::max({j, k, jn}) == i && map[jn] != M.join(map[j], map[k])) return false;
      }
    }
    if (modal) {
      for (Id j = 0; j <= i; ++j) {
        const Id b = A.box[j];
        if (b <= i && std::max(j, b) == i && map[b] != B.box[map[j]]) return false;
        const Id d = A.diamond[j];
        if (d <= i && std::max(j, d) == i && map[d] != B.diamond[map[j]]) return false;
      }
    }
    return true;
  };

  bool stop = false;
  std::function<void(Id)> rec = [&](Id i) {
    if (stop) return;
    if (i == n) {
      LatticeMorphism h{map, modal};
      if (!emit(h)) stop = true;
      return;
    }
    for (Id v = 0; v < m && !stop; ++v) {
      map[i] = v;
      if (consistent(i)) rec(i + 1);
    }
    map[i] = kUnset;
  };
  rec(0);
}

inline std::vector<LatticeMorphism> all_homs(const FiniteModalLattice& A, const FiniteModalLattice& B,
                                             bool modal) {
  std::vector<LatticeMorphism> out;
  enumerate_homs(A, B, modal, [&](const LatticeMorphism& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

inline std::vector<LatticeMorphism> all_embeddings(const FiniteModalLattice& A,
                                                   const FiniteModalLattice& B, bool modal) {
  std::vector<LatticeMorphism> out;
  enumerate_homs(A, B, modal, [&](const LatticeMorphism& h) {
    if (is_injective(h.map)) out.push_back(h);
    return true;
  });
  return out;
}

inline LatticeMorphism compose(const LatticeMorphism& g, const LatticeMorphism& f) {
  LatticeMorphism out{std::vector<Id>(f.map.size()), f.modal && g.modal};
  for (Id a = 0; a < f.map.size(); ++a) out.map[a] = g(f(a));
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation and validity

/// Assignment of elements to the (sorted) letters of a formula or pair.
struct Valuation {
  std::vector<std::string> letters;
  std::vector<Id> assignment;

  Id at(const std::string& p) const {
    auto it = std::lower_bound(letters.begin(), letters.end(), p);
    if (it == letters.end() || *it != p) throw Error(ErrorKind::UndefinedLetter, p);
    return assignment[static_cast<std::size_t>(it - letters.begin())];
  }

  bool operator==(const Valuation&) const = default;
};

inline Id evaluate(const FiniteModalLattice& A, const Formula& f, const Valuation& v) {
  const auto& L = A.base;
  switch (f.op()) {
    case Op::Top: return L.top();
    case Op::Bot: return L.bot();
    case Op::Letter: return v.at(f.name());
    case Op::And: return L.meet(evaluate(A, f.left(), v), evaluate(A, f.right(), v));
    case Op::Or: return L.join(evaluate(A, f.left(), v), evaluate(A, f.right(), v));
    case Op::Box: return A.box[evaluate(A, f.child(), v)];
    case Op::Dia: return A.diamond[evaluate(A, f.child(), v)];
  }
  return L.top();
}

/// Calls `fn` with every assignment of `k` values from [0, base), in
/// lexicographic order (first position most significant). Stops when `fn`
/// returns false. Throws ResourceBound if base^k exceeds `budget`.
template <typename Fn>
void for_each_tuple(std::size_t base, std::size_t k, std::size_t budget, Fn&& fn) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (base != 0 && total > budget / base) {
      throw Error(ErrorKind::ResourceBound, std::to_string(base) + "^" + std::to_string(k) +
                                                " valuations exceed the budget of " +
                                                std::to_string(budget));
    }
    total *= base;
  }
  if (total > budget) {
    throw Error(ErrorKind::ResourceBound, "valuation count exceeds the budget");
  }
  if (base == 0 && k > 0) return;
  std::vector<Id> t(k, 0);
  for (;;) {
    if (!fn(t)) return;
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++t[i] < base) break;
      t[i] = 0;
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

struct Valid {
  bool operator==(const Valid&) const = default;
};

using AlgebraVerdict = std::variant<Valid, Valuation>;

/// Valid iff σ(lhs) ≤ σ(rhs) for every valuation of the pair's letters;
/// otherwise the lexicographically first countervaluation.
inline AlgebraVerdict algebra_validates(const FiniteModalLattice& A, const ConsequencePair& pair,
                                        std::size_t budget = kDefaultBudget) {
  auto ls = letters(pair);
  Valuation v{{ls.begin(), ls.end()}, {}};
  std::optional<Valuation> counter;
  for_each_tuple(A.size(), v.letters.size(), budget, [&](const std::vector<Id>& t) {
    v.assignment = t;
    if (!A.base.leq(evaluate(A, pair.lhs, v), evaluate(A, pair.rhs, v))) {
      counter = v;
      return false;
    }
    return true;
  });
  if (counter) return *counter;
  return Valid{};
}

inline bool validates(const FiniteModalLattice& A, const ConsequencePair& pair,
                      std::size_t budget = kDefaultBudget) {
  return std::holds_alternative<Valid>(algebra_validates(A, pair, budget));
}

// ---------------------------------------------------------------------------
// Enumeration of small lattices up to isomorphism

namespace detail {

/// All lattices with n elements up to isomorphism, as order matrices with
/// bottom 0 and top n-1. Inner elements are labelled along a linear
/// extension, so every order is upper triangular.
inline std::vector<FiniteLattice> lattices_of_size(std::size_t n) {
  std::vector<FiniteLattice> out;
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(FiniteLattice::from_order({{true}}, 0, 0));
    return out;
  }
  const std::size_t k = n - 2;
  std::vector<std::pair<Id, Id>> slots;
  for (Id i = 0; i < k; ++i)
    for (Id j = i + 1; j < k; ++j) slots.emplace_back(i, j);
  if (slots.size() > 20) throw Error(ErrorKind::ResourceBound, "lattice enumeration is capped at 7 elements");

  std::vector<Id> perm(k);
  std::set<std::vector<bool>> seen;
  const std::size_t combos = std::size_t{1} << slots.size();
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<std::vector<bool>> rel(k, std::vector<bool>(k));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if ((code >> s) & 1U) rel[slots[s].first][slots[s].second] = true;
    }
    bool transitive = true;
    for (Id a = 0; a < k && transitive; ++a)
      for (Id b = 0; b < k && transitive; ++b)
        for (Id c = 0; c < k && transitive; ++c)
          if (rel[a][b] && rel[b][c] && !rel[a][c]) transitive = false;
    if (!transitive) continue;

    // Canonical form: lexicographically least relation over all relabellings.
    std::iota(perm.begin(), perm.end(), Id{0});
    std::vector<bool> best;
    do {
      std::vector<bool> key(k * k);
      for (Id a = 0; a < k; ++a)
        for (Id b = 0; b < k; ++b) key[perm[a] * k + perm[b]] = rel[a][b];
      if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(best).second) continue;

    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (Id a = 0; a < n; ++a) {
      leq[0][a] = true;
      leq[a][n - 1] = true;
      leq[a][a] = true;
    }
    for (Id a = 0; a < k; ++a)
      for (Id b = 0; b < k; ++b)
        if (rel[a][b]) leq[a + 1][b + 1] = true;
    try {
      out.push_back(FiniteLattice::from_order(leq, 0, n - 1));
    } catch (const LatticeError&) {
      // bounded poset that is not a lattice
    }
  }
  return out;
}

}  // namespace detail

/// All lattices of exactly `n` elements (n ≤ 7) up to isomorphism, in a
/// fixed deterministic order. Results are cached per size.
inline const std::vector<FiniteLattice>& lattices_of_size(std::size_t n) {
  static std::map<std::size_t, std::vector<FiniteLattice>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::lattices_of_size(n)).first;
  return it->second;
}

/// All lattices with 1..max_size elements, smallest first.
inline std::vector<FiniteLattice> lattices_up_to(std::size_t max_size, bool distributive_only = false) {
  std::vector<FiniteLattice> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& L : lattices_of_size(n)) {
      if (!distributive_only || is_distributive(L)) out.push_back(L);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounded epimorphism check

struct Separation {
  FiniteLattice codomain;
  LatticeMorphism g1;
  LatticeMorphism g2;
};

struct EpiReport {
  bool epi = false;
  bool surjective = false;
  std::size_t bound = 0;
  bool distributive_only = false;
  std::size_t codomains_checked = 0;
  std::optional<Separation> separation;
};

/// Decides whether h: A → B is right-cancellable against every lattice M with
/// |M| ≤ bound (distributive M only when flagged). The verdict is relative to
/// the bound. Only lattice homomorphisms are supported.
inline EpiReport is_epi_bounded(const FiniteModalLattice& A, const FiniteModalLattice& B,
                                const LatticeMorphism& h, std::size_t bound,
                                bool distributive_only) {
  if (h.modal) {
    throw Error(ErrorKind::Precondition, "epimorphism checks are implemented for lattice homomorphisms only");
  }
  if (auto v = check_homomorphism(A, B, h)) {
    throw Error(ErrorKind::Precondition, "not a homomorphism: fails " + v->condition);
  }
  EpiReport r;
  r.bound = bound;
  r.distributive_only = distributive_only;
  r.surjective = is_surjective(h.map, B.size());
  if (r.surjective) {
    r.epi = true;
    return r;
  }
  for (const auto& M : lattices_up_to(bound, distributive_only)) {
    ++r.codomains_checked;
    auto Mm = FiniteModalLattice::identity(M);
    std::map<std::vector<Id>, LatticeMorphism> by_restriction;
    std::optional<Separation> found;
    enumerate_homs(B, Mm, false, [&](const LatticeMorphism& g) {
      auto gh = compose(g, h).map;
      auto [it, inserted] = by_restriction.emplace(gh, g);
      if (!inserted) {
        found = Separation{M, it->second, g};
        return false;
      }
      return true;
    });
    if (found) {
      r.separation = std::move(found);
      return r;
    }
  }
  r.epi = true;
  return r;
}

}  // namespace wpml
