// The consequence-pair calculus: rule schemata, proof trees, the proof
// checker, bounded proof search and the Whitman decision for the
// modality-free fragment.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wpml/common.hpp"
#include "wpml/formula.hpp"

namespace wpml {

using AxiomSet = std::vector<ConsequencePair>;

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

/// A rule application. `subst` instantiates the rule schema (or, for
/// "axiom", the matched member of Γ; for "substitution", the premise).
struct Proof {
  std::string rule;
  ConsequencePair conclusion;
  Substitution subst;
  std::vector<ProofPtr> premises;

  /// A leaf counts as height 1.
  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p->height());
    return h + 1;
  }

  /// Number of nodes in the (unshared) tree.
  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& p : premises) s += p->size();
    return s;
  }
};

struct RuleSchema {
  std::vector<ConsequencePair> premises;
  ConsequencePair conclusion;
};

/// Rule names in the fixed order used to break ties during proof search.
inline const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names = {
      "top",          "bottom",           "reflexivity",       "transitivity",
      "left-conjunction", "right-disjunction", "right-conjunction", "left-disjunction",
      "modal-top",    "becker-box",       "becker-dia",        "linearity",
      "duality",      "axiom",            "substitution"};
  return names;
}

/// Schemata over the letters p, q, r. "axiom" and "substitution" have none.
inline const std::map<std::string, std::vector<RuleSchema>>& rule_schemata() {
  static const auto table = [] {
    auto pp = [](const char* s) { return parse_pair(s); };
    std::map<std::string, std::vector<RuleSchema>> t;
    t["top"] = {{{}, pp("p |- T")}};
    t["bottom"] = {{{}, pp("F |- p")}};
    t["reflexivity"] = {{{}, pp("p |- p")}};
    t["transitivity"] = {{{pp("p |- q"), pp("q |- r")}, pp("p |- r")}};
    t["left-conjunction"] = {{{}, pp("p & q |- p")}, {{}, pp("p & q |- q")}};
    t["right-disjunction"] = {{{}, pp("p |- p v q")}, {{}, pp("q |- p v q")}};
    t["right-conjunction"] = {{{pp("p |- q"), pp("p |- r")}, pp("p |- q & r")}};
    t["left-disjunction"] = {{{pp("p |- r"), pp("q |- r")}, pp("p v q |- r")}};
    t["modal-top"] = {{{}, pp("T |- []T")}, {{}, pp("T |- <>T")}};
    t["becker-box"] = {{{pp("p |- q")}, pp("[]p |- []q")}};
    t["becker-dia"] = {{{pp("p |- q")}, pp("<>p |- <>q")}};
    t["linearity"] = {{{}, pp("[]p & []q |- [](p & q)")}};
    t["duality"] = {{{}, pp("<>p & []q |- <>(p & q)")}};
    return t;
  }();
  return table;
}

namespace detail {

inline bool same_domain(const Substitution& s, const std::set<std::string>& ls) {
  if (s.size() != ls.size()) return false;
  for (const auto& [k, _] : s)
    if (!ls.count(k)) return false;
  return true;
}

inline std::set<std::string> schema_letters(const RuleSchema& r) {
  auto ls = letters(r.conclusion);
  for (const auto& p : r.premises) {
    auto more = letters(p);
    ls.insert(more.begin(), more.end());
  }
  return ls;
}

inline bool match_pair(const ConsequencePair& pattern, const ConsequencePair& target, Substitution& s) {
  return match(pattern.lhs, target.lhs, s) && match(pattern.rhs, target.rhs, s);
}

}  // namespace detail

/// Builds a node, inferring the substitution by matching the rule's schemata
/// (first schema that fits). Returns nullptr if nothing fits.
inline ProofPtr make_node(const std::string& rule, const ConsequencePair& conclusion,
                          std::vector<ProofPtr> premises, const AxiomSet& gamma = {}) {
  auto try_schema = [&](const std::vector<ConsequencePair>& prem, const ConsequencePair& concl)
      -> std::optional<Substitution> {
    if (prem.size() != premises.size()) return std::nullopt;
    Substitution s;
    if (!detail::match_pair(concl, conclusion, s)) return std::nullopt;
    for (std::size_t i = 0; i < prem.size(); ++i)
      if (!detail::match_pair(prem[i], premises[i]->conclusion, s)) return std::nullopt;
    return s;
  };
  if (rule == "axiom") {
    for (const auto& g : gamma) {
      if (auto s = try_schema({}, g)) {
        return std::make_shared<Proof>(Proof{rule, conclusion, *s, std::move(premises)});
      }
    }
    return nullptr;
  }
  auto it = rule_schemata().find(rule);
  if (it == rule_schemata().end()) return nullptr;
  for (const auto& sch : it->second) {
    if (auto s = try_schema(sch.premises, sch.conclusion)) {
      return std::make_shared<Proof>(Proof{rule, conclusion, *s, std::move(premises)});
    }
  }
  return nullptr;
}

struct ProofCheck {
  bool valid = true;
  std::vector<std::size_t> path;  // premise indices from the root
  std::string reason;
};

/// Checks every node against its rule: the recorded substitution must cover
/// exactly the schema letters and instantiate the conclusion and premises.
inline ProofCheck check_proof(const Proof& pr, const AxiomSet& gamma) {
  ProofCheck bad;
  bad.valid = false;

  auto node_ok = [&](const Proof& n) -> std::optional<std::string> {
    if (n.rule == "substitution") {
      if (n.premises.size() != 1) return "substitution takes one premise";
      if (substitute(n.premises[0]->conclusion, n.subst) != n.conclusion) {
        return "conclusion is not the recorded instance of the premise";
      }
      return std::nullopt;
    }
    if (n.rule == "axiom") {
      if (!n.premises.empty()) return "axiom takes no premises";
      for (const auto& g : gamma) {
        if (detail::same_domain(n.subst, letters(g)) && substitute(g, n.subst) == n.conclusion) {
          return std::nullopt;
        }
      }
      return "not a recorded substitution instance of a member of the axiom set";
    }
    auto it = rule_schemata().find(n.rule);
    if (it == rule_schemata().end()) return "unknown rule '" + n.rule + "'";
    for (const auto& sch : it->second) {
      if (sch.premises.size() != n.premises.size()) continue;
      if (!detail::same_domain(n.subst, detail::schema_letters(sch))) continue;
      if (substitute(sch.conclusion, n.subst) != n.conclusion) continue;
      bool ok = true;
      for (std::size_t i = 0; i < sch.premises.size() && ok; ++i) {
        ok = substitute(sch.premises[i], n.subst) == n.premises[i]->conclusion;
      }
      if (ok) return std::nullopt;
    }
    return "conclusion and premises do not instantiate any schema of " + n.rule;
  };

  std::vector<std::size_t> path;
  std::function<bool(const Proof&)> walk = [&](const Proof& n) {
    if (auto why = node_ok(n)) {
      bad.path = path;
      bad.reason = *why;
      return false;
    }
    for (std::size_t i = 0; i < n.premises.size(); ++i) {
      path.push_back(i);
      if (!walk(*n.premises[i])) return false;
      path.pop_back();
    }
    return true;
  };
  if (!walk(pr)) return bad;
  return {};
}

// ---------------------------------------------------------------------------
// Bounded proof search

struct SearchStats {
  std::size_t pool_size = 0;
  std::size_t levels = 0;
  bool saturated = false;
};

struct DeriveResult {
  ProofPtr proof;  // null when not found
  SearchStats stats;

  bool found() const { return proof != nullptr; }
};

inline constexpr std::size_t kMaxPool = 4096;

namespace detail {

inline bool has_modality(const Formula& f) { return !is_modality_free(f); }

/// The cut-formula pool: subformulas of the goal and of Γ-instances found by
/// matching Γ against those subformulas, ⊤ and ⊥; when modalities occur,
/// closed once under □ and ◇ and under the formulas linearity and duality
/// need (□a∧□b, a∧b, □(a∧b), ◇a∧□b, ◇(a∧b)). With letter_sides off, a side
/// of γ that is a bare letter is not matched (it matches everything).
inline std::optional<std::vector<Formula>> build_pool(const AxiomSet& gamma, const ConsequencePair& goal,
                                                      bool letter_sides) {
  std::set<Formula> base = subformulas(goal.lhs);
  for (const auto& f : subformulas(goal.rhs)) base.insert(f);
  base.insert(Formula::top());
  base.insert(Formula::bot());

  bool modal = has_modality(goal.lhs) || has_modality(goal.rhs);
  for (const auto& g : gamma) modal = modal || has_modality(g.lhs) || has_modality(g.rhs);

  std::set<Formula> instances;
  const std::vector<Formula> seeds(base.begin(), base.end());
  for (const auto& g : gamma) {
    const auto gl = letters(g);
    for (const auto& x : seeds) {
      for (const auto* side : {&g.lhs, &g.rhs}) {
        if (!letter_sides && side->is(Op::Letter)) continue;
        Substitution s;
        if (!match(*side, x, s)) continue;
        // Letters of γ not fixed by the match are left as themselves.
        for (const auto& l : gl)
          if (!s.count(l)) s.emplace(l, Formula::letter(l));
        auto inst = substitute(g, s);
        for (const auto& f : subformulas(inst.lhs)) instances.insert(f);
        for (const auto& f : subformulas(inst.rhs)) instances.insert(f);
      }
    }
  }
  base.insert(instances.begin(), instances.end());
  if (!modal) return std::vector<Formula>(base.begin(), base.end());

  std::set<Formula> pool = base;
  for (const auto& x : base) {
    pool.insert(Formula::box(x));
    pool.insert(Formula::dia(x));
  }
  if (base.size() * base.size() * 6 > kMaxPool * 4) return std::nullopt;
  for (const auto& a : base) {
    for (const auto& b : base) {
      const auto ab = Formula::conj(a, b);
      if (a <= b) {
        pool.insert(Formula::conj(Formula::box(a), Formula::box(b)));
        pool.insert(ab);
        pool.insert(Formula::box(ab));
      }
      pool.insert(Formula::conj(Formula::dia(a), Formula::box(b)));
      pool.insert(ab);
      pool.insert(Formula::dia(ab));
    }
  }
  if (pool.size() > kMaxPool) return std::nullopt;
  return std::vector<Formula>(pool.begin(), pool.end());
}

/// The full pool when it fits kMaxPool, else the one without letter-side
/// matches.
inline std::vector<Formula> proof_pool(const AxiomSet& gamma, const ConsequencePair& goal) {
  if (auto p = build_pool(gamma, goal, true)) return *p;
  if (auto p = build_pool(gamma, goal, false)) return *p;
  throw Error(ErrorKind::ResourceBound, "proof-search pool would exceed " + std::to_string(kMaxPool));
}

class BitRows {
 public:
  explicit BitRows(std::size_t n) : n_(n), w_((n + 63) / 64), bits_(n * w_, 0) {}
  bool get(std::size_t a, std::size_t b) const { return (bits_[a * w_ + b / 64] >> (b % 64)) & 1U; }
  void set(std::size_t a, std::size_t b) { bits_[a * w_ + b / 64] |= std::uint64_t{1} << (b % 64); }
  std::uint64_t* row(std::size_t a) { return &bits_[a * w_]; }
  const std::uint64_t* row(std::size_t a) const { return &bits_[a * w_]; }
  std::size_t words() const { return w_; }

 private:
  std::size_t n_;
  std::size_t w_;
  std::vector<std::uint64_t> bits_;
};

/// Level-by-level forward closure over pool × pool. level(a,b) is the least
/// proof height for a ⊴ b using only pool formulas, 0 if none is found.
class Deriver {
 public:
  Deriver(AxiomSet gamma, std::vector<Formula> pool) : gamma_(std::move(gamma)), pool_(std::move(pool)) {
    n_ = pool_.size();
    if (n_ > kMaxPool) {
      throw Error(ErrorKind::ResourceBound, "proof-search pool has " + std::to_string(n_) + " formulas");
    }
    for (std::size_t i = 0; i < n_; ++i) index_.emplace(pool_[i], i);
    level_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& f = pool_[i];
      if (f.is(Op::And)) {
        auto l = find(f.left()), r = find(f.right());
        if (l && r) conj_.push_back({*l, *r, i});
      } else if (f.is(Op::Or)) {
        auto l = find(f.left()), r = find(f.right());
        if (l && r) disj_.push_back({*l, *r, i});
      } else if (f.is(Op::Box)) {
        if (auto c = find(f.child())) box_.push_back({*c, i});
      } else if (f.is(Op::Dia)) {
        if (auto c = find(f.child())) dia_.push_back({*c, i});
      }
    }
  }

  std::optional<std::size_t> find(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return n_; }
  std::uint8_t level(std::size_t a, std::size_t b) const { return level_[a * n_ + b]; }
  const Formula& formula(std::size_t i) const { return pool_[i]; }

  /// Runs until `stop_at` (if given) is derived, the closure saturates, or
  /// `depth` levels have been computed. Returns the number of levels run.
  std::size_t run(std::size_t depth, std::optional<std::pair<std::size_t, std::size_t>> stop_at,
                  bool& saturated) {
    saturated = false;
    if (depth == 0) return 0;
    BitRows cur(n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (leaf_rule(a, b)) {
          cur.set(a, b);
          level_[a * n_ + b] = 1;
        }
    std::size_t k = 1;
    auto reached = [&] { return stop_at && level(stop_at->first, stop_at->second) != 0; };
    while (k < depth && k < 255 && !reached()) {
      BitRows next = cur;
      const std::size_t w = cur.words();
      // transitivity
      for (std::size_t a = 0; a < n_; ++a) {
        std::uint64_t* out = next.row(a);
        const std::uint64_t* ra = cur.row(a);
        for (std::size_t wi = 0; wi < w; ++wi) {
          std::uint64_t m = ra[wi];
          while (m != 0) {
            const std::size_t b = wi * 64 + static_cast<std::size_t>(std::countr_zero(m));
            m &= m - 1;
            const std::uint64_t* rb = cur.row(b);
            for (std::size_t j = 0; j < w; ++j) out[j] |= rb[j];
          }
        }
      }
      // right conjunction
      for (const auto& c : conj_)
        for (std::size_t a = 0; a < n_; ++a)
          if (cur.get(a, c.l) && cur.get(a, c.r)) next.set(a, c.self);
      // left disjunction
      for (const auto& d : disj_) {
        std::uint64_t* out = next.row(d.self);
        const std::uint64_t* rl = cur.row(d.l);
        const std::uint64_t* rr = cur.row(d.r);
        for (std::size_t j = 0; j < w; ++j) out[j] |= rl[j] & rr[j];
      }
      // Becker
      for (const auto* ms : {&box_, &dia_})
        for (const auto& x : *ms)
          for (const auto& y : *ms)
            if (cur.get(x.child, y.child)) next.set(x.self, y.self);

      ++k;
      bool changed = false;
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
          if (next.get(a, b) && level_[a * n_ + b] == 0) {
            level_[a * n_ + b] = static_cast<std::uint8_t>(k);
            changed = true;
          }
      cur = std::move(next);
      if (!changed) {
        saturated = true;
        --k;
        break;
      }
    }
    return k;
  }

  /// Least proof of pool[a] ⊴ pool[b] at its recorded level.
  ProofPtr reconstruct(std::size_t a, std::size_t b) {
    const auto key = a * n_ + b;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::uint8_t k = level(a, b);
    if (k == 0) return nullptr;
    const ConsequencePair concl{pool_[a], pool_[b]};
    ProofPtr out;
    auto below = [&](std::size_t x, std::size_t y) {
      const auto l = level(x, y);
      return l != 0 && l < k;
    };
    if (k == 1) {
      for (const auto& r : rule_names()) {
        if (rule_schemata().count(r) && rule_schemata().at(r).front().premises.empty()) {
          if ((out = make_node(r, concl, {}))) break;
        } else if (r == "axiom") {
          if ((out = make_node(r, concl, {}, gamma_))) break;
        }
      }
    } else {
      for (const auto& r : rule_names()) {
        if (r == "transitivity") {
          for (std::size_t c = 0; c < n_ && !out; ++c)
            if (below(a, c) && below(c, b))
              out = make_node(r, concl, {reconstruct(a, c), reconstruct(c, b)});
        } else if (r == "right-conjunction") {
          for (const auto& c : conj_)
            if (!out && c.self == b && below(a, c.l) && below(a, c.r))
              out = make_node(r, concl, {reconstruct(a, c.l), reconstruct(a, c.r)});
        } else if (r == "left-disjunction") {
          for (const auto& d : disj_)
            if (!out && d.self == a && below(d.l, b) && below(d.r, b))
              out = make_node(r, concl, {reconstruct(d.l, b), reconstruct(d.r, b)});
        } else if (r == "becker-box" || r == "becker-dia") {
          const auto& ms = r == "becker-box" ? box_ : dia_;
          for (const auto& x : ms)
            for (const auto& y : ms)
              if (!out && x.self == a && y.self == b && below(x.child, y.child))
                out = make_node(r, concl, {reconstruct(x.child, y.child)});
        }
        if (out) break;
      }
    }
    if (!out) {
      throw Error(ErrorKind::InternalInconsistency, "no rule reconstructs " + to_string(concl));
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  struct Bin {
    std::size_t l, r, self;
  };
  struct Un {
    std::size_t child, self;
  };

  bool leaf_rule(std::size_t a, std::size_t b) const {
    const auto& x = pool_[a];
    const auto& y = pool_[b];
    if (y.is(Op::Top) || x.is(Op::Bot) || a == b) return true;
    if (x.is(Op::And) && (x.left() == y || x.right() == y)) return true;
    if (y.is(Op::Or) && (y.left() == x || y.right() == x)) return true;
    if (x.is(Op::Top) && (y.is(Op::Box) || y.is(Op::Dia)) && y.child().is(Op::Top)) return true;
    if (x.is(Op::And) && y.is(Op::Box) && y.child().is(Op::And) && x.right().is(Op::Box)) {
      if (x.left().is(Op::Box) && x.left().child() == y.child().left() &&
          x.right().child() == y.child().right()) {
        return true;
      }
    }
    if (x.is(Op::And) && y.is(Op::Dia) && y.child().is(Op::And) && x.right().is(Op::Box)) {
      if (x.left().is(Op::Dia) && x.left().child() == y.child().left() &&
          x.right().child() == y.child().right()) {
        return true;
      }
    }
    for (const auto& g : gamma_) {
      Substitution s;
      if (match(g.lhs, x, s) && match(g.rhs, y, s)) return true;
    }
    return false;
  }

  AxiomSet gamma_;
  std::vector<Formula> pool_;
  std::size_t n_ = 0;
  std::map<Formula, std::size_t> index_;
  std::vector<std::uint8_t> level_;
  std::vector<Bin> conj_, disj_;
  std::vector<Un> box_, dia_;
  std::unordered_map<std::size_t, ProofPtr> memo_;
};

}  // namespace detail

/// Searches for a proof of `goal` from Γ of height ≤ depth whose formulas
/// all lie in the cut pool. Complete relative to the pool and the bound.
inline DeriveResult derive_bounded(const AxiomSet& gamma, const ConsequencePair& goal, std::size_t depth) {
  detail::Deriver d(gamma, detail::proof_pool(gamma, goal));
  const auto a = *d.find(goal.lhs);
  const auto b = *d.find(goal.rhs);
  DeriveResult r;
  r.stats.pool_size = d.size();
  r.stats.levels = d.run(depth, std::make_pair(a, b), r.stats.saturated);
  if (d.level(a, b) != 0) r.proof = d.reconstruct(a, b);
  return r;
}

// ---------------------------------------------------------------------------
// Whitman decision for the free bounded lattice

namespace detail {

inline bool whitman(const Formula& a, const Formula& b,
                    std::map<std::pair<Formula, Formula>, bool>& memo) {
  if (a.is(Op::Bot) || b.is(Op::Top)) return true;
  if (auto it = memo.find({a, b}); it != memo.end()) return it->second;
  bool r = false;
  if (a.is(Op::Or)) {
    r = whitman(a.left(), b, memo) && whitman(a.right(), b, memo);
  } else if (b.is(Op::And)) {
    r = whitman(a, b.left(), memo) && whitman(a, b.right(), memo);
  } else if (a.is(Op::Letter) && b.is(Op::Letter)) {
    r = a.name() == b.name();
  } else {
    // a ∈ {letter, ⊤, ∧}, b ∈ {letter, ⊥, ∨}
    if (a.is(Op::And)) r = whitman(a.left(), b, memo) || whitman(a.right(), b, memo);
    if (!r && b.is(Op::Or)) r = whitman(a, b.left(), memo) || whitman(a, b.right(), memo);
  }
  memo.emplace(std::make_pair(a, b), r);
  return r;
}

}  // namespace detail

/// Whitman's condition, extended with ⊥ ≤ w, w ≤ ⊤ and nothing else for the
/// constants. Both formulas must be modality-free.
inline bool free_lattice_leq(const Formula& a, const Formula& b) {
  if (!is_modality_free(a) || !is_modality_free(b)) {
    throw Error(ErrorKind::Precondition, "free_lattice_leq takes modality-free formulas");
  }
  std::map<std::pair<Formula, Formula>, bool> memo;
  return detail::whitman(a, b, memo);
}

}  // namespace wpml
