// Craig interpolant search: decide the entailment, then scan candidates over
// the shared letters in a canonical order, filtering semantically on small
// frames before asking for both derivations.

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "wpml/entailment.hpp"

namespace wpml {

struct InterpolationBounds {
  std::size_t proof_depth = 8;
  std::size_t cand_depth = 4;
  std::size_t model_size = 4;
};

struct Interpolant {
  Formula chi;
  ProofPtr left;   // φ ⊴ χ
  ProofPtr right;  // χ ⊴ ψ
  std::size_t candidates_tried = 0;
};

struct NoEntailment {
  std::optional<FrameCountermodel> frame;
  std::optional<LatticeCountermodel> lattice;
};

struct InterpolationUnknown {
  std::string stage;  // "entailment" or "candidates"
  Unknown entailment;
  std::size_t candidates = 0;
  std::size_t candidates_passing_filter = 0;
  InterpolationBounds bounds;
};

using InterpolationResult = std::variant<Interpolant, NoEntailment, InterpolationUnknown>;

inline std::vector<std::string> shared_letters(const Formula& phi, const Formula& psi) {
  const auto a = letters(phi), b = letters(psi);
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace detail {

inline bool letters_within(const Formula& f, const std::set<std::string>& allowed) {
  for (const auto& l : letters(f))
    if (!allowed.count(l)) return false;
  return true;
}

/// Every join of meets of atoms using at most `max_atoms` atom occurrences,
/// each meet a strictly increasing atom list and the meets strictly
/// increasing, plus ⊤ and ⊥; sorted by size, then structure.
inline std::vector<Formula> dnf_candidates(const std::vector<Formula>& atoms, std::size_t max_atoms) {
  std::vector<std::pair<std::vector<std::size_t>, Formula>> meets;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    if (!cur.empty()) {
      Formula f = atoms[cur[0]];
      for (std::size_t i = 1; i < cur.size(); ++i) f = Formula::conj(f, atoms[cur[i]]);
      meets.emplace_back(cur, f);
    }
    if (cur.size() == max_atoms) return;
    for (std::size_t i = from; i < atoms.size(); ++i) {
      cur.push_back(i);
      grow(i + 1);
      cur.pop_back();
    }
  };
  grow(0);
  std::set<Formula> out = {Formula::top(), Formula::bot()};
  std::function<void(std::size_t, std::size_t, std::optional<Formula>)> join =
      [&](std::size_t from, std::size_t used, std::optional<Formula> acc) {
        if (acc) out.insert(*acc);
        for (std::size_t i = from; i < meets.size(); ++i) {
          const auto k = meets[i].first.size();
          if (used + k > max_atoms) continue;
          join(i + 1, used + k, acc ? Formula::disj(*acc, meets[i].second) : meets[i].second);
        }
      };
  join(0, 0, std::nullopt);
  std::vector<Formula> v(out.begin(), out.end());
  std::stable_sort(v.begin(), v.end(), [](const Formula& a, const Formula& b) { return a.size() < b.size(); });
  return v;
}

/// Truth sets of φ and ψ on every (frame, valuation) of a small corpus, so
/// candidates can be rejected without proof search.
class SemanticFilter {
 public:
  SemanticFilter(const std::vector<Axiom>& gamma, const Formula& phi, const Formula& psi, std::size_t max_size) {
    auto ls = letters(phi);
    for (const auto& l : letters(psi)) ls.insert(l);
    letters_.assign(ls.begin(), ls.end());
    for_each_small_modal_lframe(max_size, [&](const ModalLFrame& F) {
      if (!frame_satisfies_all(F, gamma)) return true;
      const auto fs = filters(F.base());
      frames_.push_back(F);
      for_each_tuple(fs.size(), letters_.size(), kDefaultBudget, [&](const std::vector<Id>& t) {
        FrameValuation V{letters_, {}};
        for (Id i : t) V.values.push_back(fs[i]);
        cases_.push_back({frames_.size() - 1, V, truth_set(F, V, phi), truth_set(F, V, psi)});
        return true;
      });
      return true;
    });
  }

  bool admits(const Formula& chi) {
    for (std::size_t i = 0; i < cases_.size(); ++i) {
      auto& c = cases_[i];
      const Mask m = truth_set(frames_[c.frame], c.valuation, chi);
      if (!subset(c.phi, m) || !subset(m, c.psi)) {
        // Move the refuting case forward; it is likely to refute the next
        // candidate too.
        if (i != 0) std::swap(cases_[i], cases_[0]);
        return false;
      }
    }
    return true;
  }

 private:
  struct Case {
    std::size_t frame;
    FrameValuation valuation;
    Mask phi, psi;
  };
  std::vector<std::string> letters_;
  std::vector<ModalLFrame> frames_;
  std::vector<Case> cases_;
};

}  // namespace detail

/// Candidate atoms: shared letters and subformulas of φ, ψ over shared
/// letters, then (when modalities occur) □a and ◇a for each of them, and □⊥,
/// ◇⊥.
inline std::vector<Formula> interpolant_atoms(const Formula& phi, const Formula& psi, bool modal) {
  const auto shared = shared_letters(phi, psi);
  const std::set<std::string> allowed(shared.begin(), shared.end());
  std::set<Formula> base;
  for (const auto& l : shared) base.insert(Formula::letter(l));
  for (const auto* f : {&phi, &psi})
    for (const auto& s : subformulas(*f))
      if (!s.is(Op::Top) && !s.is(Op::Bot) && detail::letters_within(s, allowed)) base.insert(s);
  std::set<Formula> atoms = base;
  if (modal) {
    for (const auto& b : base) {
      atoms.insert(Formula::box(b));
      atoms.insert(Formula::dia(b));
    }
    atoms.insert(Formula::box(Formula::bot()));
    atoms.insert(Formula::dia(Formula::bot()));
  }
  std::vector<Formula> v(atoms.begin(), atoms.end());
  std::stable_sort(v.begin(), v.end(), [](const Formula& a, const Formula& b) { return a.size() < b.size(); });
  return v;
}

inline InterpolationResult craig_interpolant(const Formula& phi, const Formula& psi, const std::vector<Axiom>& gamma,
                                             const InterpolationBounds& bounds = {}) {
  const ConsequencePair goal{phi, psi};
  auto ent = decide_entailment(gamma, goal, bounds.proof_depth, bounds.model_size);
  if (auto* r = std::get_if<Refuted>(&ent)) return NoEntailment{r->countermodel, std::nullopt};
  if (auto* u = std::get_if<Unknown>(&ent)) return InterpolationUnknown{"entailment", *u, 0, 0, bounds};

  // every named axiom is modal
  const bool modal = !gamma.empty() || !is_modality_free(phi) || !is_modality_free(psi);
  const auto atoms = interpolant_atoms(phi, psi, modal);
  const auto cands = detail::dnf_candidates(atoms, bounds.cand_depth);
  detail::SemanticFilter filter(gamma, phi, psi, std::min<std::size_t>(bounds.model_size, 3));
  const auto ax = axiom_set(gamma);
  InterpolationUnknown unk{"candidates", {}, cands.size(), 0, bounds};
  std::size_t tried = 0;
  for (const auto& chi : cands) {
    ++tried;
    if (!filter.admits(chi)) continue;
    ++unk.candidates_passing_filter;
    auto l = derive_bounded(ax, {phi, chi}, bounds.proof_depth);
    if (!l.found()) continue;
    auto r = derive_bounded(ax, {chi, psi}, bounds.proof_depth);
    if (!r.found()) continue;
    return Interpolant{chi, l.proof, r.proof, tried};
  }
  return unk;
}

// ---------------------------------------------------------------------------
// Distributive fragment

inline ConsequencePair distributivity_pair() { return parse_pair("p & (q v r) |- (p & q) v (p & r)"); }

/// ⊥, ⊤, then every nonempty antichain of nonempty letter sets as a join of
/// meets, by size then structure. These are the elements of the free
/// bounded distributive lattice on the letters, each exactly once.
inline std::vector<Formula> distributive_candidates(const std::vector<std::string>& ls) {
  const std::size_t k = ls.size();
  if (k > 4) throw Error(ErrorKind::ResourceBound, "more than 4 shared letters");
  std::vector<Mask> sets;
  for (Mask s = 1; s < (Mask{1} << k); ++s) sets.push_back(s);
  auto meet_of = [&](Mask s) {
    std::optional<Formula> f;
    for_each_bit(s, [&](Id i) {
      auto l = Formula::letter(ls[i]);
      f = f ? Formula::conj(*f, l) : l;
    });
    return *f;
  };
  std::vector<Formula> body;
  const std::size_t m = sets.size();
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << m); ++pick) {
    bool antichain = true;
    for (std::size_t i = 0; i < m && antichain; ++i)
      for (std::size_t j = 0; j < m && antichain; ++j)
        if (i != j && ((pick >> i) & 1U) && ((pick >> j) & 1U) && subset(sets[i], sets[j])) antichain = false;
    if (!antichain) continue;
    std::optional<Formula> f;
    for (std::size_t i = 0; i < m; ++i)
      if ((pick >> i) & 1U) f = f ? Formula::disj(*f, meet_of(sets[i])) : meet_of(sets[i]);
    body.push_back(*f);
  }
  std::sort(body.begin(), body.end(), [](const Formula& a, const Formula& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<Formula> out = {Formula::bot(), Formula::top()};
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline InterpolationResult distributive_fragment_interpolant(const Formula& phi, const Formula& psi,
                                                             std::size_t proof_depth = 8) {
  if (!is_modality_free(phi) || !is_modality_free(psi)) {
    throw Error(ErrorKind::Precondition, "distributive fragment takes modality-free formulas");
  }
  const auto shared = shared_letters(phi, psi);
  if (shared.size() > 4) throw Error(ErrorKind::ResourceBound, "more than 4 shared letters");
  const ConsequencePair goal{phi, psi};
  if (auto cm = lattice_countermodel(goal, 6, true)) return NoEntailment{std::nullopt, *cm};

  const AxiomSet ax = {distributivity_pair()};
  const auto dist = lattices_up_to(6, true);
  InterpolationUnknown unk{"candidates", {}, 0, 0, {proof_depth, shared.size(), 6}};
  const auto cands = distributive_candidates(shared);
  unk.candidates = cands.size();
  std::size_t tried = 0;
  for (const auto& chi : cands) {
    ++tried;
    bool ok = true;
    for (const auto& L : dist) {
      const auto A = FiniteModalLattice::identity(L);
      if (!validates(A, {phi, chi}) || !validates(A, {chi, psi})) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++unk.candidates_passing_filter;
    auto l = derive_bounded(ax, {phi, chi}, proof_depth);
    if (!l.found()) continue;
    auto r = derive_bounded(ax, {chi, psi}, proof_depth);
    if (!r.found()) continue;
    return Interpolant{chi, l.proof, r.proof, tried};
  }
  return unk;
}

}  // namespace wpml
