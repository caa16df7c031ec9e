// Two-sided bounded decision for Γ ⊆ {T,4,B,5,.2}: proof search first, then
// a search over small modal L-frames satisfying Γ's frame conditions.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wpml/correspondence.hpp"
#include "wpml/lattice.hpp"
#include "wpml/lframe.hpp"
#include "wpml/proof.hpp"

namespace wpml {

struct FrameCountermodel {
  ModalLFrame frame;
  FrameValuation valuation;
};

struct Derivable {
  ProofPtr proof;
};

struct Refuted {
  FrameCountermodel countermodel;
};

struct Unknown {
  std::size_t proof_depth = 0;
  std::size_t pool_size = 0;
  std::size_t levels_run = 0;
  bool saturated = false;
  std::size_t model_size = 0;
  std::size_t frames_checked = 0;
  std::string note;
};

using EntailmentVerdict = std::variant<Derivable, Refuted, Unknown>;

inline bool frame_satisfies_all(const ModalLFrame& F, const std::vector<Axiom>& gamma) {
  for (Axiom a : gamma)
    if (!frame_satisfies(F, condition_of(a))) return false;
  return true;
}

/// First frame (smallest first, canonical order) satisfying Θ_Γ that
/// refutes the pair. Counts frames inspected in `checked`.
inline std::optional<FrameCountermodel> frame_countermodel(const std::vector<Axiom>& gamma,
                                                           const ConsequencePair& goal, std::size_t model_size,
                                                           std::size_t& checked, std::size_t budget = kDefaultBudget) {
  std::optional<FrameCountermodel> out;
  for_each_small_modal_lframe(model_size, [&](const ModalLFrame& F) {
    if (!frame_satisfies_all(F, gamma)) return true;
    ++checked;
    auto v = frame_validates(F, goal, budget);
    if (auto* V = std::get_if<FrameValuation>(&v)) {
      out = FrameCountermodel{F, *V};
      return false;
    }
    return true;
  });
  return out;
}

inline EntailmentVerdict decide_entailment(const std::vector<Axiom>& gamma, const ConsequencePair& goal,
                                           std::size_t proof_depth, std::size_t model_size,
                                           std::size_t budget = kDefaultBudget) {
  Unknown u;
  u.proof_depth = proof_depth;
  u.model_size = model_size;
  try {
    auto d = derive_bounded(axiom_set(gamma), goal, proof_depth);
    if (d.found()) return Derivable{d.proof};
    u.pool_size = d.stats.pool_size;
    u.levels_run = d.stats.levels;
    u.saturated = d.stats.saturated;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceBound) throw;
    u.note = e.what();
  }
  try {
    if (auto cm = frame_countermodel(gamma, goal, model_size, u.frames_checked, budget)) return Refuted{*cm};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceBound) throw;
    u.note += (u.note.empty() ? "" : "; ") + std::string(e.what());
  }
  return u;
}

struct LatticeCountermodel {
  FiniteLattice lattice;
  Valuation valuation;
};

/// First lattice of size ≤ max_size (identity modalities) refuting the pair.
inline std::optional<LatticeCountermodel> lattice_countermodel(const ConsequencePair& goal, std::size_t max_size,
                                                               bool distributive_only = false,
                                                               std::size_t budget = kDefaultBudget) {
  for (const auto& L : lattices_up_to(max_size, distributive_only)) {
    auto v = algebra_validates(FiniteModalLattice::identity(L), goal, budget);
    if (auto* V = std::get_if<Valuation>(&v)) return LatticeCountermodel{L, *V};
  }
  return std::nullopt;
}

}  // namespace wpml
