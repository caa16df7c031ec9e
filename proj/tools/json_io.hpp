// JSON reading and writing for the command-line tool. Every artifact is
// wrapped as {"format":"wpml/1","kind":...,"payload":...}.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpml/amalgam.hpp"
#include "wpml/correspondence.hpp"
#include "wpml/duality.hpp"
#include "wpml/entailment.hpp"
#include "wpml/interpolation.hpp"
#include "wpml/lattice.hpp"
#include "wpml/lframe.hpp"
#include "wpml/proof.hpp"

namespace wpml::io {

using json = nlohmann::json;

inline constexpr const char* kFormat = "wpml/1";

inline json envelope(const std::string& kind, json payload) {
  return json{{"format", kFormat}, {"kind", kind}, {"payload", std::move(payload)}};
}

/// Accepts an envelope or a bare payload carrying "kind".
inline std::pair<std::string, json> unwrap(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "expected a JSON object");
  if (j.contains("payload")) {
    if (j.value("format", std::string()) != kFormat) {
      throw Error(ErrorKind::Parse, "unsupported format tag (expected " + std::string(kFormat) + ")");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw Error(ErrorKind::Parse, "envelope without kind");
    return {j["kind"].get<std::string>(), j["payload"]};
  }
  if (j.contains("kind") && j["kind"].is_string()) return {j["kind"].get<std::string>(), j};
  throw Error(ErrorKind::Parse, "object has neither an envelope nor a kind");
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

namespace detail {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("field '") + key + "': " + e.what());
  }
}

inline std::string hex(Mask m) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(m));
  return buf;
}

inline json masks(const std::vector<Mask>& ms) {
  json a = json::array();
  for (Mask m : ms) a.push_back(members(m));
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lattices

inline json to_json(const FiniteLattice& L) {
  std::vector<std::vector<int>> leq(L.size(), std::vector<int>(L.size()));
  for (Id a = 0; a < L.size(); ++a)
    for (Id b = 0; b < L.size(); ++b) leq[a][b] = L.leq(a, b) ? 1 : 0;
  return json{{"kind", "lattice"}, {"elements", L.names()}, {"leq", leq}, {"bot", L.bot()}, {"top", L.top()}};
}

inline json to_json(const FiniteModalLattice& A) {
  json j = to_json(A.base);
  j["kind"] = "modal_lattice";
  j["box"] = A.box;
  j["diamond"] = A.diamond;
  return j;
}

/// Parses a lattice payload. Order defects raise LatticeError; box/diamond
/// tables default to the identity for kind "lattice".
inline FiniteModalLattice lattice_from_json(const json& j) {
  auto names = detail::field<std::vector<std::string>>(j, "elements");
  auto raw = detail::field<std::vector<std::vector<int>>>(j, "leq");
  const auto bot = detail::field<Id>(j, "bot");
  const auto top = detail::field<Id>(j, "top");
  std::vector<std::vector<bool>> leq;
  for (const auto& row : raw) {
    std::vector<bool> r;
    for (int v : row) {
      if (v != 0 && v != 1) throw Error(ErrorKind::Parse, "leq entries must be 0 or 1");
      r.push_back(v == 1);
    }
    leq.push_back(std::move(r));
  }
  FiniteModalLattice A = FiniteModalLattice::identity(FiniteLattice::from_order(std::move(names), leq, bot, top));
  if (j.contains("box")) A.box = detail::field<std::vector<Id>>(j, "box");
  if (j.contains("diamond")) A.diamond = detail::field<std::vector<Id>>(j, "diamond");
  return A;
}

inline json to_json(const LatticeMorphism& h, const std::string& dom, const std::string& cod) {
  return json{{"dom", dom}, {"cod", cod}, {"map", h.map}, {"modal", h.modal}};
}

inline LatticeMorphism morphism_from_json(const json& j) {
  return LatticeMorphism{detail::field<std::vector<Id>>(j, "map"), j.value("modal", true)};
}

// ---------------------------------------------------------------------------
// Frames

inline json to_json(const ModalLFrame& F) {
  json R = json::array();
  for (auto [x, y] : F.pairs()) R.push_back({x, y});
  return json{{"kind", "modal_lframe"},
              {"elements", F.base().names()},
              {"meet", F.base().meet_table()},
              {"one", F.base().one()},
              {"R", R}};
}

inline LFrame lframe_from_json(const json& j) {
  return LFrame::from_meet(detail::field<std::vector<std::string>>(j, "elements"),
                           detail::field<std::vector<std::vector<Id>>>(j, "meet"), detail::field<Id>(j, "one"));
}

/// The frame and its relation, not yet checked against (i)-(v).
inline ModalLFrame modal_lframe_from_json(const json& j) {
  auto X = lframe_from_json(j);
  auto pairs = detail::field<std::vector<std::pair<Id, Id>>>(j, "R");
  for (auto [x, y] : pairs)
    if (x >= X.size() || y >= X.size()) throw Error(ErrorKind::Validation, "R mentions an unknown point");
  return ModalLFrame::from_pairs(std::move(X), pairs);
}

inline json to_json(const ModalLSpaceFin& S) {
  json j = to_json(S.frame);
  json prov = json::object();
  for (Id i = 0; i < S.provenance.size(); ++i) prov[std::to_string(i)] = detail::hex(S.provenance[i]);
  j["provenance"] = prov;
  return j;
}

// ---------------------------------------------------------------------------
// V-formations

inline json to_json(const VFormation& v) {
  return json{{"kind", "vformation"},
              {"K", to_json(v.K)},
              {"L1", to_json(v.L1)},
              {"L2", to_json(v.L2)},
              {"h1", to_json(v.h1, "K", "L1")},
              {"h2", to_json(v.h2, "K", "L2")}};
}

inline VFormation vformation_from_json(const json& j) {
  for (const char* k : {"K", "L1", "L2", "h1", "h2"})
    if (!j.contains(k)) throw Error(ErrorKind::Parse, std::string("missing field '") + k + "'");
  return VFormation{lattice_from_json(j["K"]), lattice_from_json(j["L1"]), lattice_from_json(j["L2"]),
                    morphism_from_json(j["h1"]), morphism_from_json(j["h2"])};
}

// ---------------------------------------------------------------------------
// Proofs, valuations, reports

inline json to_json(const ProofPtr& p) {
  json subst = json::object();
  for (const auto& [k, f] : p->subst) subst[k] = to_string(f);
  json prem = json::array();
  for (const auto& q : p->premises) prem.push_back(to_json(q));
  return json{{"rule", p->rule}, {"conclusion", to_string(p->conclusion)}, {"premises", prem}, {"subst", subst}};
}

inline json to_json(const Violation& v) { return json{{"condition", v.condition}, {"witness", v.witness}}; }

inline json to_json(const Valuation& V, const FiniteLattice& L) {
  json j = json::object();
  for (std::size_t i = 0; i < V.letters.size(); ++i) j[V.letters[i]] = L.name(V.assignment[i]);
  return j;
}

inline json to_json(const FrameValuation& V) {
  json j = json::object();
  for (std::size_t i = 0; i < V.letters.size(); ++i) j[V.letters[i]] = members(V.values[i]);
  return j;
}

inline json to_json(const FrameCountermodel& c) {
  return json{{"frame", to_json(c.frame)}, {"valuation", to_json(c.valuation)}};
}

inline json to_json(const AmalgamReport& r, const VFormation& v) {
  json w = json::array();
  for (const auto& e : r.witnesses) {
    json x{{"a", v.L1.base.name(e.a)}, {"b", v.L2.base.name(e.b)}};
    x["c"] = e.c ? json(v.K.base.name(*e.c)) : json(nullptr);
    w.push_back(x);
  }
  return json{{"commutes", r.commutes},
              {"p1_injective", r.p1_injective},
              {"p2_injective", r.p2_injective},
              {"p1_homomorphism", r.p1_homomorphism},
              {"p2_homomorphism", r.p2_homomorphism},
              {"claim_holds", r.claim_holds},
              {"claims_checked", r.claims_checked},
              {"pullback_size", r.pullback_size},
              {"witnesses", w},
              {"failures", r.failures},
              {"verdict", r.pass ? "pass" : "fail"}};
}

inline json to_json(const CorrespondenceReport& r) {
  json pairs = json::array();
  const auto ps = axiom_pairs(r.axiom);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    json p{{"pair", to_string(ps[i])}, {"valid", bool(r.pair_valid[i])}};
    if (r.countervaluations[i]) p["countervaluation"] = to_json(*r.countervaluations[i]);
    pairs.push_back(p);
  }
  json j{{"axiom", to_string(r.axiom)},
         {"condition", to_string(r.condition)},
         {"condition_holds", r.condition_holds},
         {"pairs", pairs},
         {"tight", r.tight},
         {"sound", r.sound},
         {"consistent", r.consistent}};
  if (r.condition_witness) j["condition_witness"] = to_json(*r.condition_witness);
  if (r.existential_holds) j["existential_holds"] = *r.existential_holds;
  if (r.converse) j["converse"] = *r.converse;
  return j;
}

inline json to_json(const Unknown& u) {
  return json{{"proof_depth", u.proof_depth}, {"pool_size", u.pool_size},   {"levels_run", u.levels_run},
              {"saturated", u.saturated},     {"model_size", u.model_size}, {"frames_checked", u.frames_checked},
              {"note", u.note}};
}

inline json to_json(const EntailmentVerdict& v) {
  if (auto* d = std::get_if<Derivable>(&v)) return json{{"verdict", "derivable"}, {"proof", to_json(d->proof)}};
  if (auto* r = std::get_if<Refuted>(&v)) return json{{"verdict", "refuted"}, {"countermodel", to_json(r->countermodel)}};
  return json{{"verdict", "unknown"}, {"diagnostics", to_json(std::get<Unknown>(v))}};
}

inline json to_json(const InterpolationResult& r) {
  if (auto* i = std::get_if<Interpolant>(&r)) {
    return json{{"verdict", "interpolant"},
                {"chi", to_string(i->chi)},
                {"candidates_tried", i->candidates_tried},
                {"proof_left", to_json(i->left)},
                {"proof_right", to_json(i->right)}};
  }
  if (auto* n = std::get_if<NoEntailment>(&r)) {
    json j{{"verdict", "no_entailment"}};
    if (n->frame) j["frame_countermodel"] = to_json(*n->frame);
    if (n->lattice) {
      j["lattice_countermodel"] = json{{"lattice", to_json(n->lattice->lattice)},
                                       {"valuation", to_json(n->lattice->valuation, n->lattice->lattice)}};
    }
    return j;
  }
  const auto& u = std::get<InterpolationUnknown>(r);
  return json{{"verdict", "unknown"},
              {"stage", u.stage},
              {"entailment", to_json(u.entailment)},
              {"candidates", u.candidates},
              {"candidates_passing_filter", u.candidates_passing_filter},
              {"bounds",
               {{"proof_depth", u.bounds.proof_depth},
                {"cand_depth", u.bounds.cand_depth},
                {"model_size", u.bounds.model_size}}}};
}

inline json to_json(const JonssonReport& r) {
  return json{{"carrier_size", r.carrier_size},
              {"filters", detail::masks(r.filters)},
              {"pullback_size", r.pullback_size},
              {"bijection", r.bijection},
              {"order_reversing_iso", r.order_reversing_iso},
              {"is_lattice", r.is_lattice},
              {"superamalgam", r.superamalgam},
              {"failures", r.failures},
              {"verdict", r.pass ? "pass" : "fail"}};
}

}  // namespace wpml::io
