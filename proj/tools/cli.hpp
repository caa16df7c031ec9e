// The wpml command-line tool. run_cli is the whole program; main() only
// forwards argv, so the tests drive it in-process.

#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "wpml/random.hpp"

namespace wpml::cli {

using io::json;

enum Exit : int { kOk = 0, kFail = 1, kIo = 2, kParse = 3, kResource = 4 };

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Parse: return kParse;
    case ErrorKind::ResourceBound: return kResource;
    default: return kFail;
  }
}

/// Documented caps for `generate`.
inline constexpr std::size_t kMaxGenerateSize = 16;
inline constexpr std::size_t kMaxGenerateVFormation = 6;

namespace detail {

inline std::vector<Axiom> parse_axioms(const std::string& s) {
  std::vector<Axiom> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_axiom(tok));
  return out;
}

struct Validated {
  bool valid = true;
  json diagnostic;
};

inline Validated validate_payload(const std::string& kind, const json& p) {
  Validated v;
  auto fail = [&](json d) {
    v.valid = false;
    v.diagnostic = std::move(d);
  };
  try {
    if (kind == "lattice" || kind == "modal_lattice") {
      auto A = io::lattice_from_json(p);
      auto bad = check_modal_identities(A);
      if (!bad.empty()) {
        fail(json{{"identity", bad[0].identity}, {"a", bad[0].a}, {"b", bad[0].b}});
      }
    } else if (kind == "modal_lframe") {
      auto F = io::modal_lframe_from_json(p);
      if (auto bad = modal_lframe_violation(F)) fail(io::to_json(*bad));
    } else if (kind == "vformation") {
      validate_vformation(io::vformation_from_json(p));
    } else {
      throw Error(ErrorKind::Parse, "unknown kind '" + kind + "'");
    }
  } catch (const LatticeError& e) {
    fail(json{{"defect", to_string(e.defect())}, {"witness", e.witness()}, {"message", e.what()}});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation) throw;
    fail(json{{"message", e.what()}});
  }
  return v;
}

struct FuzzOutcome {
  bool pass = true;
  std::size_t size = 0;  // histogram key
  std::string detail;
};

inline FuzzOutcome fuzz_one(const std::string& target, std::uint64_t seed, std::uint64_t i) {
  Rng rng(seed, i);
  FuzzOutcome o;
  if (target == "superamalgamation") {
    auto v = random_vformation(rng);
    auto S = superamalgamate(v);
    o.pass = S.report.pass && S.report.claim_holds;
    o.size = S.report.pullback_size;
    if (!o.pass) o.detail = io::to_json(v).dump();
  } else if (target == "correspondence") {
    auto F = random_modal_lframe(rng, rng.range(1, 4));
    auto T = fil_l(fil_f(F).algebra).frame;
    o.size = F.size();
    for (const auto* G : {&F, &T})
      for (Axiom a : all_axioms()) {
        auto r = correspondence_check(*G, a);
        if (!r.consistent) {
          o.pass = false;
          o.detail = std::string(to_string(a)) + " on " + io::to_json(*G).dump();
        }
      }
  } else if (target == "duality") {
    auto F = random_modal_lframe(rng, rng.range(1, 5));
    auto A = fil_f(F).algebra;
    o.size = A.size();
    try {
      round_trip_iso(A);
      if (!frame_round_trip(fil_l(A).frame)) {
        o.pass = false;
        o.detail = "dual space does not round-trip";
      }
    } catch (const Error& e) {
      o.pass = false;
      o.detail = e.what();
    }
  } else if (target == "jonsson") {
    auto v = random_inclusion_span(rng);
    auto r = jonsson_filters(v);
    o.pass = r.pass;
    o.size = r.pullback_size;
    if (!o.pass) o.detail = io::to_json(v).dump();
  }
  return o;
}

}  // namespace detail

/// Runs one fuzz sweep and returns the report; timings only when asked,
/// since they would break byte-identical reruns.
inline json fuzz_report(const std::string& target, std::uint64_t seed, std::uint64_t count, bool timings) {
  json failures = json::array();
  std::map<std::size_t, std::size_t> hist;
  json times = json::array();
  std::uint64_t passed = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    auto o = detail::fuzz_one(target, seed, i);
    const auto t1 = std::chrono::steady_clock::now();
    if (timings) times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    ++hist[o.size];
    if (o.pass) {
      ++passed;
    } else {
      failures.push_back(json{{"instance", i}, {"detail", o.detail}});
    }
  }
  json h = json::object();
  for (auto [k, c] : hist) h[std::to_string(k)] = c;
  json r{{"target", target}, {"seed", seed},          {"count", count},          {"passed", passed},
         {"failed", count - passed}, {"failures", failures}, {"size_histogram", h}};
  if (timings) r["timings_ms"] = times;
  return r;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wpml: finite-model workbench for weak positive modal logic"};
  app.require_subcommand(1);
  bool json_flag = false;
  app.add_flag("--json", json_flag, "JSON on stdout (always on)");

  std::string path, out_path, direction = "auto", kind, target, axiom_s, axioms_s, phi_s, psi_s;
  bool round_trip = false, timings = false, distributive = false;
  std::uint64_t seed = 1, count = 1;
  std::size_t size = 4;
  InterpolationBounds bounds;

  auto* validate = app.add_subcommand("validate", "check a JSON artifact");
  validate->add_option("path", path, "input file")->required();

  auto* dualize = app.add_subcommand("dualize", "algebra to space or space to algebra");
  dualize->add_option("path", path, "input file")->required();
  dualize->add_option("--direction", direction, "auto, to-space or to-algebra")
      ->check(CLI::IsMember({"auto", "to-space", "to-algebra"}));
  dualize->add_flag("--round-trip", round_trip, "re-import and check isomorphism");

  auto* fuzz = app.add_subcommand("fuzz", "seeded property sweep");
  fuzz->add_option("target", target, "superamalgamation, correspondence, duality or jonsson")
      ->required()
      ->check(CLI::IsMember({"superamalgamation", "correspondence", "duality", "jonsson"}));
  fuzz->add_option("--seed", seed, "seed");
  fuzz->add_option("--count", count, "instances")->check(CLI::PositiveNumber);
  fuzz->add_flag("--timings", timings, "add per-instance timings (not reproducible)");

  auto* generate = app.add_subcommand("generate", "seeded random object");
  generate->add_option("kind", kind, "lattice, modal_lattice, modal_lframe or vformation")
      ->required()
      ->check(CLI::IsMember({"lattice", "modal_lattice", "modal_lframe", "vformation"}));
  generate->add_option("--seed", seed, "seed");
  generate->add_option("--size", size, "size (algebras of a vformation: at most this)")->check(CLI::PositiveNumber);

  auto* amalgamate = app.add_subcommand("amalgamate", "dual pullback superamalgamation");
  amalgamate->add_option("--vformation", path, "V-formation file")->required();
  amalgamate->add_option("--out", out_path, "write the report here too");

  auto* correspond = app.add_subcommand("correspond", "axiom / frame-condition correspondence");
  correspond->add_option("--frame", path, "frame file")->required();
  correspond->add_option("--axiom", axiom_s, "T, 4, B, 5 or .2")->required();

  auto* interpolate = app.add_subcommand("interpolate", "Craig interpolant search");
  interpolate->add_option("phi", phi_s)->required();
  interpolate->add_option("psi", psi_s)->required();
  interpolate->add_option("--axioms", axioms_s, "comma-separated subset of T,4,B,5,.2");
  interpolate->add_option("--proof-depth", bounds.proof_depth);
  interpolate->add_option("--cand-depth", bounds.cand_depth);
  interpolate->add_option("--model-size", bounds.model_size);
  interpolate->add_flag("--distributive", distributive, "modality-free, over distributive lattices");

  std::size_t proof_depth = 8, model_size = 4;
  auto* entail = app.add_subcommand("entail", "decide phi |- psi within bounds");
  entail->add_option("phi", phi_s)->required();
  entail->add_option("psi", psi_s)->required();
  entail->add_option("--axioms", axioms_s, "comma-separated subset of T,4,B,5,.2");
  entail->add_option("--proof-depth", proof_depth);
  entail->add_option("--model-size", model_size);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return kParse;
  }

  auto emit = [&](const std::string& k, json payload) { out << io::envelope(k, std::move(payload)).dump(2) << "\n"; };

  try {
    if (*validate) {
      auto [k, p] = io::unwrap(io::read_file(path));
      auto v = detail::validate_payload(k, p);
      json r{{"kind", k}, {"valid", v.valid}};
      if (!v.valid) {
        r["violation"] = v.diagnostic;
        err << "invalid " << k << ": " << v.diagnostic.dump() << "\n";
      }
      emit("validation", r);
      return v.valid ? kOk : kFail;
    }
    if (*dualize) {
      auto [k, p] = io::unwrap(io::read_file(path));
      const bool to_space = direction == "to-space" || (direction == "auto" && k != "modal_lframe");
      if (to_space) {
        auto A = io::lattice_from_json(p);
        require_modal_lattice(A);
        auto S = fil_l(A);
        json j = io::to_json(S);
        if (round_trip) {
          bool iso = true;
          try {
            round_trip_iso(A);
          } catch (const Error&) {
            iso = false;
          }
          j["isomorphic"] = iso;
        }
        emit("modal_lframe", j);
        return round_trip && !j["isomorphic"].get<bool>() ? kFail : kOk;
      }
      auto F = io::modal_lframe_from_json(p);
      require_modal_lframe(F);
      auto A = fil_f(F);
      json j = io::to_json(A.algebra);
      if (round_trip) j["isomorphic"] = frame_round_trip(F).has_value();
      emit("modal_lattice", j);
      return round_trip && !j["isomorphic"].get<bool>() ? kFail : kOk;
    }
    if (*fuzz) {
      auto r = fuzz_report(target, seed, count, timings);
      emit("fuzz_report", r);
      return r["failed"].get<std::uint64_t>() == 0 ? kOk : kFail;
    }
    if (*generate) {
      const std::size_t cap = kind == "vformation" ? kMaxGenerateVFormation : kMaxGenerateSize;
      if (size > cap) {
        throw Error(ErrorKind::ResourceBound, "size " + std::to_string(size) + " exceeds the cap " +
                                                  std::to_string(cap) + " for " + kind);
      }
      Rng rng(seed);
      if (kind == "lattice") emit(kind, io::to_json(random_lattice(rng, size)));
      if (kind == "modal_lattice") emit(kind, io::to_json(random_modal_lattice(rng, size)));
      if (kind == "modal_lframe") emit(kind, io::to_json(random_modal_lframe(rng, size)));
      if (kind == "vformation") {
        VFormationBounds b{std::min<std::size_t>(4, size), size};
        emit(kind, io::to_json(random_vformation(rng, b)));
      }
      return kOk;
    }
    if (*amalgamate) {
      auto [k, p] = io::unwrap(io::read_file(path));
      if (k != "vformation") throw Error(ErrorKind::Parse, "expected a vformation, got " + k);
      auto v = io::vformation_from_json(p);
      auto S = superamalgamate(v);
      json r = io::to_json(S.report, v);
      if (!out_path.empty()) io::write_file(out_path, io::envelope("amalgam_report", r));
      emit("amalgam_report", r);
      return S.report.pass ? kOk : kFail;
    }
    if (*correspond) {
      auto [k, p] = io::unwrap(io::read_file(path));
      if (k != "modal_lframe") throw Error(ErrorKind::Parse, "expected a modal_lframe, got " + k);
      auto F = io::modal_lframe_from_json(p);
      require_modal_lframe(F);
      auto r = correspondence_check(F, parse_axiom(axiom_s), budget_from_env());
      emit("correspondence_report", io::to_json(r));
      return r.consistent ? kOk : kFail;
    }
    if (*interpolate) {
      const auto phi = parse_formula(phi_s), psi = parse_formula(psi_s);
      InterpolationResult r = distributive ? distributive_fragment_interpolant(phi, psi, bounds.proof_depth)
                                           : craig_interpolant(phi, psi, detail::parse_axioms(axioms_s), bounds);
      emit("interpolation_result", io::to_json(r));
      return std::holds_alternative<InterpolationUnknown>(r) ? kResource : kOk;
    }
    if (*entail) {
      const ConsequencePair goal{parse_formula(phi_s), parse_formula(psi_s)};
      auto v = decide_entailment(detail::parse_axioms(axioms_s), goal, proof_depth, model_size, budget_from_env());
      emit("entailment", io::to_json(v));
      return std::holds_alternative<Unknown>(v) ? kResource : kOk;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kOk;
}

}  // namespace wpml::cli
