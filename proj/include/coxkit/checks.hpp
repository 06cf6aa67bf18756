#pragma once

#include "coxkit/plausibility.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace coxkit {

using Json = nlohmann::ordered_json;

/// Tunables shared by the checkers, the extension and the isomorphism.
struct CheckConfig {
  double tolerance = kDefaultTolerance;
  /// Quadruple/triple enumerations above this size are sampled.
  std::size_t enumeration_budget = 50'000'000;
  std::uint64_t sample_seed = 0x5eed;
  /// Samples per product-structure check.
  std::size_t extension_samples = 20'000;
  std::size_t i_max = 64;
  double convergence_tol = 1e-12;
  /// Densification mesh for the generator support grid.
  double mesh = 0.01;
  /// The generator is tabulated on dyadic rationals with this many halvings.
  unsigned dyadic_depth = 16;

  /// Default config with the tolerance taken from COXKIT_TOL when set.
  static CheckConfig from_environment();
};

/// Outcome of a single check. `events` and `values` carry a replayable
/// counterexample (fail) or witness (pass); their meaning is per check.
struct Verdict {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  bool sampled = false;
  std::string note;
  std::vector<std::size_t> events;
  std::vector<PValue> values;
  Json witness = Json::object();

  static Verdict failure(std::string note) {
    Verdict v;
    v.ok = false;
    v.note = std::move(note);
    return v;
  }
};

/// A ⊆ A′ ⇒ P(A|B) ≤ P(A′|B). Checked on covering pairs A′ = A ∪ block,
/// which implies the general case by transitivity. events = {A, A′, B}.
Verdict check_inclusion_monotonicity(const PlausibilityModel& model);

/// ∘ nondecreasing in each argument over all comparable observed pairs.
/// events = witness triples (A, B, C) of the two entries (6 indices).
Verdict check_composition_monotonicity(const CompositionTable& table, const PlausibilityModel& model);

/// x∘y = x∘z ⇒ y = z (and on the left), with the bottom value exempt.
/// events = witness triples of the two colliding entries (6 indices).
Verdict check_cancellativity(const CompositionTable& table, const PlausibilityModel& model);

/// Identity: P(Ω|B) constant (= e), P(∅|B) constant, e two-sided identity on
/// observed entries. values = {e, bottom}.
Verdict find_identity(const CompositionTable& table, const PlausibilityModel& model);

/// (z∘y)∘x = z∘(y∘x) for z = P(C|D), y = P(B|C∩D), x = P(A|B∩C∩D).
/// events = {A, B, C, D}; values = {x, y, z, lhs, rhs}.
Verdict check_associativity_constrained(const CompositionTable& table, const PlausibilityModel& model,
                                        const CheckConfig& config = {});

Json to_json(const Verdict& v);

}  // namespace coxkit
