#pragma once

#include "coxkit/extension.hpp"

#include <string>
#include <vector>

namespace coxkit {

enum class Status { Pass, Fail, Skipped };
const char* to_string(Status s);

struct CheckEntry {
  std::string name;
  Status status = Status::Pass;
  std::string arithmetic;
  Verdict verdict;
  double seconds = 0.0;
};

/// One entry per axiom/lemma check, in proof-dependency order:
/// algebra_closure, classification, inclusion_monotonicity, decomposability,
/// negation, composition_monotonicity, cancellativity, identity,
/// constrained_associativity, extension, unconstrained_associativity,
/// repeated_event_convergence. Degenerate and trivial models end with
/// direct_embedding instead of the lemma chain.
struct CheckReport {
  Classification classification = Classification::General;
  std::vector<CheckEntry> entries;
  std::uint64_t sample_seed = 0;

  bool all_pass() const;
  const CheckEntry* find(const std::string& name) const;
  /// First failing entry, if any.
  const CheckEntry* first_failure() const;
  /// Stable field order; timings only when requested.
  Json to_json(bool timing = false) const;
};

CheckReport run_suite(const PlausibilityModel& model, const CheckConfig& config = {});

}  // namespace coxkit
