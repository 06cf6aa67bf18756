#pragma once

#include "coxkit/extension.hpp"

#include <array>
#include <memory>
#include <optional>

namespace coxkit {

struct CounterexampleOptions {
  unsigned values = 4;  // |V|, V = {0, 1/(K−1), …, 1}
  std::uint64_t seed = 1;
  std::size_t max_atoms = 3;
  std::size_t node_budget = 2'000'000;
  double seconds = 60.0;
};

/// A finite structure that passes every base check (through constrained
/// associativity) whose monotone completion of ∘ over V is not associative
/// on unconstrained triples.
struct Counterexample {
  std::shared_ptr<const PlausibilityModel> model;  // carries the completed table
  std::vector<CompositionEntry> completion;        // full ∘ over V × V
  std::vector<NegationEntry> negation;
  Verdict unconstrained;  // failing verdict; events = {A, B, C, D}
  std::uint64_t seed = 0;
  unsigned values = 0;
  std::size_t nodes = 0;  // candidates examined
};

struct CounterexampleSearch {
  std::optional<Counterexample> found;
  std::size_t nodes = 0;
  /// True when every candidate up to max_atoms was examined.
  bool space_exhausted = false;
};

/// Seeded depth-first search over value assignments on power sets of 2..max_atoms
/// atoms, then over monotone completions of the unobserved ∘ cells. Throws
/// ExhaustedBudget when the node or time budget runs out first.
CounterexampleSearch search_counterexample(const CounterexampleOptions& options,
                                           const CheckConfig& config = {});

}  // namespace coxkit
