#pragma once

#include "coxkit/event_algebra.hpp"
#include "coxkit/operations.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace coxkit {

inline constexpr double kDefaultTolerance = 1e-9;

/// Index into PlausibilityModel::range(); range indices order like values.
using ValueId = std::uint32_t;
inline constexpr ValueId kNoValue = UINT32_MAX;

/// The raw assignment P(A|B) over a materialized event algebra, for every A
/// and every nonempty B. Values are deduplicated into a sorted range; float
/// values closer than the tolerance are identified.
class PlausibilityModel {
 public:
  using Assignment = std::function<PValue(std::size_t of, std::size_t given)>;

  PlausibilityModel(EventAlgebra algebra, const Assignment& assign,
                    std::shared_ptr<const Operations> operations = nullptr, double tol = kDefaultTolerance);

  const EventAlgebra& algebra() const noexcept { return algebra_; }
  std::size_t event_count() const noexcept { return masks_.size(); }
  const Event& event(std::size_t i) const { return algebra_.events()[i]; }
  std::size_t empty_event() const noexcept { return 0; }
  std::size_t full_event() const noexcept { return masks_.size() - 1; }

  /// Sorted, deduplicated set of table values.
  const std::vector<PValue>& range() const noexcept { return range_; }
  ValueId id(std::size_t of, std::size_t given) const { return table_[of * masks_.size() + given]; }
  const PValue& value(std::size_t of, std::size_t given) const { return range_[id(of, given)]; }
  std::optional<ValueId> find_value(const PValue& v) const;

  /// True iff every table value is an exact rational.
  bool exact() const noexcept { return exact_; }
  double tolerance() const noexcept { return tol_; }
  const char* arithmetic() const noexcept { return exact_ ? "exact" : "float64"; }

  std::size_t intersect(std::size_t a, std::size_t b) const { return index_of(masks_[a] & masks_[b]); }
  std::size_t unite(std::size_t a, std::size_t b) const { return index_of(masks_[a] | masks_[b]); }
  std::size_t complement(std::size_t a) const { return index_of(full_mask_ & ~masks_[a]); }
  bool is_empty(std::size_t a) const { return masks_[a] == 0; }
  bool subset(std::size_t a, std::size_t b) const { return (masks_[a] & ~masks_[b]) == 0; }
  bool disjoint(std::size_t a, std::size_t b) const { return (masks_[a] & masks_[b]) == 0; }
  std::uint64_t mask(std::size_t a) const { return masks_[a]; }
  std::size_t index_of(std::uint64_t mask) const;

  /// Closed-form or tabulated ∘ and N, when known.
  const Operations* operations() const noexcept { return operations_.get(); }
  std::shared_ptr<const Operations> operations_ptr() const noexcept { return operations_; }

  /// Copy with P(of|given) replaced.
  PlausibilityModel with_value(std::size_t of, std::size_t given, const PValue& v) const;
  PlausibilityModel with_operations(std::shared_ptr<const Operations> ops) const;

  /// Human-readable event, e.g. "{1,2}".
  std::string describe(std::size_t event) const;

 private:
  EventAlgebra algebra_;
  std::vector<std::uint64_t> masks_;
  std::uint64_t full_mask_ = 0;
  bool power_set_ = false;
  std::vector<ValueId> table_;
  std::vector<PValue> range_;
  bool exact_ = true;
  double tol_;
  std::shared_ptr<const Operations> operations_;
};

/// (A, B, C) event indices witnessing P(A∩B|C) = P(A|C) ∘ P(B|A∩C).
struct Triple {
  std::size_t a = 0, b = 0, c = 0;
};

/// Observed partial ∘ over range ids, each entry with its first witness.
class CompositionTable {
 public:
  struct Entry {
    ValueId z = kNoValue;
    Triple witness;
    std::size_t witnesses = 0;
  };

  explicit CompositionTable(std::size_t range_size = 0) : range_size_(range_size) {}
  std::optional<ValueId> lookup(ValueId x, ValueId y) const;
  const Entry* entry(ValueId x, ValueId y) const;
  Entry& slot(ValueId x, ValueId y) { return entries_[key(x, y)]; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t range_size() const noexcept { return range_size_; }
  /// Entries sorted by (x, y).
  std::vector<std::pair<std::pair<ValueId, ValueId>, Entry>> sorted() const;

 private:
  static std::uint64_t key(ValueId x, ValueId y) { return (std::uint64_t{x} << 32) | y; }
  std::size_t range_size_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

/// Two witnesses mapping the same argument(s) to different values. For
/// conflicts against the model's declared operations, `second` is unset and
/// `expected` holds the declared value.
struct Conflict {
  ValueId x = kNoValue, y = kNoValue;
  ValueId z_first = kNoValue, z_second = kNoValue;
  Triple first;
  std::optional<Triple> second;
  std::optional<PValue> expected;
  std::string describe(const PlausibilityModel& model, bool composition) const;
};

struct CompositionInference {
  CompositionTable table;
  std::vector<Conflict> conflicts;  // first few, in enumeration order
  std::size_t triples = 0;
  bool sampled = false;
  bool ok() const noexcept { return conflicts.empty(); }
};

/// Records (P(A|C), P(B|A∩C)) → P(A∩B|C) over all triples with C ≠ ∅ and
/// A∩C ≠ ∅, enumerated in index order. Enumeration beyond `triple_budget`
/// falls back to a seeded sample.
CompositionInference infer_composition(const PlausibilityModel& model, std::size_t triple_budget = 50'000'000,
                                       std::uint64_t seed = 0x5eed);

class NegationMap {
 public:
  explicit NegationMap(std::size_t range_size = 0) : image_(range_size, kNoValue), witness_(range_size) {}
  std::optional<ValueId> lookup(ValueId x) const;
  std::pair<std::size_t, std::size_t> witness(ValueId x) const { return witness_[x]; }
  void set(ValueId x, ValueId nx, std::pair<std::size_t, std::size_t> w) {
    image_[x] = nx;
    witness_[x] = w;
  }
  std::size_t range_size() const noexcept { return image_.size(); }

 private:
  std::vector<ValueId> image_;
  std::vector<std::pair<std::size_t, std::size_t>> witness_;
};

struct NegationInference {
  NegationMap map;
  std::vector<Conflict> conflicts;  // Triple{a, b, 0} holds the pair (A, B)
  bool ok() const noexcept { return conflicts.empty(); }
};

/// Records P(A|B) → P(Aᶜ|B) over all pairs.
NegationInference infer_negation(const PlausibilityModel& model);

enum class Classification { Degenerate, Trivial, General };
const char* to_string(Classification c);

/// Degenerate: fewer than 4 events. Trivial: no P(∅|B) < P(A|B) < P(Ω|B).
Classification classify(const PlausibilityModel& model);

/// Some (A, B) with P(∅|B) < P(A|B) < P(Ω|B), first in index order.
std::optional<std::pair<std::size_t, std::size_t>> intermediate_pair(const PlausibilityModel& model);

}  // namespace coxkit
