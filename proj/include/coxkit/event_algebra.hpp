#pragma once

#include "coxkit/pvalue.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coxkit {

/// Default upper bound on the number of algebra atoms for which every event
/// is materialized (2^12 = 4096 events).
inline constexpr std::size_t kDefaultEnumerationCap = 12;
/// Default upper bound on the number of sample-space atoms a product may have.
inline constexpr std::size_t kDefaultProductAtomCap = 4096;

/// Finite sample space: an ordered list of distinct, opaque atom labels.
class AtomSpace {
 public:
  explicit AtomSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Labels "1" .. "n".
  static AtomSpace numbered(std::size_t n);

 private:
  std::vector<std::string> labels_;
};

/// Subset of an atom space as a bit-vector in atom order. Equality is
/// extensional: two events are equal iff they have the same members.
class Event {
 public:
  Event() = default;
  explicit Event(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static Event empty(std::size_t universe) { return Event(universe); }
  static Event full(std::size_t universe);
  static Event from_mask(std::size_t universe, std::uint64_t mask);
  static Event singleton(std::size_t universe, std::size_t atom);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(std::size_t atom) const { return (words_[atom / 64] >> (atom % 64)) & 1u; }
  void insert(std::size_t atom) { words_[atom / 64] |= std::uint64_t{1} << (atom % 64); }
  bool is_empty() const noexcept;
  std::size_t count() const noexcept;
  bool subset_of(const Event& other) const;
  bool intersects(const Event& other) const;
  std::vector<std::size_t> members() const;
  /// Low 64 bits; the whole event when universe() <= 64.
  std::uint64_t mask() const noexcept { return words_.empty() ? 0 : words_[0]; }

  Event complement() const;
  Event operator&(const Event& other) const;
  Event operator|(const Event& other) const;
  bool operator==(const Event& other) const = default;
  auto operator<=>(const Event& other) const {
    return std::lexicographical_compare_three_way(words_.rbegin(), words_.rend(),
                                                  other.words_.rbegin(), other.words_.rend());
  }

  std::size_t hash() const noexcept;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct EventHash {
  std::size_t operator()(const Event& e) const noexcept { return e.hash(); }
};

/// Outcome of a closure test over a candidate event collection.
struct ClosureVerdict {
  bool ok = true;
  std::string message;
  /// Indices into the candidate collection naming the violation; second is
  /// unset for single-event violations (missing complement).
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
};

/// Checks that the collection contains the empty set and the whole space and
/// is closed under complement and pairwise union.
ClosureVerdict verify_algebra_closure(const AtomSpace& space, std::span<const Event> events);

/// A finite algebra of events. Internally the algebra is described by its
/// partition into minimal nonempty events ("blocks"); an event belongs to the
/// algebra iff it is a union of blocks. Events are enumerated explicitly only
/// when the block count is within the enumeration cap.
class EventAlgebra {
 public:
  /// Validates closure, throws InvalidInput with the witness otherwise.
  static EventAlgebra from_events(std::shared_ptr<const AtomSpace> space, std::vector<Event> events,
                                  std::size_t enumeration_cap = kDefaultEnumerationCap);
  static EventAlgebra from_blocks(std::shared_ptr<const AtomSpace> space, std::vector<Event> blocks,
                                  std::size_t enumeration_cap = kDefaultEnumerationCap);

  const AtomSpace& space() const noexcept { return *space_; }
  std::shared_ptr<const AtomSpace> space_ptr() const noexcept { return space_; }
  const std::vector<Event>& blocks() const noexcept { return blocks_; }

  bool materialized() const noexcept { return !events_.empty(); }
  /// Enumerated events, sorted by bit pattern; requires materialized().
  const std::vector<Event>& events() const;
  /// Number of events (2^blocks); saturates at SIZE_MAX beyond 63 blocks.
  std::size_t event_count() const noexcept;
  bool nondegenerate() const noexcept { return blocks_.size() >= 2; }
  bool is_power_set() const noexcept { return blocks_.size() == space_->size(); }

  bool contains(const Event& e) const;
  /// Index of an event in events(); requires materialized().
  std::optional<std::size_t> index_of(const Event& e) const;
  /// Fast path when space().size() <= 64.
  std::optional<std::size_t> index_of_mask(std::uint64_t mask) const;

  std::size_t empty_index() const { return 0; }
  std::size_t full_index() const { return events_.size() - 1; }

 private:
  EventAlgebra(std::shared_ptr<const AtomSpace> space, std::vector<Event> blocks, std::size_t cap);

  std::shared_ptr<const AtomSpace> space_;
  std::vector<Event> blocks_;
  std::vector<Event> events_;
  std::vector<std::uint64_t> masks_;
};

/// Full power set of `space`. Throws CapExceeded above `enumeration_cap` atoms.
EventAlgebra build_power_algebra(std::shared_ptr<const AtomSpace> space,
                                 std::size_t enumeration_cap = kDefaultEnumerationCap);

/// Label of a product atom: factor labels joined with "⊗".
std::string product_label(std::span<const std::string> factors);

/// Algebra generated by all rectangles A x B on the Cartesian product of the
/// two atom spaces (row-major atom order). Throws CapExceeded when the product
/// has more than `atom_cap` atoms.
EventAlgebra product_algebra(const EventAlgebra& first, const EventAlgebra& second,
                             std::size_t atom_cap = kDefaultProductAtomCap,
                             std::size_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace coxkit
