#include "coxkit/event_algebra.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

namespace coxkit {

AtomSpace::AtomSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(ErrorKind::InvalidInput, "atom space must contain at least one atom");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw Error(ErrorKind::InvalidInput, "duplicate atom label '" + l + "'");
}

std::optional<std::size_t> AtomSpace::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

AtomSpace AtomSpace::numbered(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return AtomSpace(std::move(labels));
}

Event Event::full(std::size_t universe) {
  Event e(universe);
  for (std::size_t i = 0; i < universe; ++i) e.insert(i);
  return e;
}

Event Event::from_mask(std::size_t universe, std::uint64_t mask) {
  Event e(universe);
  if (!e.words_.empty()) e.words_[0] = universe >= 64 ? mask : mask & ((std::uint64_t{1} << universe) - 1);
  return e;
}

Event Event::singleton(std::size_t universe, std::size_t atom) {
  Event e(universe);
  e.insert(atom);
  return e;
}

bool Event::is_empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Event::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Event::subset_of(const Event& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

bool Event::intersects(const Event& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

std::vector<std::size_t> Event::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < universe_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

Event Event::complement() const {
  Event e(universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) e.words_[i] = ~words_[i];
  if (universe_ % 64) e.words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  return e;
}

Event Event::operator&(const Event& other) const {
  Event e(universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) e.words_[i] = words_[i] & other.words_[i];
  return e;
}

Event Event::operator|(const Event& other) const {
  Event e(universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) e.words_[i] = words_[i] | other.words_[i];
  return e;
}

std::size_t Event::hash() const noexcept {
  std::size_t h = universe_ * 0x9e3779b97f4a7c15ull;
  for (auto w : words_) h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

ClosureVerdict verify_algebra_closure(const AtomSpace& space, std::span<const Event> events) {
  ClosureVerdict v;
  std::unordered_map<Event, std::size_t, EventHash> index;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].universe() != space.size()) {
      v.ok = false;
      v.message = "event does not belong to the atom space";
      v.first = i;
      return v;
    }
    index.emplace(events[i], i);
  }
  if (!index.contains(Event::empty(space.size()))) {
    v.ok = false;
    v.message = "empty event missing";
    return v;
  }
  if (!index.contains(Event::full(space.size()))) {
    v.ok = false;
    v.message = "whole space missing";
    return v;
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!index.contains(events[i].complement())) {
      v.ok = false;
      v.message = "complement missing";
      v.first = i;
      return v;
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (!index.contains(events[i] | events[j])) {
        v.ok = false;
        v.message = "union missing";
        v.first = i;
        v.second = j;
        return v;
      }
    }
  }
  return v;
}

EventAlgebra::EventAlgebra(std::shared_ptr<const AtomSpace> space, std::vector<Event> blocks,
                           std::size_t cap)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end(), [](const Event& a, const Event& b) {
    return a.members().front() < b.members().front();
  });
  if (blocks_.size() > cap) return;
  if (space_->size() > 64)
    throw Error(ErrorKind::CapExceeded, "materialized algebras are limited to 64 atoms");
  const std::size_t n = std::size_t{1} << blocks_.size();
  events_.reserve(n);
  for (std::size_t bits = 0; bits < n; ++bits) {
    Event e(space_->size());
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if ((bits >> b) & 1u) e = e | blocks_[b];
    events_.push_back(std::move(e));
  }
  std::sort(events_.begin(), events_.end(),
            [](const Event& a, const Event& b) { return a.mask() < b.mask(); });
  masks_.reserve(n);
  for (const auto& e : events_) masks_.push_back(e.mask());
}

EventAlgebra EventAlgebra::from_blocks(std::shared_ptr<const AtomSpace> space, std::vector<Event> blocks,
                                       std::size_t enumeration_cap) {
  Event seen(space->size());
  for (const auto& b : blocks) {
    if (b.universe() != space->size() || b.is_empty() || seen.intersects(b))
      throw Error(ErrorKind::InvalidInput, "blocks must be nonempty, disjoint events of the space");
    seen = seen | b;
  }
  if (seen != Event::full(space->size()))
    throw Error(ErrorKind::InvalidInput, "blocks must cover the space");
  return EventAlgebra(std::move(space), std::move(blocks), enumeration_cap);
}

EventAlgebra EventAlgebra::from_events(std::shared_ptr<const AtomSpace> space, std::vector<Event> events,
                                       std::size_t enumeration_cap) {
  const auto verdict = verify_algebra_closure(*space, events);
  if (!verdict.ok) throw Error(ErrorKind::InvalidInput, "event collection is not an algebra: " + verdict.message);
  // Block of atom i: intersection of every event containing i.
  std::vector<Event> blocks;
  Event covered(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) {
    if (covered.contains(i)) continue;
    Event block = Event::full(space->size());
    for (const auto& e : events)
      if (e.contains(i)) block = block & e;
    covered = covered | block;
    blocks.push_back(std::move(block));
  }
  return EventAlgebra(std::move(space), std::move(blocks), enumeration_cap);
}

const std::vector<Event>& EventAlgebra::events() const {
  if (!materialized()) throw Error(ErrorKind::CapExceeded, "algebra is not materialized");
  return events_;
}

std::size_t EventAlgebra::event_count() const noexcept {
  if (blocks_.size() >= 64) return SIZE_MAX;
  return std::size_t{1} << blocks_.size();
}

bool EventAlgebra::contains(const Event& e) const {
  if (e.universe() != space_->size()) return false;
  for (const auto& b : blocks_) {
    const Event inter = b & e;
    if (!inter.is_empty() && inter != b) return false;
  }
  return true;
}

std::optional<std::size_t> EventAlgebra::index_of_mask(std::uint64_t mask) const {
  auto it = std::lower_bound(masks_.begin(), masks_.end(), mask);
  if (it == masks_.end() || *it != mask) return std::nullopt;
  return static_cast<std::size_t>(it - masks_.begin());
}

std::optional<std::size_t> EventAlgebra::index_of(const Event& e) const {
  if (!materialized() || e.universe() != space_->size()) return std::nullopt;
  return index_of_mask(e.mask());
}

EventAlgebra build_power_algebra(std::shared_ptr<const AtomSpace> space, std::size_t enumeration_cap) {
  if (space->size() > enumeration_cap)
    throw Error(ErrorKind::CapExceeded, "power set over " + std::to_string(space->size()) +
                                            " atoms exceeds enumeration cap " + std::to_string(enumeration_cap));
  std::vector<Event> blocks;
  for (std::size_t i = 0; i < space->size(); ++i) blocks.push_back(Event::singleton(space->size(), i));
  return EventAlgebra::from_blocks(std::move(space), std::move(blocks), enumeration_cap);
}

std::string product_label(std::span<const std::string> factors) {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += "⊗";
    out += factors[i];
  }
  return out;
}

EventAlgebra product_algebra(const EventAlgebra& first, const EventAlgebra& second, std::size_t atom_cap,
                             std::size_t enumeration_cap) {
  const std::size_t n1 = first.space().size();
  const std::size_t n2 = second.space().size();
  if (n1 * n2 > atom_cap)
    throw Error(ErrorKind::CapExceeded, "product has " + std::to_string(n1 * n2) + " atoms, cap is " +
                                            std::to_string(atom_cap));
  std::vector<std::string> labels;
  labels.reserve(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const std::string parts[2] = {first.space().label(i), second.space().label(j)};
      labels.push_back(product_label(parts));
    }
  auto space = std::make_shared<const AtomSpace>(std::move(labels));
  // The rectangle algebra is generated by products of blocks.
  std::vector<Event> blocks;
  for (const auto& b1 : first.blocks())
    for (const auto& b2 : second.blocks()) {
      Event e(n1 * n2);
      for (auto i : b1.members())
        for (auto j : b2.members()) e.insert(i * n2 + j);
      blocks.push_back(std::move(e));
    }
  return EventAlgebra::from_blocks(std::move(space), std::move(blocks), enumeration_cap);
}

}  // namespace coxkit
