#include "coxkit/plausibility.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace coxkit {

PlausibilityModel::PlausibilityModel(EventAlgebra algebra, const Assignment& assign,
                                     std::shared_ptr<const Operations> operations, double tol)
    : algebra_(std::move(algebra)), tol_(tol), operations_(std::move(operations)) {
  if (!algebra_.materialized())
    throw Error(ErrorKind::CapExceeded, "plausibility tables need a materialized algebra");
  for (const auto& e : algebra_.events()) masks_.push_back(e.mask());
  full_mask_ = masks_.back();
  power_set_ = algebra_.is_power_set();

  const std::size_t n = masks_.size();
  std::vector<PValue> raw;
  raw.reserve(n * (n - 1));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 1; b < n; ++b) {
      raw.push_back(assign(a, b));
      if (!raw.back().is_exact()) exact_ = false;
    }

  std::vector<std::uint32_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
    return compare(raw[i], raw[j]) == std::partial_ordering::less;
  });
  std::vector<ValueId> ids(raw.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const PValue& v = raw[order[k]];
    const bool merge = !range_.empty() &&
                       (exact_ ? compare(range_.back(), v) == std::partial_ordering::equivalent
                               : v.approx() - range_.back().approx() <= tol_);
    if (!merge) range_.push_back(v);
    ids[order[k]] = static_cast<ValueId>(range_.size() - 1);
  }

  table_.assign(n * n, kNoValue);
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 1; b < n; ++b) table_[a * n + b] = ids[k++];
}

std::size_t PlausibilityModel::index_of(std::uint64_t mask) const {
  if (power_set_) return static_cast<std::size_t>(mask);
  const auto idx = algebra_.index_of_mask(mask);
  if (!idx) throw Error(ErrorKind::InvalidInput, "event outside the algebra");
  return *idx;
}

std::optional<ValueId> PlausibilityModel::find_value(const PValue& v) const {
  auto it = std::lower_bound(range_.begin(), range_.end(), v, [&](const PValue& a, const PValue& b) {
    if (!exact_ || !b.is_exact()) return a.approx() < b.approx() - tol_;
    return compare(a, b) == std::partial_ordering::less;
  });
  if (it != range_.end() && same_value(*it, v, exact_ && v.is_exact() ? 0.0 : tol_))
    return static_cast<ValueId>(it - range_.begin());
  return std::nullopt;
}

PlausibilityModel PlausibilityModel::with_value(std::size_t of, std::size_t given, const PValue& v) const {
  return PlausibilityModel(
      algebra_, [&](std::size_t a, std::size_t b) { return (a == of && b == given) ? v : value(a, b); },
      operations_, tol_);
}

PlausibilityModel PlausibilityModel::with_operations(std::shared_ptr<const Operations> ops) const {
  PlausibilityModel copy = *this;
  copy.operations_ = std::move(ops);
  return copy;
}

std::string PlausibilityModel::describe(std::size_t event) const {
  std::string out = "{";
  bool first = true;
  for (auto i : algebra_.events()[event].members()) {
    if (!first) out += ",";
    out += algebra_.space().label(i);
    first = false;
  }
  return out + "}";
}

std::optional<ValueId> CompositionTable::lookup(ValueId x, ValueId y) const {
  auto it = entries_.find(key(x, y));
  if (it == entries_.end()) return std::nullopt;
  return it->second.z;
}

const CompositionTable::Entry* CompositionTable::entry(ValueId x, ValueId y) const {
  auto it = entries_.find(key(x, y));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::pair<ValueId, ValueId>, CompositionTable::Entry>> CompositionTable::sorted() const {
  std::vector<std::pair<std::pair<ValueId, ValueId>, Entry>> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_)
    out.push_back({{static_cast<ValueId>(k >> 32), static_cast<ValueId>(k & 0xffffffffu)}, e});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string Conflict::describe(const PlausibilityModel& m, bool composition) const {
  const auto& r = m.range();
  std::string out;
  if (composition) {
    out = "(" + r[x].str() + ", " + r[y].str() + ") -> " + r[z_first].str() + " via A=" + m.describe(first.a) +
          " B=" + m.describe(first.b) + " C=" + m.describe(first.c);
    if (second)
      out += ", but -> " + r[z_second].str() + " via A=" + m.describe(second->a) + " B=" + m.describe(second->b) +
             " C=" + m.describe(second->c);
  } else {
    out = r[x].str() + " -> " + r[z_first].str() + " via A=" + m.describe(first.a) + " B=" + m.describe(first.b);
    if (second)
      out += ", but -> " + r[z_second].str() + " via A=" + m.describe(second->a) + " B=" + m.describe(second->b);
  }
  if (expected) out += ", declared operation gives " + expected->str();
  return out;
}

namespace {

constexpr std::size_t kMaxConflicts = 8;

void cross_check_composition(const PlausibilityModel& model, CompositionInference& out) {
  const Operations* ops = model.operations();
  if (!ops) return;
  for (const auto& [xy, e] : out.table.sorted()) {
    if (out.conflicts.size() >= kMaxConflicts) return;
    const auto declared = ops->compose(model.range()[xy.first], model.range()[xy.second]);
    if (declared && !same_value(*declared, model.range()[e.z], model.exact() ? 0.0 : model.tolerance())) {
      Conflict c{xy.first, xy.second, e.z, kNoValue, e.witness, std::nullopt, declared};
      out.conflicts.push_back(c);
    }
  }
}

}  // namespace

CompositionInference infer_composition(const PlausibilityModel& model, std::size_t triple_budget,
                                       std::uint64_t seed) {
  const std::size_t n = model.event_count();
  CompositionInference out{CompositionTable(model.range().size()), {}, 0, false};

  auto record = [&](std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t ac = model.intersect(a, c);
    if (model.is_empty(ac)) return;
    const ValueId x = model.id(a, c);
    const ValueId y = model.id(b, ac);
    const ValueId z = model.id(model.intersect(a, b), c);
    ++out.triples;
    auto& slot = out.table.slot(x, y);
    if (slot.witnesses == 0) {
      slot.z = z;
      slot.witness = {a, b, c};
    } else if (slot.z != z && out.conflicts.size() < kMaxConflicts) {
      out.conflicts.push_back(Conflict{x, y, slot.z, z, slot.witness, Triple{a, b, c}, std::nullopt});
    }
    ++slot.witnesses;
  };

  const double total = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n - 1);
  if (total <= static_cast<double>(triple_budget)) {
    for (std::size_t c = 1; c < n; ++c)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) record(a, b, c);
  } else {
    out.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> any(0, n - 1), nonempty(1, n - 1);
    for (std::size_t k = 0; k < triple_budget; ++k) record(any(rng), any(rng), nonempty(rng));
  }
  cross_check_composition(model, out);
  return out;
}

std::optional<ValueId> NegationMap::lookup(ValueId x) const {
  if (x >= image_.size() || image_[x] == kNoValue) return std::nullopt;
  return image_[x];
}

NegationInference infer_negation(const PlausibilityModel& model) {
  const std::size_t n = model.event_count();
  NegationInference out{NegationMap(model.range().size()), {}};
  for (std::size_t b = 1; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      const ValueId x = model.id(a, b);
      const ValueId nx = model.id(model.complement(a), b);
      if (auto prev = out.map.lookup(x)) {
        if (*prev != nx && out.conflicts.size() < kMaxConflicts) {
          const auto [pa, pb] = out.map.witness(x);
          out.conflicts.push_back(Conflict{x, kNoValue, *prev, nx, Triple{pa, pb, 0}, Triple{a, b, 0}, std::nullopt});
        }
      } else {
        out.map.set(x, nx, {a, b});
      }
    }
  if (const Operations* ops = model.operations()) {
    for (ValueId x = 0; x < out.map.range_size(); ++x) {
      const auto nx = out.map.lookup(x);
      if (!nx || out.conflicts.size() >= kMaxConflicts) continue;
      const auto declared = ops->negate(model.range()[x]);
      if (declared && !same_value(*declared, model.range()[*nx], model.exact() ? 0.0 : model.tolerance())) {
        const auto [pa, pb] = out.map.witness(x);
        out.conflicts.push_back(Conflict{x, kNoValue, *nx, kNoValue, Triple{pa, pb, 0}, std::nullopt, declared});
      }
    }
  }
  return out;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Degenerate: return "degenerate";
    case Classification::Trivial: return "trivial";
    case Classification::General: return "general";
  }
  return "general";
}

std::optional<std::pair<std::size_t, std::size_t>> intermediate_pair(const PlausibilityModel& model) {
  const std::size_t n = model.event_count();
  for (std::size_t b = 1; b < n; ++b) {
    const ValueId lo = model.id(model.empty_event(), b);
    const ValueId hi = model.id(model.full_event(), b);
    for (std::size_t a = 0; a < n; ++a) {
      const ValueId v = model.id(a, b);
      if (lo < v && v < hi) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

Classification classify(const PlausibilityModel& model) {
  if (model.event_count() < 4) return Classification::Degenerate;
  return intermediate_pair(model) ? Classification::General : Classification::Trivial;
}

}  // namespace coxkit
