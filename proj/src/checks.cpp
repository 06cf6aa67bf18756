#include "coxkit/checks.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

namespace coxkit {

CheckConfig CheckConfig::from_environment() {
  CheckConfig config;
  if (const char* tol = std::getenv("COXKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0' || !(v > 0.0))
      throw Error(ErrorKind::InvalidInput, std::string("COXKIT_TOL is not a positive number: ") + tol);
    config.tolerance = v;
  }
  return config;
}

Verdict check_inclusion_monotonicity(const PlausibilityModel& model) {
  Verdict v;
  const std::size_t n = model.event_count();
  const auto& blocks = model.algebra().blocks();
  for (std::size_t b = 1; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a)
      for (const auto& block : blocks) {
        if ((model.mask(a) & block.mask()) != 0) continue;
        const std::size_t bigger = model.index_of(model.mask(a) | block.mask());
        ++v.checked;
        if (model.id(a, b) > model.id(bigger, b)) {
          v.ok = false;
          v.events = {a, bigger, b};
          v.values = {model.value(a, b), model.value(bigger, b)};
          v.note = "P(" + model.describe(a) + "|" + model.describe(b) + ") = " + model.value(a, b).str() + " > P(" +
                   model.describe(bigger) + "|" + model.describe(b) + ") = " + model.value(bigger, b).str();
          return v;
        }
      }
  return v;
}

namespace {

using Entries = std::vector<std::pair<std::pair<ValueId, ValueId>, CompositionTable::Entry>>;

std::set<ValueId> bottom_values(const PlausibilityModel& model) {
  std::set<ValueId> out;
  for (std::size_t b = 1; b < model.event_count(); ++b) out.insert(model.id(model.empty_event(), b));
  return out;
}

void set_entry_witness(Verdict& v, const CompositionTable::Entry& e1, const CompositionTable::Entry& e2) {
  v.events = {e1.witness.a, e1.witness.b, e1.witness.c, e2.witness.a, e2.witness.b, e2.witness.c};
}

std::string entry_text(const PlausibilityModel& model, ValueId x, ValueId y, ValueId z) {
  return model.range()[x].str() + "∘" + model.range()[y].str() + " = " + model.range()[z].str();
}

}  // namespace

Verdict check_composition_monotonicity(const CompositionTable& table, const PlausibilityModel& model) {
  Verdict v;
  const Entries entries = table.sorted();
  const auto bottoms = bottom_values(model);
  std::size_t strict_pairs = 0;
  std::size_t strict_gaps = 0;

  // Pass 0 fixes the first argument, pass 1 the second.
  for (int pass = 0; pass < 2; ++pass) {
    std::map<ValueId, std::vector<std::pair<ValueId, const CompositionTable::Entry*>>> lines;
    for (const auto& [xy, e] : entries) {
      const ValueId fixed = pass == 0 ? xy.first : xy.second;
      const ValueId moving = pass == 0 ? xy.second : xy.first;
      lines[fixed].push_back({moving, &e});
    }
    for (auto& [fixed, line] : lines) {
      std::sort(line.begin(), line.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const auto& [m1, e1] = line[i];
        const auto& [m2, e2] = line[i + 1];
        ++v.checked;
        if (e1->z > e2->z) {
          v.ok = false;
          set_entry_witness(v, *e1, *e2);
          const ValueId x1 = pass == 0 ? fixed : m1, y1 = pass == 0 ? m1 : fixed;
          const ValueId x2 = pass == 0 ? fixed : m2, y2 = pass == 0 ? m2 : fixed;
          v.values = {model.range()[x1], model.range()[y1], model.range()[e1->z],
                      model.range()[x2], model.range()[y2], model.range()[e2->z]};
          v.note = "decreasing: " + entry_text(model, x1, y1, e1->z) + " but " + entry_text(model, x2, y2, e2->z);
          return v;
        }
        if (!bottoms.contains(fixed)) {
          if (e1->z < e2->z) ++strict_pairs;
          else ++strict_gaps;
        }
      }
    }
  }
  v.witness["strict_pairs"] = strict_pairs;
  v.witness["non_strict_pairs"] = strict_gaps;
  if (strict_pairs == 0)
    v.note = "no strictly increasing chain witnessed off the bottom value; strictness unverified";
  else if (strict_gaps > 0)
    v.note = "non-strict steps off the bottom value present; see cancellativity";
  return v;
}

Verdict check_cancellativity(const CompositionTable& table, const PlausibilityModel& model) {
  Verdict v;
  const Entries entries = table.sorted();
  const auto bottoms = bottom_values(model);
  for (int pass = 0; pass < 2; ++pass) {
    // (fixed, z) -> first entry producing it
    std::map<std::pair<ValueId, ValueId>, std::pair<ValueId, const CompositionTable::Entry*>> seen;
    for (const auto& [xy, e] : entries) {
      const ValueId fixed = pass == 0 ? xy.first : xy.second;
      const ValueId moving = pass == 0 ? xy.second : xy.first;
      if (bottoms.contains(fixed)) {
        ++v.skipped;
        continue;
      }
      ++v.checked;
      auto [it, inserted] = seen.emplace(std::pair{fixed, e.z}, std::pair{moving, &e});
      if (!inserted && it->second.first != moving) {
        v.ok = false;
        set_entry_witness(v, *it->second.second, e);
        const ValueId other = it->second.first;
        const ValueId x1 = pass == 0 ? fixed : other, y1 = pass == 0 ? other : fixed;
        const ValueId x2 = pass == 0 ? fixed : moving, y2 = pass == 0 ? moving : fixed;
        v.values = {model.range()[x1], model.range()[y1], model.range()[e.z],
                    model.range()[x2], model.range()[y2], model.range()[e.z]};
        v.note = "not cancellative: " + entry_text(model, x1, y1, e.z) + " and " + entry_text(model, x2, y2, e.z);
        return v;
      }
    }
  }
  if (v.skipped) v.note = std::to_string(v.skipped) + " entries with a bottom-valued fixed argument exempt";
  return v;
}

Verdict find_identity(const CompositionTable& table, const PlausibilityModel& model) {
  Verdict v;
  const std::size_t n = model.event_count();
  const ValueId e = model.id(model.full_event(), 1);
  const ValueId bottom = model.id(model.empty_event(), 1);
  for (std::size_t b = 2; b < n; ++b) {
    ++v.checked;
    if (model.id(model.full_event(), b) != e) {
      v.ok = false;
      v.events = {1, b};
      v.values = {model.value(model.full_event(), 1), model.value(model.full_event(), b)};
      v.note = "P(Ω|" + model.describe(1) + ") = " + v.values[0].str() + " differs from P(Ω|" + model.describe(b) +
               ") = " + v.values[1].str();
      return v;
    }
    if (model.id(model.empty_event(), b) != bottom) {
      v.ok = false;
      v.events = {1, b};
      v.values = {model.value(model.empty_event(), 1), model.value(model.empty_event(), b)};
      v.note = "P(∅|" + model.describe(1) + ") = " + v.values[0].str() + " differs from P(∅|" + model.describe(b) +
               ") = " + v.values[1].str();
      return v;
    }
  }
  // Two-sided identity on observed entries; collect every value that acts as
  // an identity wherever it is observed.
  std::map<ValueId, bool> candidate;
  for (const auto& [xy, entry] : table.sorted()) {
    const auto [x, y] = xy;
    auto left = candidate.try_emplace(x, true).first;
    left->second = left->second && entry.z == y;
    auto right = candidate.try_emplace(y, true).first;
    right->second = right->second && entry.z == x;
    if ((x == e && entry.z != y) || (y == e && entry.z != x)) {
      v.ok = false;
      v.events = {entry.witness.a, entry.witness.b, entry.witness.c};
      v.values = {model.range()[x], model.range()[y], model.range()[entry.z]};
      v.note = "e = " + model.range()[e].str() + " is not an identity: " + entry_text(model, x, y, entry.z);
      return v;
    }
    ++v.checked;
  }
  std::vector<std::string> others;
  for (const auto& [d, is_identity] : candidate)
    if (is_identity && d != e) others.push_back(model.range()[d].str());
  v.values = {model.range()[e], model.range()[bottom]};
  v.witness["e"] = model.range()[e].str();
  v.witness["bottom"] = model.range()[bottom].str();
  if (!others.empty()) {
    std::string list;
    for (const auto& s : others) list += (list.empty() ? "" : ", ") + s;
    v.note = "observed data also admits identity-like values " + list + "; uniqueness rests on cancellativity";
  }
  return v;
}

Verdict check_associativity_constrained(const CompositionTable& table, const PlausibilityModel& model,
                                        const CheckConfig& config) {
  Verdict v;
  const std::size_t n = model.event_count();
  const std::size_t r = model.range().size();

  // Dense lookup when the range is small enough.
  std::vector<ValueId> dense;
  const bool use_dense = r <= 2048;
  if (use_dense) {
    dense.assign(r * r, kNoValue);
    for (const auto& [xy, e] : table.sorted()) dense[xy.first * r + xy.second] = e.z;
  }
  auto compose = [&](ValueId x, ValueId y) -> ValueId {
    if (x == kNoValue || y == kNoValue) return kNoValue;
    if (use_dense) return dense[x * r + y];
    const auto z = table.lookup(x, y);
    return z ? *z : kNoValue;
  };

  // Distinct values of P(·|G) with a representative A each.
  std::vector<std::vector<std::pair<ValueId, std::size_t>>> distinct(n);
  for (std::size_t g = 1; g < n; ++g) {
    std::map<ValueId, std::size_t> first;
    for (std::size_t a = 0; a < n; ++a) first.try_emplace(model.id(a, g), a);
    distinct[g].assign(first.begin(), first.end());
  }

  auto visit = [&](std::size_t d, std::size_t c, std::size_t b, ValueId x, std::size_t a) -> bool {
    const std::size_t cd = model.intersect(c, d);
    const ValueId z = model.id(c, d);
    const ValueId y = model.id(b, cd);
    const ValueId lhs = compose(compose(z, y), x);
    const ValueId rhs = compose(z, compose(y, x));
    if (lhs == kNoValue || rhs == kNoValue) {
      ++v.skipped;
      return true;
    }
    ++v.checked;
    if (lhs != rhs) {
      v.ok = false;
      v.events = {a, b, c, d};
      v.values = {model.range()[x], model.range()[y], model.range()[z], model.range()[lhs], model.range()[rhs]};
      v.note = "(z∘y)∘x = " + model.range()[lhs].str() + " but z∘(y∘x) = " + model.range()[rhs].str() +
               " for x = P(A|BCD) = " + v.values[0].str() + ", y = P(B|CD) = " + v.values[1].str() +
               ", z = P(C|D) = " + v.values[2].str();
      return false;
    }
    return true;
  };

  const double total = static_cast<double>(n) * n * n * (n - 1);
  if (total <= static_cast<double>(config.enumeration_budget)) {
    for (std::size_t d = 1; d < n; ++d)
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t cd = model.intersect(c, d);
        if (model.is_empty(cd)) continue;
        for (std::size_t b = 0; b < n; ++b) {
          const std::size_t bcd = model.intersect(b, cd);
          if (model.is_empty(bcd)) continue;
          for (const auto& [x, a] : distinct[bcd])
            if (!visit(d, c, b, x, a)) return v;
        }
      }
  } else {
    v.sampled = true;
    std::mt19937_64 rng(config.sample_seed);
    std::uniform_int_distribution<std::size_t> any(0, n - 1), nonempty(1, n - 1);
    for (std::size_t k = 0; k < config.enumeration_budget; ++k) {
      const std::size_t d = nonempty(rng), c = any(rng), b = any(rng), a = any(rng);
      const std::size_t bcd = model.intersect(b, model.intersect(c, d));
      if (model.is_empty(bcd)) continue;
      if (!visit(d, c, b, model.id(a, bcd), a)) return v;
    }
    v.witness["sample_seed"] = config.sample_seed;
  }
  if (v.skipped) v.note = std::to_string(v.skipped) + " triples not resolvable from observed entries";
  return v;
}

Json to_json(const Verdict& v) {
  Json j;
  j["ok"] = v.ok;
  j["checked"] = v.checked;
  if (v.skipped) j["skipped"] = v.skipped;
  if (v.sampled) j["sampled"] = true;
  if (!v.note.empty()) j["note"] = v.note;
  if (!v.events.empty()) j["events"] = v.events;
  if (!v.values.empty()) {
    Json vals = Json::array();
    for (const auto& p : v.values) vals.push_back(p.str());
    j["values"] = vals;
  }
  if (!v.witness.empty()) j["witness"] = v.witness;
  return j;
}

}  // namespace coxkit
