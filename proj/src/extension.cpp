#include "coxkit/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace coxkit {

bool ExtensionReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second.ok; });
}

std::string ExtensionReport::first_failure() const {
  for (const auto& [name, v] : checks)
    if (!v.ok) return name + ": " + v.note;
  return {};
}

Json ExtensionReport::to_json() const {
  Json j;
  j["ok"] = ok();
  j["sample_seed"] = sample_seed;
  if (undetermined) j["undetermined"] = true;
  Json list = Json::object();
  for (const auto& [name, v] : checks) list[name] = coxkit::to_json(v);
  j["checks"] = list;
  return j;
}

ProductStructure::ProductStructure(const PlausibilityModel& base, std::size_t factors, std::size_t atom_cap)
    : base_(&base), factors_(factors) {
  if (factors == 0) throw Error(ErrorKind::BadParams, "fold count must be at least 1");
  double atoms = 1.0;
  for (std::size_t i = 0; i < factors; ++i) atoms *= static_cast<double>(base.algebra().space().size());
  if (atoms <= static_cast<double>(atom_cap)) {
    EventAlgebra algebra = base.algebra();
    for (std::size_t i = 1; i < factors; ++i) algebra = product_algebra(algebra, base.algebra(), atom_cap);
    algebra_.emplace(std::move(algebra));
  }
}

Event ProductStructure::rectangle_event(const Rectangle& r) const {
  if (!algebra_) throw Error(ErrorKind::CapExceeded, "product atom space exceeds the atom cap");
  const std::size_t m = base_->algebra().space().size();
  std::vector<std::vector<std::size_t>> members;
  for (auto f : r) members.push_back(base_->event(f).members());
  Event out(algebra_->space().size());
  std::vector<std::size_t> pos(r.size(), 0);
  for (const auto& mem : members)
    if (mem.empty()) return out;
  while (true) {
    std::size_t atom = 0;
    for (std::size_t i = 0; i < r.size(); ++i) atom = atom * m + members[i][pos[i]];
    out.insert(atom);
    std::size_t i = r.size();
    while (i > 0) {
      --i;
      if (++pos[i] < members[i].size()) break;
      pos[i] = 0;
      if (i == 0) return out;
    }
  }
}

Rectangle ProductStructure::intersect(const Rectangle& a, const Rectangle& b) const {
  Rectangle out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = base_->intersect(a[i], b[i]);
  return out;
}

bool ProductStructure::is_empty(const Rectangle& r) const {
  return std::any_of(r.begin(), r.end(), [&](std::size_t f) { return base_->is_empty(f); });
}

std::optional<PValue> ProductStructure::value(const Rectangle& of, const Rectangle& given) const {
  if (of.size() != factors_ || given.size() != factors_)
    throw Error(ErrorKind::InvalidInput, "rectangle arity does not match the fold count");
  if (is_empty(given)) throw Error(ErrorKind::InvalidInput, "conditioning rectangle is empty");
  PValue acc = base_->value(of[0], given[0]);
  const Operations* ops = base_->operations();
  for (std::size_t i = 1; i < factors_; ++i) {
    if (!ops) return std::nullopt;
    auto next = ops->compose(acc, base_->value(of[i], given[i]));
    if (!next) return std::nullopt;
    acc = std::move(*next);
  }
  return acc;
}

std::optional<PValue> ProductStructure::value_right(const Rectangle& of, const Rectangle& given) const {
  if (of.size() != factors_ || given.size() != factors_)
    throw Error(ErrorKind::InvalidInput, "rectangle arity does not match the fold count");
  if (is_empty(given)) throw Error(ErrorKind::InvalidInput, "conditioning rectangle is empty");
  PValue acc = base_->value(of[factors_ - 1], given[factors_ - 1]);
  const Operations* ops = base_->operations();
  for (std::size_t i = factors_ - 1; i-- > 0;) {
    if (!ops) return std::nullopt;
    auto next = ops->compose(base_->value(of[i], given[i]), acc);
    if (!next) return std::nullopt;
    acc = std::move(*next);
  }
  return acc;
}

namespace {

std::string rect_text(const PlausibilityModel& m, const Rectangle& r) {
  std::string out = "(";
  for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + m.describe(r[i]);
  return out + ")";
}

/// Distinct values of P(·|D) per D, deduplicated across D.
std::vector<std::pair<std::size_t, std::vector<std::pair<ValueId, std::size_t>>>> distinct_value_sets(
    const PlausibilityModel& model) {
  std::vector<std::pair<std::size_t, std::vector<std::pair<ValueId, std::size_t>>>> out;
  std::set<std::vector<ValueId>> seen;
  for (std::size_t d = 1; d < model.event_count(); ++d) {
    std::map<ValueId, std::size_t> first;
    for (std::size_t a = 0; a < model.event_count(); ++a) first.try_emplace(model.id(a, d), a);
    std::vector<ValueId> key;
    for (const auto& [v, a] : first) key.push_back(v);
    if (!seen.insert(key).second) continue;
    out.push_back({d, {first.begin(), first.end()}});
  }
  return out;
}

class Examiner {
 public:
  Examiner(const ProductStructure& p, const CheckConfig& c)
      : p_(p), m_(p.base()), config_(c), rng_(c.sample_seed), n_(m_.event_count()) {
    lo_ = m_.range().front();
    hi_ = m_.range().back();
  }

  Rectangle random_rect(bool nonempty) {
    std::uniform_int_distribution<std::size_t> any(0, n_ - 1), ne(1, n_ - 1);
    Rectangle r(p_.factors());
    for (auto& f : r) f = nonempty ? ne(rng_) : any(rng_);
    return r;
  }

  Rectangle full() const { return Rectangle(p_.factors(), m_.full_event()); }

  std::optional<PValue> value(const Rectangle& of, const Rectangle& given) {
    auto v = p_.value(of, given);
    if (!v) {
      undetermined_ = true;
      return v;
    }
    track(*v, of, given);
    return v;
  }

  bool same(const PValue& a, const PValue& b) const {
    return same_value(a, b, (a.is_exact() && b.is_exact()) ? 0.0 : config_.tolerance);
  }

  void track(const PValue& v, const Rectangle& of, const Rectangle& given) {
    const double t = (lo_.is_exact() && v.is_exact()) ? 0.0 : config_.tolerance;
    if (range_.ok && ((compare(v, lo_) == std::partial_ordering::less && !same_value(v, lo_, t)) ||
                      (compare(v, hi_) == std::partial_ordering::greater && !same_value(v, hi_, t)))) {
      range_.ok = false;
      range_.values = {v, lo_, hi_};
      range_.note = "P" + rect_text(m_, of) + "|" + rect_text(m_, given) + " = " + v.str() + " escapes [" +
                    lo_.str() + ", " + hi_.str() + "]";
    }
    ++range_.checked;
  }

  Verdict decomposability() {
    Verdict v;
    v.sampled = true;
    const Operations* ops = m_.operations();
    for (std::size_t k = 0; k < config_.extension_samples; ++k) {
      const Rectangle c = random_rect(true);
      const Rectangle a = random_rect(false);
      const Rectangle b = random_rect(false);
      const Rectangle ac = p_.intersect(a, c);
      if (p_.is_empty(ac)) continue;
      const auto lhs = value(p_.intersect(a, b), c);
      const auto x = value(a, c);
      const auto y = value(b, ac);
      if (!lhs || !x || !y || !ops) continue;
      const auto rhs = ops->compose(*x, *y);
      if (!rhs) {
        undetermined_ = true;
        continue;
      }
      ++v.checked;
      if (!same(*lhs, *rhs)) {
        v.ok = false;
        v.values = {*x, *y, *lhs, *rhs};
        v.note = "P(A∩B|C) = " + lhs->str() + " but P(A|C)∘P(B|A∩C) = " + rhs->str() + " for A=" + rect_text(m_, a) +
                 " B=" + rect_text(m_, b) + " C=" + rect_text(m_, c);
        return v;
      }
    }
    return v;
  }

  Verdict negation() {
    Verdict v;
    v.sampled = true;
    const Operations* ops = m_.operations();
    std::uniform_int_distribution<std::size_t> any(0, n_ - 1), pos(0, p_.factors() - 1);
    for (std::size_t k = 0; k < config_.extension_samples; ++k) {
      const Rectangle c = random_rect(true);
      const std::size_t a = any(rng_);
      const std::size_t i = pos(rng_);
      Rectangle cyl = full(), cyl_c = full();
      cyl[i] = a;
      cyl_c[i] = m_.complement(a);
      const auto x = value(cyl, c);
      const auto nx = value(cyl_c, c);
      if (!x || !nx || !ops) continue;
      const auto expected = ops->negate(*x);
      if (!expected) {
        undetermined_ = true;
        continue;
      }
      ++v.checked;
      if (!same(*nx, *expected)) {
        v.ok = false;
        v.values = {*x, *nx, *expected};
        v.note = "complement of " + rect_text(m_, cyl) + " given " + rect_text(m_, c) + " has " + nx->str() +
                 " but N(" + x->str() + ") = " + expected->str();
        return v;
      }
    }
    return v;
  }

  Verdict identity() {
    Verdict v;
    v.sampled = true;
    const PValue e = m_.value(m_.full_event(), m_.full_event());
    for (std::size_t k = 0; k < std::min<std::size_t>(config_.extension_samples, 4096); ++k) {
      const Rectangle c = random_rect(true);
      const auto x = value(full(), c);
      if (!x) continue;
      ++v.checked;
      if (!same(*x, e)) {
        v.ok = false;
        v.values = {*x, e};
        v.note = "P(Ω×…×Ω|" + rect_text(m_, c) + ") = " + x->str() + " differs from e = " + e.str();
        return v;
      }
    }
    return v;
  }

  Verdict empty_representation() {
    Verdict v;
    v.sampled = true;
    std::uniform_int_distribution<std::size_t> pos(0, p_.factors() - 1);
    for (std::size_t k = 0; k < std::min<std::size_t>(config_.extension_samples, 4096); ++k) {
      const Rectangle c = random_rect(true);
      Rectangle r = random_rect(false);
      r[pos(rng_)] = m_.empty_event();
      const auto canonical = value(Rectangle(p_.factors(), m_.empty_event()), c);
      const auto x = value(r, c);
      if (!x || !canonical) continue;
      ++v.checked;
      if (!same(*x, *canonical)) {
        v.ok = false;
        v.values = {*x, *canonical};
        v.note = "empty event " + rect_text(m_, r) + " given " + rect_text(m_, c) + " has " + x->str() +
                 " but ∅×…×∅ has " + canonical->str();
        return v;
      }
    }
    return v;
  }

  Verdict inclusion_monotonicity() {
    Verdict v;
    v.sampled = true;
    const auto& blocks = m_.algebra().blocks();
    std::uniform_int_distribution<std::size_t> pos(0, p_.factors() - 1), blk(0, blocks.size() - 1);
    for (std::size_t k = 0; k < config_.extension_samples; ++k) {
      const Rectangle c = random_rect(true);
      const Rectangle a = random_rect(false);
      Rectangle bigger = a;
      const std::size_t i = pos(rng_);
      bigger[i] = m_.index_of(m_.mask(a[i]) | blocks[blk(rng_)].mask());
      const auto x = value(a, c);
      const auto y = value(bigger, c);
      if (!x || !y) continue;
      ++v.checked;
      if (compare(*x, *y) == std::partial_ordering::greater && !same(*x, *y)) {
        v.ok = false;
        v.values = {*x, *y};
        v.note = "P" + rect_text(m_, a) + " = " + x->str() + " > P" + rect_text(m_, bigger) + " = " + y->str() +
                 " given " + rect_text(m_, c);
        return v;
      }
    }
    return v;
  }

  /// Left and right folds agree on rectangles (A, B, C, Ω, …) | (D, …, D),
  /// exhaustively over distinct value triples.
  Verdict fold_associativity() {
    Verdict v;
    for (const auto& [d, values] : distinct_value_sets(m_)) {
      for (const auto& [xa, a] : values)
        for (const auto& [xb, b] : values)
          for (const auto& [xc, c] : values) {
            Rectangle of(p_.factors(), m_.full_event());
            of[0] = a;
            of[1] = b;
            of[2] = c;
            const Rectangle given(p_.factors(), d);
            const auto left = value(of, given);
            const auto right = p_.value_right(of, given);
            if (!left || !right) {
              undetermined_ = true;
              ++v.skipped;
              continue;
            }
            ++v.checked;
            if (!same(*left, *right)) {
              v.ok = false;
              v.events = {a, b, c, d};
              v.values = {m_.range()[xa], m_.range()[xb], m_.range()[xc], *left, *right};
              v.note = "(x∘y)∘z = " + left->str() + " but x∘(y∘z) = " + right->str() + " for x = P(" +
                       m_.describe(a) + "|D) = " + v.values[0].str() + ", y = P(" + m_.describe(b) +
                       "|D) = " + v.values[1].str() + ", z = P(" + m_.describe(c) + "|D) = " + v.values[2].str() +
                       ", D = " + m_.describe(d);
              return v;
            }
          }
    }
    return v;
  }

  Verdict range() const { return range_; }
  bool undetermined() const { return undetermined_; }

 private:
  const ProductStructure& p_;
  const PlausibilityModel& m_;
  const CheckConfig& config_;
  std::mt19937_64 rng_;
  std::size_t n_;
  PValue lo_, hi_;
  Verdict range_;
  bool undetermined_ = false;
};

}  // namespace

ExtensionReport examine_extension(const ProductStructure& product, const CheckConfig& config) {
  ExtensionReport report;
  report.sample_seed = config.sample_seed;
  if (product.factors() == 1) return report;
  Examiner ex(product, config);
  report.checks.emplace_back("identity", ex.identity());
  report.checks.emplace_back("empty_representation", ex.empty_representation());
  report.checks.emplace_back("inclusion_monotonicity", ex.inclusion_monotonicity());
  report.checks.emplace_back("decomposability", ex.decomposability());
  report.checks.emplace_back("negation", ex.negation());
  if (product.factors() >= 3) report.checks.emplace_back("associativity", ex.fold_associativity());
  report.checks.emplace_back("range_closure", ex.range());
  report.undetermined = ex.undetermined();
  return report;
}

ProductStructure extend(const PlausibilityModel& model, std::size_t n, const CheckConfig& config) {
  ProductStructure product(model, n);
  if (n > 1 && !model.operations())
    throw Error(ErrorKind::Undetermined, "the model declares no composition rule; ∘ is only known on observed pairs");
  ExtensionReport report = examine_extension(product, config);
  if (!report.ok()) throw Error(ErrorKind::ExtensionInconsistent, report.first_failure());
  if (report.undetermined)
    throw Error(ErrorKind::Undetermined, "∘ or N undefined on values the product requires");
  product.set_report(std::move(report));
  return product;
}

Verdict check_associativity_unconstrained(const PlausibilityModel& model, const CheckConfig& config) {
  Verdict v;
  if (!model.operations()) {
    v.note = "no composition rule declared; unconstrained triples need ∘ beyond observed pairs";
    v.skipped = 1;
    return v;
  }
  ProductStructure product(model, 3);
  const std::size_t omega = model.full_event();
  for (const auto& [d, values] : distinct_value_sets(model)) {
    for (const auto& [xa, a] : values)
      for (const auto& [xb, b] : values)
        for (const auto& [xc, c] : values) {
          const Rectangle given{d, d, d};
          // A× ∩ B× ∩ C× = (A, B, C); its value folds x, y, z.
          const auto left = product.value({a, b, c}, given);
          const auto right = product.value_right({a, b, c}, given);
          if (!left || !right) {
            ++v.skipped;
            continue;
          }
          ++v.checked;
          const double t = (left->is_exact() && right->is_exact()) ? 0.0 : config.tolerance;
          if (!same_value(*left, *right, t)) {
            v.ok = false;
            v.events = {a, b, c, d};
            v.values = {model.range()[xa], model.range()[xb], model.range()[xc], *left, *right};
            v.note = "(x∘y)∘z = " + left->str() + " but x∘(y∘z) = " + right->str() + " for x = P(" +
                     model.describe(a) + "|D) = " + v.values[0].str() + ", y = P(" + model.describe(b) +
                     "|D) = " + v.values[1].str() + ", z = P(" + model.describe(c) + "|D) = " + v.values[2].str() +
                     ", D = " + model.describe(d);
            return v;
          }
          // P(A× | B×C×D×) = P(A|D) ∘ P(Ω|BD) ∘ P(Ω|CD) collapses to P(A|D).
          const std::size_t bd = model.intersect(b, d), cd = model.intersect(c, d);
          if (model.is_empty(bd) || model.is_empty(cd)) continue;
          const auto factored = product.value({a, omega, omega}, {d, bd, cd});
          if (factored && !same_value(*factored, model.range()[xa], t)) {
            v.ok = false;
            v.events = {a, b, c, d};
            v.values = {*factored, model.range()[xa]};
            v.note = "P(A×|B×C×D×) = " + factored->str() + " does not reduce to P(A|D) = " + v.values[1].str();
            return v;
          }
        }
  }
  if (v.skipped) v.note = std::to_string(v.skipped) + " triples where ∘ is undefined";
  return v;
}

std::string ConvergenceResult::csv() const {
  std::ostringstream out;
  out << "i,v_i\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << (i + 1) << ',' << values[i].str() << '\n';
  return out.str();
}

ConvergenceResult repeated_event_convergence(const PlausibilityModel& model, std::size_t c, std::size_t d,
                                             std::size_t i_max, double tol) {
  if (d == 0 || d >= model.event_count() || c >= model.event_count())
    throw Error(ErrorKind::InvalidInput, "event index out of range");
  const ValueId lo = model.id(model.empty_event(), d), hi = model.id(model.full_event(), d);
  const ValueId x_id = model.id(c, d);
  if (!(lo < x_id && x_id < hi))
    throw Error(ErrorKind::PreconditionUnmet, "P(C|D) must lie strictly between P(∅|D) and P(Ω|D)");
  const Operations* ops = model.operations();
  if (!ops) throw Error(ErrorKind::Undetermined, "repeated events need a declared composition rule");

  ConvergenceResult r;
  r.bottom = model.range()[lo];
  const PValue x = model.range()[x_id];
  r.values.push_back(x);
  for (std::size_t i = 1; i < i_max; ++i) {
    auto next = ops->compose(r.values.back(), x);
    if (!next) throw Error(ErrorKind::Undetermined, "∘ undefined at (" + r.values.back().str() + ", " + x.str() + ")");
    r.values.push_back(std::move(*next));
  }

  auto gap = [&](const PValue& v) { return v - r.bottom; };
  std::optional<std::size_t> stall;
  for (std::size_t i = 0; i + 1 < r.values.size(); ++i) {
    if (compare(r.values[i + 1], r.values[i]) != std::partial_ordering::less) {
      const bool at_bottom = same_value(r.values[i], r.bottom, r.bottom.is_exact() && r.values[i].is_exact() ? 0.0 : tol);
      if (!at_bottom) {
        r.strictly_decreasing = false;
        stall = i;
      }
      break;
    }
  }
  const PValue& last = r.values.back();
  const bool reached = std::abs(gap(last).approx()) <= tol ||
                       (last.is_exact() && r.bottom.is_exact() && last.exact() == r.bottom.exact());

  // Geometric tail certificate: successive gap ratios bounded away from 1
  // over the second half of the trace.
  double worst_ratio = 0.0;
  bool ratios_ok = r.strictly_decreasing;
  for (std::size_t i = r.values.size() / 2; ratios_ok && i + 1 < r.values.size(); ++i) {
    const PValue g0 = gap(r.values[i]);
    const PValue g1 = gap(r.values[i + 1]);
    if (g0.approx() <= 0.0) break;
    const double ratio = (g1 / g0).approx();
    worst_ratio = std::max(worst_ratio, ratio);
  }
  r.certified_by_tail = ratios_ok && worst_ratio < 1.0 - 1e-6;

  if (stall) {
    r.delta = r.values[*stall];
    r.converges = false;
    r.note = "sequence stalls at δ = " + r.delta.str() + " > P(∅|D); P(C|D)∘δ = P(C×C|D×D)∘δ contradicts cancellativity";
  } else if (reached || r.certified_by_tail) {
    r.delta = r.bottom;
    r.converges = true;
    r.note = reached ? "v_imax within tolerance of P(∅|D)" : "geometric tail certifies the limit P(∅|D)";
    if (r.certified_by_tail) r.note += "; gap ratio ≤ " + std::to_string(worst_ratio);
  } else {
    r.delta = last;
    r.converges = false;
    r.note = "no convergence to P(∅|D) within i_max = " + std::to_string(i_max);
  }
  return r;
}

DensifiedGrid densified_range(const PlausibilityModel& model, double mesh, std::size_t max_rounds) {
  if (!intermediate_pair(model)) throw Error(ErrorKind::MeshUnreachable, "model is trivial: no intermediate value");
  const Operations* ops = model.operations();
  const double lo = model.value(model.empty_event(), model.full_event()).approx();
  const double hi = model.value(model.full_event(), model.full_event()).approx();
  const double width = hi - lo;

  std::vector<double> observed;
  for (const auto& v : model.range()) observed.push_back(v.approx());
  std::vector<double> grid = observed;
  grid.push_back(lo);
  grid.push_back(hi);

  auto finish = [&](std::vector<double>& g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  };
  auto max_gap = [&](const std::vector<double>& g) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      if (g[i] >= lo && g[i + 1] <= hi) m = std::max(m, g[i + 1] - g[i]);
    return m;
  };
  // Generated values are kept at resolution mesh/8 in value or in N-image
  // (observed values always). The N-image criterion keeps the small values
  // whose negations fill the top of the range; both bound the grid size.
  auto thin = [&](std::vector<double> g) {
    finish(g);
    const double step = width * mesh / 8.0;
    std::vector<double> out;
    std::set<double> keep(observed.begin(), observed.end());
    keep.insert(lo);
    keep.insert(hi);
    std::set<double> images;
    auto image_is_new = [&](double n) {
      auto it = images.lower_bound(n);
      if (it != images.end() && *it - n < step) return false;
      return it == images.begin() || n - *std::prev(it) >= step;
    };
    for (double v : g) {
      if (v < lo - 1e-12 || v > hi + 1e-12) continue;
      std::optional<double> n;
      if (ops)
        if (auto nv = ops->negate(PValue(v))) n = nv->approx();
      const bool kept = keep.contains(v) || out.empty() || v - out.back() >= step || (n && image_is_new(*n));
      if (!kept) continue;
      out.push_back(v);
      if (n) images.insert(*n);
    }
    return out;
  };

  DensifiedGrid result;
  finish(grid);
  for (std::size_t round = 0; round <= max_rounds; ++round) {
    result.mesh = max_gap(grid);
    if (result.mesh <= mesh) {
      result.values = grid;
      result.rounds = round;
      return result;
    }
    if (!ops) throw Error(ErrorKind::Undetermined, "densification needs a declared composition rule");
    std::vector<double> next = grid;
    for (double x : grid) {
      if (auto nx = ops->negate(PValue(x))) next.push_back(nx->approx());
      for (double y : grid)
        if (auto z = ops->compose(PValue(x), PValue(y))) next.push_back(z->approx());
    }
    next = thin(std::move(next));
    if (next == grid) break;
    grid = std::move(next);
  }
  throw Error(ErrorKind::MeshUnreachable,
              "mesh " + std::to_string(result.mesh) + " after " + std::to_string(max_rounds) + " rounds");
}

}  // namespace coxkit
