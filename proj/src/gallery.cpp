#include "coxkit/gallery.hpp"

#include "coxkit/counterexample.hpp"

#include <bit>

namespace coxkit {

PlausibilityModel measure_model(const std::vector<PValue>& masses, std::shared_ptr<const Operations> ops,
                                double tol) {
  if (masses.empty()) throw Error(ErrorKind::BadParams, "measure needs at least one atom");
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(masses.size()));
  EventAlgebra algebra = build_power_algebra(space);
  std::vector<PValue> measure(std::size_t{1} << masses.size(), PValue(Rational(0)));
  for (std::size_t mask = 1; mask < measure.size(); ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    measure[mask] = measure[mask & (mask - 1)] + masses[low];
  }
  for (std::size_t i = 0; i < masses.size(); ++i)
    if (!(compare(masses[i], PValue(Rational(0))) > 0))
      throw Error(ErrorKind::BadParams, "atom masses must be positive");
  return PlausibilityModel(
      std::move(algebra), [&](std::size_t of, std::size_t given) { return measure[of & given] / measure[given]; },
      std::move(ops), tol);
}

PlausibilityModel transform_model(const PlausibilityModel& model, const ValueTransform& transform) {
  auto base = model.operations_ptr();
  std::shared_ptr<const Operations> ops;
  if (base) ops = std::make_shared<ConjugatedOperations>(transform, std::move(base));
  return PlausibilityModel(
      model.algebra(), [&](std::size_t of, std::size_t given) { return transform.forward(model.value(of, given)); },
      std::move(ops), model.tolerance());
}

const std::vector<GalleryEntry>& gallery_catalog() {
  static const std::vector<GalleryEntry> catalog = {
      {"fair_die", "six equally likely faces, P(A|B) = |A∩B|/|B|", "pass"},
      {"dice_pair", "fair_die extended to two independent throws", "pass"},
      {"degenerate", "two atoms, only ∅ and Ω observable", "direct_embedding"},
      {"trivial_two_valued", "P(A|B) = 1 iff the least atom of B lies in A", "direct_embedding"},
      {"transform:square:fair_die", "fair_die with every value squared", "pass"},
      {"geometric:5", "geometric masses 2^-i on five atoms plus a tail atom", "pass"},
      {"perturbed:fair_die:1/100", "fair_die with P({1}|Ω) raised by 1/100", "fail:decomposability"},
      {"min_table", "three atoms, values in {0, 1/2, 1}, ∘ = min", "fail:cancellativity"},
      {"counterexample:4:1", "search result: base checks pass, ∘ not associative",
       "fail:unconstrained_associativity"},
  };
  return catalog;
}

namespace {

std::vector<std::string> split(const std::string& name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = name.find(':', start);
    parts.push_back(name.substr(start, colon - start));
    if (colon == std::string::npos) return parts;
    start = colon + 1;
  }
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::BadParams, what + " must be a nonnegative integer, got '" + text + "'");
  }
}

std::vector<PValue> uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::BadParams, "uniform model needs at least one atom");
  return std::vector<PValue>(n, PValue(Rational(1, static_cast<long long>(n))));
}

PlausibilityModel degenerate() {
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(2));
  auto algebra = EventAlgebra::from_blocks(space, {Event::full(2)});
  return PlausibilityModel(
      std::move(algebra), [](std::size_t of, std::size_t) { return PValue(Rational(of == 0 ? 0 : 1)); },
      std::make_shared<ScaledProduct>());
}

PlausibilityModel trivial_two_valued() {
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(2));
  return PlausibilityModel(
      build_power_algebra(space),
      [](std::size_t of, std::size_t given) {
        const std::size_t least = given & (~given + 1);
        return PValue(Rational((of & least) ? 1 : 0));
      },
      std::make_shared<ScaledProduct>());
}

PlausibilityModel min_table() {
  const PValue zero(Rational(0)), half(Rational(1, 2)), one(Rational(1));
  const std::vector<PValue> v{zero, half, one};
  std::vector<CompositionEntry> comp;
  for (const auto& x : v)
    for (const auto& y : v) comp.push_back({x, y, compare(x, y) < 0 ? x : y});
  std::vector<NegationEntry> neg{{zero, one}, {half, half}, {one, zero}};
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(3));
  return PlausibilityModel(
      build_power_algebra(space),
      [&](std::size_t of, std::size_t given) {
        const std::size_t meet = of & given;
        return meet == 0 ? zero : meet == given ? one : half;
      },
      std::make_shared<TableOperations>(std::move(comp), std::move(neg)));
}

}  // namespace

GalleryItem build_gallery(const std::string& name, const CheckConfig& config) {
  GalleryItem item;
  item.name = name;
  const auto parts = split(name);
  const std::string& head = parts[0];
  auto rest_from = [&](std::size_t i) {
    std::string out;
    for (std::size_t k = i; k < parts.size(); ++k) out += (k > i ? ":" : "") + parts[k];
    return out;
  };
  auto hold = [&](PlausibilityModel m) { item.model = std::make_shared<const PlausibilityModel>(std::move(m)); };

  if (head == "fair_die" && parts.size() == 1) {
    hold(measure_model(uniform(6)));
  } else if (head == "uniform" && parts.size() == 2) {
    hold(measure_model(uniform(parse_count(parts[1], "atom count"))));
  } else if (head == "dice_pair" && parts.size() == 1) {
    hold(measure_model(uniform(6)));
    item.product = std::make_shared<const ProductStructure>(extend(*item.model, 2, config));
  } else if (head == "degenerate" && parts.size() == 1) {
    hold(degenerate());
  } else if (head == "trivial_two_valued" && parts.size() == 1) {
    hold(trivial_two_valued());
  } else if (head == "min_table" && parts.size() == 1) {
    hold(min_table());
  } else if (head == "transform" && parts.size() >= 3) {
    const auto base = build_gallery(rest_from(2), config);
    if (base.product) throw Error(ErrorKind::BadParams, "transform needs a plain model, not a product");
    hold(transform_model(*base.model, ValueTransform::parse(parts[1])));
  } else if (head == "perturbed" && parts.size() >= 3) {
    const PValue delta = PValue::parse(parts.back());
    std::string base_name = parts[1];
    for (std::size_t k = 2; k + 1 < parts.size(); ++k) base_name += ":" + parts[k];
    const auto base = build_gallery(base_name, config);
    if (base.product) throw Error(ErrorKind::BadParams, "perturbed needs a plain model, not a product");
    const PlausibilityModel& m = *base.model;
    const std::size_t first = m.index_of(m.algebra().blocks().front().mask());
    hold(m.with_value(first, m.full_event(), m.value(first, m.full_event()) + delta));
  } else if (head == "geometric" && parts.size() <= 3) {
    const std::size_t depth = parts.size() >= 2 ? parse_count(parts[1], "depth") : 5;
    const PValue ratio = parts.size() == 3 ? PValue::parse(parts[2]) : PValue(Rational(1, 2));
    if (!ratio.is_exact()) throw Error(ErrorKind::BadParams, "geometric ratio must be an exact rational");
    if (depth == 0 || depth + 1 > kDefaultEnumerationCap)
      throw Error(ErrorKind::BadParams, "geometric depth must be in 1.." + std::to_string(kDefaultEnumerationCap - 1));
    item.countable = CountableSpace::geometric(ratio.exact());
    item.countable_depth = depth;
    std::vector<PValue> masses;
    for (std::size_t i = 1; i <= depth; ++i) masses.emplace_back(item.countable->mass(i));
    masses.emplace_back(Rational(1) - [&] {
      Rational s(0);
      for (const auto& m : masses) s += m.exact();
      return s;
    }());
    hold(measure_model(masses));
  } else if (head == "counterexample" && parts.size() <= 3) {
    CounterexampleOptions options;
    if (parts.size() >= 2) options.values = static_cast<unsigned>(parse_count(parts[1], "value count"));
    if (parts.size() == 3) options.seed = parse_count(parts[2], "seed");
    auto search = search_counterexample(options, config);
    if (!search.found)
      throw Error(ErrorKind::ExhaustedBudget, "no counterexample with " + std::to_string(options.values) + " values");
    item.model = search.found->model;
  } else {
    throw Error(ErrorKind::UnknownName, "unknown gallery model '" + name + "'");
  }
  return item;
}

}  // namespace coxkit
