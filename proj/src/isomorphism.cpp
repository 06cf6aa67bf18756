#include "coxkit/isomorphism.hpp"

#include "coxkit/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coxkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxGeneratorNodes = std::size_t{1} << 23;
// P_j is re-anchored by binary powering every this many steps.
constexpr std::size_t kAnchorStride = 256;

// Linear interpolation of ys over ascending xs, extending the end segments.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (n == 1) return ys[0];
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  hi = std::clamp<std::size_t>(hi, 1, n - 1);
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

PValue abs_diff(const PValue& a, const PValue& b) {
  PValue d = a - b;
  return compare(d, PValue(Rational(0))) < 0 ? PValue(Rational(0)) - d : d;
}

bool exceeds(const PValue& err, double tol) {
  return err.is_exact() ? err.exact() > Rational(0) && err.approx() > tol : err.approx() > tol;
}

}  // namespace

Generator::Generator(std::vector<double> nodes, std::vector<double> levels, double identity, double bottom,
                     double reference)
    : nodes_(std::move(nodes)), levels_(std::move(levels)), identity_(identity), bottom_(bottom),
      reference_(reference) {
  if (nodes_.size() < 2 || nodes_.size() != levels_.size())
    throw Error(ErrorKind::InvalidInput, "generator needs at least two nodes");
  chart_.reserve(nodes_.size());
  for (double x : nodes_) chart_.push_back(std::log(x - bottom_));
}

double Generator::operator()(double x) const {
  if (x <= bottom_) return -kInf;
  return interpolate(chart_, levels_, std::log(x - bottom_));
}

double Generator::inverse(double v) const {
  if (v == -kInf) return bottom_;
  return bottom_ + std::exp(interpolate(levels_, chart_, v));
}

std::vector<std::pair<double, double>> Generator::samples(std::size_t count) const {
  std::vector<std::pair<double, double>> out;
  if (count == 0) return out;
  count = std::min(count, nodes_.size());
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = count == 1 ? nodes_.size() - 1 : k * (nodes_.size() - 1) / (count - 1);
    out.emplace_back(nodes_[i], levels_[i]);
  }
  return out;
}

GeneratorFit recover_generator(const Operations& ops, double identity, double bottom, double reference,
                               std::span<const double> support, double floor, unsigned dyadic_depth, double tol) {
  if (!(bottom < reference && reference < identity))
    throw Error(ErrorKind::PreconditionUnmet, "reference must lie strictly between bottom and identity");
  if (dyadic_depth == 0 || dyadic_depth > 24) throw Error(ErrorKind::BadParams, "dyadic depth must be in 1..24");
  auto comp = [&](double a, double b) {
    const auto z = ops.compose(PValue(a), PValue(b));
    if (!z) throw Error(ErrorKind::Undetermined, "∘ undefined at (" + PValue(a).str() + ", " + PValue(b).str() + ")");
    return z->approx();
  };

  // roots[k] has g = −2^−k.
  std::vector<double> roots{reference};
  for (unsigned k = 1; k <= dyadic_depth; ++k) {
    const double s = roots.back();
    double lo = s, hi = identity;
    for (int it = 0; it < 400; ++it) {
      const double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      (comp(mid, mid) < s ? lo : hi) = mid;
    }
    const double t = lo + (hi - lo) / 2;
    if (!(t > s && t < identity))
      throw Error(ErrorKind::NonAssociativeData, "no ∘-square root of " + PValue(s).str() + " inside the range");
    roots.push_back(t);
  }

  const std::size_t steps = std::size_t{1} << dyadic_depth;
  auto power = [&](std::size_t j) {
    double x = identity;
    for (unsigned bit = 0; bit < dyadic_depth; ++bit)
      if (j & (std::size_t{1} << bit)) x = comp(x, roots[dyadic_depth - bit]);
    return x;
  };
  std::vector<double> fraction(steps);
  fraction[0] = identity;
  for (std::size_t j = 1; j < steps; ++j) {
    fraction[j] = j % kAnchorStride == 0 ? power(j) : comp(fraction[j - 1], roots[dyadic_depth]);
    if (!(fraction[j] < fraction[j - 1]))
      throw Error(ErrorKind::NonAssociativeData, "dyadic ∘-powers of the reference are not strictly decreasing");
  }

  std::vector<double> nodes, levels;  // descending x
  double unit = identity;
  for (std::size_t n = 0;; ++n) {
    bool stop = false;
    for (std::size_t j = 0; j < steps; ++j) {
      const double x = n == 0 ? fraction[j] : comp(unit, fraction[j]);
      if (x <= bottom || (!nodes.empty() && !(x < nodes.back()))) {
        if (!nodes.empty() && nodes.back() < floor) {
          stop = true;
          break;
        }
        throw Error(ErrorKind::NonAssociativeData,
                    "generator nodes stop decreasing above the floor at " + PValue(x).str());
      }
      nodes.push_back(x);
      levels.push_back(-(static_cast<double>(n) + static_cast<double>(j) / static_cast<double>(steps)));
    }
    if (stop || nodes.back() < floor) break;
    if (nodes.size() >= kMaxGeneratorNodes)
      throw Error(ErrorKind::CapExceeded, "generator table exceeds " + std::to_string(kMaxGeneratorNodes) +
                                              " nodes; lower the dyadic depth or raise the mesh");
    unit = comp(unit, reference);
  }
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(levels.begin(), levels.end());

  GeneratorFit fit{Generator(std::move(nodes), std::move(levels), identity, bottom, reference), 0.0, 0};
  const Generator& g = fit.generator;
  std::vector<double> pts;
  for (double s : support)
    if (s > bottom && s <= identity) pts.push_back(s);
  const std::size_t stride = pts.size() > 1500 ? pts.size() / 1500 + 1 : 1;
  for (std::size_t i = 0; i < pts.size(); i += stride)
    for (std::size_t k = 0; k < pts.size(); k += stride) {
      const double z = comp(pts[i], pts[k]);
      if (z < g.lowest_node()) continue;
      fit.residual = std::max(fit.residual, std::fabs(g(z) - g(pts[i]) - g(pts[k])));
      ++fit.pairs;
    }
  if (fit.residual > tol)
    throw Error(ErrorKind::NonAssociativeData,
                "generator residual " + PValue(fit.residual).str() + " exceeds tolerance " + PValue(tol).str());
  return fit;
}

NormalizedTransform::NormalizedTransform(const Generator& g, double scale) : g_(&g), scale_(scale) {
  min_ = 0.0;
  max_ = std::exp(scale_ * g(g.identity()));
}

double NormalizedTransform::operator()(double p) const {
  const double raw = p <= g_->bottom() ? 0.0 : std::exp(scale_ * (*g_)(p));
  return (raw - min_) / (max_ - min_);
}

double NormalizedTransform::inverse(double t) const {
  const double raw = min_ + t * (max_ - min_);
  if (raw <= 0.0) return g_->bottom();
  return g_->inverse(std::log(raw) / scale_);
}

double canonical_scale(const Generator& g) {
  if (!(g.identity() > g.bottom())) throw Error(ErrorKind::DegenerateRange, "identity equals bottom");
  return -std::log((g.reference() - g.bottom()) / (g.identity() - g.bottom()));
}

ScalingResult scaling_exponent(const std::function<double(double)>& negation, double tol) {
  const double n0 = negation(0.0), n1 = negation(1.0);
  if (!(n0 > 0.0) || !(n1 < 1.0))
    throw Error(ErrorKind::NoFixedPoint, "N does not map [0,1] across the diagonal");
  constexpr int kGrid = 64;
  double prev = n0;
  for (int i = 1; i <= kGrid; ++i) {
    const double cur = negation(static_cast<double>(i) / kGrid);
    if (cur > prev + tol) throw Error(ErrorKind::NoFixedPoint, "N is not decreasing on [0,1]");
    prev = cur;
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (negation(mid) > mid ? lo : hi) = mid;
  }
  ScalingResult r;
  r.h = lo + (hi - lo) / 2;
  if (!(r.h > 0.0 && r.h < 1.0)) throw Error(ErrorKind::NoFixedPoint, "fixed point of N is not interior");
  r.m = std::log(0.5) / std::log(r.h);
  return r;
}

std::function<double(double)> interpolate_negation(std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [](const auto& a, const auto& b) { return a.first == b.first; }),
               points.end());
  if (points.size() < 2) throw Error(ErrorKind::PreconditionUnmet, "negation needs at least two observed points");
  std::vector<double> xs, ys;
  for (const auto& [x, y] : points) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return [xs = std::move(xs), ys = std::move(ys)](double t) { return interpolate(xs, ys, t); };
}

SumRuleResidual verify_sum_rule(const PlausibilityModel& /*model*/, std::span<const PValue> probability,
                                const std::function<PValue(const PValue&)>& negate, double tol) {
  SumRuleResidual r;
  r.functional = PValue(Rational(0));
  r.complement = PValue(Rational(0));
  r.exact = true;
  const PValue zero(Rational(0)), one(Rational(1));
  auto track = [&](PValue& slot, const PValue& err) {
    if (!err.is_exact()) r.exact = false;
    if (compare(err, slot) > 0) slot = err;
  };
  std::vector<PValue> inner;
  for (const PValue& x : probability) {
    if (!x.is_exact()) r.exact = false;
    track(r.complement, abs_diff(negate(x), one - x));
    if (compare(x, zero) > 0 && compare(x, one) < 0) inner.push_back(x);
  }
  const std::size_t stride = inner.size() > 2000 ? inner.size() / 2000 + 1 : 1;
  for (std::size_t i = 0; i < inner.size(); i += stride)
    for (std::size_t k = i; k < inner.size(); k += stride) {
      const PValue& x = inner[i];
      const PValue& y = inner[k];
      const PValue nx = negate(x), ny = negate(y);
      if (compare(nx, zero) <= 0) continue;
      const PValue lhs = y * negate(x / y);
      const PValue rhs = nx * negate(ny / nx);
      track(r.functional, abs_diff(lhs, rhs));
      ++r.pairs;
    }
  r.ok = !exceeds(r.functional, tol) && !exceeds(r.complement, tol);
  return r;
}

AdditivityResult check_additivity(const PlausibilityModel& model, std::span<const PValue> probability, double tol,
                                  std::size_t pair_budget) {
  AdditivityResult r;
  r.max_error = PValue(Rational(0));
  r.exact = true;
  for (const PValue& p : probability)
    if (!p.is_exact()) r.exact = false;
  auto prob = [&](std::size_t of, std::size_t given) -> const PValue& { return probability[model.id(of, given)]; };
  auto track = [&](const PValue& err) {
    if (compare(err, r.max_error) > 0) r.max_error = err;
  };
  std::vector<std::size_t> blocks;
  for (const Event& b : model.algebra().blocks()) blocks.push_back(model.index_of(b.mask()));
  const std::size_t n = model.event_count();

  // Givens in order Ω, then by index, until the budget is spent.
  std::vector<std::size_t> givens{model.full_event()};
  for (std::size_t b = 1; b + 1 < n; ++b) givens.push_back(b);
  std::size_t spent = 0, covered = 0;
  for (std::size_t given : givens) {
    if (spent >= pair_budget) break;
    ++covered;
    for (std::size_t a = 0; a < n; ++a) {
      PValue sum(Rational(0));
      for (std::size_t blk : blocks)
        if (model.subset(blk, a)) sum = sum + prob(blk, given);
      track(abs_diff(sum, prob(a, given)));
      ++r.families;
      spent += blocks.size();
    }
    for (std::size_t a1 = 1; a1 < n; ++a1)
      for (std::size_t a2 = a1 + 1; a2 < n; ++a2) {
        if (!model.disjoint(a1, a2)) continue;
        track(abs_diff(prob(model.unite(a1, a2), given), prob(a1, given) + prob(a2, given)));
        ++r.families;
        ++spent;
      }
  }
  if (covered < givens.size())
    r.note = "checked " + std::to_string(covered) + " of " + std::to_string(givens.size()) + " conditioning events";
  r.ok = !exceeds(r.max_error, tol);
  return r;
}

AdditivityResult check_additivity(const PlausibilityModel& model, double tol) {
  return check_additivity(model, model.range(), tol);
}

CountableSpace CountableSpace::geometric(const Rational& ratio) {
  if (ratio <= 0 || ratio >= 1) throw Error(ErrorKind::BadParams, "geometric ratio must lie in (0,1)");
  CountableSpace s;
  s.ratio = ratio;
  s.tail_base = 1 / ratio;
  return s;
}

Rational CountableSpace::parse_tail(const std::string& text) {
  const auto pos = text.find("^-n");
  if (pos == std::string::npos || pos + 3 != text.size())
    throw Error(ErrorKind::InvalidInput, "tail certificate must look like \"b^-n\": " + text);
  const PValue base = PValue::parse(text.substr(0, pos));
  if (!base.is_exact() || base.exact() <= 1)
    throw Error(ErrorKind::InvalidInput, "tail base must be an exact rational above 1: " + text);
  return base.exact();
}

namespace {
Rational rational_pow(const Rational& b, std::size_t e) {
  Rational out(1), base = b;
  for (; e; e >>= 1, base *= base)
    if (e & 1) out *= base;
  return out;
}
}  // namespace

Rational CountableSpace::mass(std::size_t i) const {
  if (i == 0) throw Error(ErrorKind::BadParams, "atoms are numbered from 1");
  return (1 - ratio) * rational_pow(ratio, i - 1);
}

Rational CountableSpace::tail(std::size_t n) const { return 1 / rational_pow(tail_base, n); }

std::string CountableSpace::tail_text() const { return PValue(tail_base).str() + "^-n"; }

CountableAdditivityResult check_countable_additivity(const CountableSpace& space, std::size_t depth,
                                                     std::size_t first) {
  if (first == 0 || depth < first) throw Error(ErrorKind::BadParams, "need 1 <= first <= depth");
  CountableAdditivityResult r;
  // B = {a_first, a_first+1, ...} has mass ratio^(first-1); the union of its
  // atoms is B itself, so P(∪|B) = 1.
  const Rational given = rational_pow(space.ratio, first - 1);
  for (std::size_t i = first; i <= depth; ++i) r.partial_sum += space.mass(i) / given;
  r.gap = 1 - r.partial_sum;
  r.bound = space.tail(depth - first + 1);
  r.ok = r.gap >= 0 && r.gap <= r.bound;
  r.gap_equals_bound = r.gap == r.bound;
  return r;
}

namespace {

KolmogorovVerdicts kolmogorov(const PlausibilityModel& model, std::span<const PValue> probability, double tol) {
  KolmogorovVerdicts k;
  for (std::size_t b = 1; b < model.event_count(); ++b)
    k.k1_error = std::max(k.k1_error, std::fabs(probability[model.id(model.full_event(), b)].approx() - 1.0));
  k.k1 = k.k1_error <= tol;
  k.k2_min = kInf;
  for (const PValue& p : probability) k.k2_min = std::min(k.k2_min, p.approx());
  k.k2 = k.k2_min >= -tol;
  k.additivity = check_additivity(model, probability, tol);
  k.k3 = k.additivity.ok;
  return k;
}

ErrorKind stage_error(const std::string& stage) {
  if (stage == "extension") return ErrorKind::ExtensionInconsistent;
  if (stage.find("associativity") != std::string::npos || stage == "decomposability")
    return ErrorKind::NonAssociativeData;
  return ErrorKind::PreconditionUnmet;
}

void require_suite(const PlausibilityModel& model, const CheckConfig& config) {
  const CheckReport report = run_suite(model, config);
  if (const CheckEntry* f = report.first_failure())
    throw Error(stage_error(f->name), "stage " + f->name + ": " + f->verdict.note);
}

IsomorphismResult direct_embedding(const PlausibilityModel& model, const CheckConfig& config) {
  require_suite(model, config);
  IsomorphismResult r;
  r.route = "direct_embedding";
  const PValue lo = model.value(model.empty_event(), model.full_event());
  const PValue hi = model.value(model.full_event(), model.full_event());
  if (!(compare(hi, lo) > 0)) throw Error(ErrorKind::DegenerateRange, "P(Ω|Ω) does not exceed P(∅|Ω)");
  r.identity = hi.approx();
  r.bottom = lo.approx();
  std::vector<PValue> probability;
  for (const PValue& v : model.range()) probability.push_back((v - lo) / (hi - lo));
  for (const PValue& p : probability) r.probability.push_back(p.approx());
  r.sum_rule = verify_sum_rule(
      model, probability, [](const PValue& x) { return PValue(Rational(1)) - x; }, config.tolerance);
  r.kolmogorov = kolmogorov(model, probability, config.tolerance);
  r.support_size = model.range().size();
  return r;
}

}  // namespace

IsomorphismResult cox_transform(const PlausibilityModel& model, const TransformOptions& options) {
  const CheckConfig& config = options.config;
  if (classify(model) != Classification::General) return direct_embedding(model, config);
  const Operations* ops = model.operations();
  if (!ops) throw Error(ErrorKind::Undetermined, "no composition rule declared; ∘ is needed beyond observed pairs");
  require_suite(model, config);

  IsomorphismResult r;
  r.route = "analytic";
  const DensifiedGrid grid = densified_range(model, config.mesh);
  r.support_size = grid.values.size();
  r.support_mesh = grid.mesh;
  r.bottom = model.value(model.empty_event(), model.full_event()).approx();
  r.identity = model.value(model.full_event(), model.full_event()).approx();
  if (options.reference) {
    r.reference = *options.reference;
  } else {
    const double mid = (r.bottom + r.identity) / 2;
    double best = kInf;
    for (const PValue& v : model.range()) {
      const double x = v.approx();
      if (x > r.bottom && x < r.identity && std::fabs(x - mid) < best) {
        best = std::fabs(x - mid);
        r.reference = x;
      }
    }
  }
  double lowest = r.identity;
  for (double v : grid.values)
    if (v > r.bottom) lowest = std::min(lowest, v);
  const double floor = ops->compose(PValue(lowest), PValue(lowest)).value_or(PValue(r.bottom)).approx();

  const GeneratorFit fit = recover_generator(*ops, r.identity, r.bottom, r.reference, grid.values, floor,
                                             config.dyadic_depth, config.tolerance);
  const Generator& g = fit.generator;
  r.generator_nodes = g.size();
  r.generator_residual = fit.residual;
  r.generator_samples = g.samples(33);
  r.scale = canonical_scale(g);
  const NormalizedTransform T(g, r.scale);

  std::function<double(double)> negate0;
  if (ops->negate(PValue(r.reference))) {
    negate0 = [ops](double x) {
      const auto n = ops->negate(PValue(x));
      if (!n) throw Error(ErrorKind::Undetermined, "N undefined at " + PValue(x).str());
      return n->approx();
    };
  } else {
    const NegationInference neg = infer_negation(model);
    std::vector<std::pair<double, double>> pts;
    for (ValueId x = 0; x < neg.map.range_size(); ++x)
      if (auto nx = neg.map.lookup(x)) pts.emplace_back(model.range()[x].approx(), model.range()[*nx].approx());
    negate0 = interpolate_negation(std::move(pts));
  }
  const ScalingResult sc = scaling_exponent([&](double t) { return T(negate0(T.inverse(t))); }, config.tolerance);
  r.h = sc.h;
  r.m = sc.m;
  auto F = [&](double p) { return std::pow(T(p), r.m); };
  auto F_inv = [&](double t) { return T.inverse(std::pow(t, 1.0 / r.m)); };

  std::vector<PValue> probability;
  for (const PValue& v : model.range()) {
    r.probability.push_back(F(v.approx()));
    probability.emplace_back(r.probability.back());
  }
  const CompositionInference inferred = infer_composition(model, config.enumeration_budget, config.sample_seed);
  for (const auto& [key, entry] : inferred.table.sorted())
    r.product_residual = std::max(r.product_residual, std::fabs(r.probability[entry.z] - r.probability[key.first] *
                                                                                         r.probability[key.second]));
  r.sum_rule = verify_sum_rule(
      model, probability, [&](const PValue& t) { return PValue(F(negate0(F_inv(t.approx())))); }, config.tolerance);
  r.kolmogorov = kolmogorov(model, probability, config.tolerance);
  return r;
}

PlausibilityModel to_probability_model(const PlausibilityModel& model, const IsomorphismResult& result) {
  return PlausibilityModel(
      model.algebra(),
      [&](std::size_t of, std::size_t given) { return PValue(result.probability[model.id(of, given)]); },
      std::make_shared<ScaledProduct>(), model.tolerance());
}

}  // namespace coxkit
