#pragma once

#include "coxkit/extension.hpp"

#include <functional>
#include <span>

namespace coxkit {

/// Additive generator of an associative, cancellative, continuous ∘ with
/// identity e: x ∘ y = g⁻¹(g(x) + g(y)), g(e) = 0, g(reference) = −1.
///
/// g is tabulated on dyadic rationals: the reference is repeatedly ∘-halved
/// (bisection for t with t∘t = s), the finest root is ∘-iterated, and g is
/// extended between nodes by monotone piecewise-linear interpolation in the
/// chart ξ = ln(x − bottom), where multiplicative ∘ has a linear generator.
class Generator {
 public:
  Generator(std::vector<double> nodes, std::vector<double> levels, double identity, double bottom,
            double reference);

  /// g(x) for x in [lowest node, e]; -inf at the bottom value.
  double operator()(double x) const;
  /// g⁻¹(v) for v in [lowest level, 0].
  double inverse(double v) const;

  double identity() const noexcept { return identity_; }
  double bottom() const noexcept { return bottom_; }
  double reference() const noexcept { return reference_; }
  double lowest_node() const noexcept { return nodes_.front(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  /// Up to `count` (x, g(x)) samples spread evenly over the node table.
  std::vector<std::pair<double, double>> samples(std::size_t count) const;

 private:
  std::vector<double> nodes_;   // ascending x
  std::vector<double> chart_;   // ln(x − bottom) per node
  std::vector<double> levels_;  // ascending g(x) = −q
  double identity_, bottom_, reference_;
};

struct GeneratorFit {
  Generator generator;
  /// max |g(x∘y) − g(x) − g(y)| over support pairs inside the node range.
  double residual = 0.0;
  std::size_t pairs = 0;
};

/// Recovers g from ∘ (via `ops`) on [bottom, identity]. The node table covers
/// values down to `floor`; the residual is measured on all pairs of `support`.
/// Throws NonAssociativeData when the residual exceeds `tol` or the dyadic
/// nodes fail to be strictly monotone.
GeneratorFit recover_generator(const Operations& ops, double identity, double bottom, double reference,
                               std::span<const double> support, double floor, unsigned dyadic_depth = 16,
                               double tol = kDefaultTolerance);

/// Normalized exponential of a rescaled generator:
///   T(p) = (exp(c·g(p)) − T_min) / (T_max − T_min),
/// with c chosen so that T(reference) = (reference − bottom)/(e − bottom).
/// Under that convention a model whose ∘ is already multiplication on [0,1]
/// is mapped by the identity.
class NormalizedTransform {
 public:
  NormalizedTransform(const Generator& g, double scale);
  double operator()(double p) const;
  double inverse(double t) const;
  double scale() const noexcept { return scale_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

 private:
  const Generator* g_;
  double scale_;
  double min_, max_;
};

/// Canonical scale c = −ln((r − bottom)/(e − bottom)). Throws DegenerateRange
/// if e = bottom.
double canonical_scale(const Generator& g);

struct ScalingResult {
  double h = 0.0;  // N(h) = h
  double m = 0.0;  // h^m = 1/2
};

/// Fixed point of a continuous strictly decreasing N on [0,1] by bisection,
/// and the exponent m with h^m = 1/2. Throws NoFixedPoint otherwise.
ScalingResult scaling_exponent(const std::function<double(double)>& negation, double tol = kDefaultTolerance);

/// Piecewise-linear interpolant through observed (t, N(t)) pairs.
std::function<double(double)> interpolate_negation(std::vector<std::pair<double, double>> points);

struct SumRuleResidual {
  bool ok = true;
  /// max |y·N(x/y) − N(x)·N(N(y)/N(x))| over observed 0 < x ≤ y < 1.
  PValue functional;
  /// max |N(x) − (1 − x)| over observed x.
  PValue complement;
  std::size_t pairs = 0;
  bool exact = false;
};

/// Checks the sum-rule functional equation on a model already on [0,1].
/// `probability[id]` gives the transformed value of each range id and `negate`
/// the transformed negation. Arithmetic is exact when every operand is.
SumRuleResidual verify_sum_rule(const PlausibilityModel& model, std::span<const PValue> probability,
                                const std::function<PValue(const PValue&)>& negate, double tol = kDefaultTolerance);

struct AdditivityResult {
  bool ok = true;
  PValue max_error;
  std::size_t families = 0;
  bool exact = false;
  std::string note;
};

/// Finite additivity: P(A|B) = Σ P(block|B) over the blocks of A, and
/// P(A₁∪A₂|B) = P(A₁|B) + P(A₂|B) for disjoint pairs (sampled above budget).
AdditivityResult check_additivity(const PlausibilityModel& model, std::span<const PValue> probability,
                                  double tol = kDefaultTolerance, std::size_t pair_budget = 2'000'000);
/// Same on the model's own values.
AdditivityResult check_additivity(const PlausibilityModel& model, double tol = kDefaultTolerance);

/// Countably-atomic space with atom masses (1 − ρ)ρ^(i−1), i ≥ 1, and an
/// analytic tail certificate "b^-n": the mass beyond atom n is at most b^−n.
struct CountableSpace {
  Rational ratio{1, 2};
  Rational tail_base{2};

  static CountableSpace geometric(const Rational& ratio);
  /// Parses "b^-n".
  static Rational parse_tail(const std::string& text);
  Rational mass(std::size_t i) const;
  Rational tail(std::size_t n) const;
  std::string tail_text() const;
};

struct CountableAdditivityResult {
  bool ok = true;
  Rational partial_sum;  // Σ_{i=k}^{n} P(a_i | B)
  Rational gap;          // P(∪|B) − partial sum
  Rational bound;        // certified tail for this truncation
  bool gap_equals_bound = false;
};

/// Truncated countable additivity for B = {a_k, a_{k+1}, …} at depth n ≥ k.
CountableAdditivityResult check_countable_additivity(const CountableSpace& space, std::size_t depth,
                                                     std::size_t first = 1);

struct KolmogorovVerdicts {
  bool k1 = true, k2 = true, k3 = true;
  double k1_error = 0.0;
  double k2_min = 0.0;
  AdditivityResult additivity;
};

/// Final output of the pipeline: the isomorphism and the probability table.
struct IsomorphismResult {
  std::string route;  // "analytic" or "direct_embedding"
  double identity = 1.0, bottom = 0.0;
  double reference = 0.0;
  double scale = 1.0;
  double h = 0.5, m = 1.0;
  std::vector<std::pair<double, double>> generator_samples;
  std::size_t generator_nodes = 0;
  double generator_residual = 0.0;
  double product_residual = 0.0;  // max |F(x∘y) − F(x)F(y)| on observed entries
  SumRuleResidual sum_rule;
  KolmogorovVerdicts kolmogorov;
  std::size_t support_size = 0;
  double support_mesh = 0.0;
  /// Transformed value per range id of the input model.
  std::vector<double> probability;
};

struct TransformOptions {
  CheckConfig config;
  /// Reference value for g(r) = −1; defaults to the observed value closest to
  /// the middle of the range.
  std::optional<double> reference;
};

/// Full pipeline. Degenerate and trivial models are embedded directly.
/// Throws Error carrying the first failing stage otherwise.
IsomorphismResult cox_transform(const PlausibilityModel& model, const TransformOptions& options = {});

/// Probability model on the same algebra from a transform result (float values,
/// standard operations), e.g. to re-run the pipeline on its own output.
PlausibilityModel to_probability_model(const PlausibilityModel& model, const IsomorphismResult& result);

}  // namespace coxkit
