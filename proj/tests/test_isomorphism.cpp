#include "coxkit/gallery.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace coxkit;

namespace {

// Monotone, identity-preserving, not associative.
class SkewProduct final : public Operations {
 public:
  std::optional<PValue> compose(const PValue& x, const PValue& y) const override {
    const double a = x.approx(), b = y.approx();
    return PValue(a * b * (1.0 + 0.5 * (1.0 - a) * (1.0 - b) * (a - b)));
  }
  std::optional<PValue> negate(const PValue& x) const override { return PValue(1.0 - x.approx()); }
  std::string name() const override { return "skew"; }
};

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
  return out;
}

}  // namespace

TEST_CASE("generator of multiplication is log base 2 of x") {
  const ScaledProduct mult;
  const auto grid = log_grid(std::ldexp(1.0, -10), 1.0, 100);
  const auto fit = recover_generator(mult, 1.0, 0.0, 0.5, grid, std::ldexp(1.0, -21));
  CHECK(fit.residual <= 1e-9);
  CHECK(fit.pairs > 0);
  for (double x : grid) CHECK(std::fabs(fit.generator(x) - std::log2(x)) <= 1e-6);
  for (double v : {-0.25, -3.5, -9.75}) CHECK(fit.generator.inverse(v) == doctest::Approx(std::exp2(v)).epsilon(1e-9));
  CHECK(fit.generator(0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("generator of a scaled product on [0, 2]") {
  const ScaledProduct scaled(PValue(Rational(2)));
  const auto grid = log_grid(0.01, 2.0, 50);
  const auto fit = recover_generator(scaled, 2.0, 0.0, 1.0, grid, 1e-5);
  for (double x : grid) CHECK(std::fabs(fit.generator(x) - std::log2(x / 2.0)) <= 1e-6);
}

TEST_CASE("non-associative composition is rejected by the residual") {
  const SkewProduct skew;
  const auto grid = log_grid(0.05, 1.0, 40);
  try {
    recover_generator(skew, 1.0, 0.0, 0.5, grid, 1e-3);
    FAIL("expected NonAssociativeData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonAssociativeData);
  }
}

TEST_CASE("fixed point and exponent of negation functions") {
  auto r1 = scaling_exponent([](double t) { return 1.0 - t; });
  CHECK(r1.h == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r1.m == doctest::Approx(1.0).epsilon(1e-12));
  auto r2 = scaling_exponent([](double t) { return std::pow(1.0 - std::sqrt(t), 2.0); });
  CHECK(std::fabs(r2.h - 0.25) <= 1e-12);
  CHECK(std::fabs(r2.m - 0.5) <= 1e-12);
  CHECK_THROWS_AS(scaling_exponent([](double t) { return t; }), Error);
  const auto n = interpolate_negation({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
  CHECK(n(0.25) == doctest::Approx(0.75));
}

TEST_CASE("sum rule holds exactly on the die and fails for a wrong negation") {
  const auto die = build_gallery("fair_die").model;
  const auto exact = verify_sum_rule(*die, die->range(), [](const PValue& x) { return PValue(Rational(1)) - x; });
  CHECK(exact.ok);
  CHECK(exact.exact);
  CHECK(exact.functional.str() == "0");
  CHECK(exact.complement.str() == "0");
  const auto wrong = verify_sum_rule(*die, die->range(), [](const PValue& x) { return PValue(Rational(1)) - x * x; });
  CHECK_FALSE(wrong.ok);
}

TEST_CASE("finite additivity is exact on random measures and fails off-scale") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 8; ++round) {
    const auto m = oracle::random_measure(rng, 2 + round % 4);
    std::vector<PValue> masses;
    for (const auto& q : m) masses.emplace_back(q);
    const auto r = check_additivity(measure_model(masses));
    CHECK(r.ok);
    CHECK(r.exact);
    CHECK(r.max_error.str() == "0");
  }
  const auto sq = build_gallery("transform:square:fair_die").model;
  CHECK_FALSE(check_additivity(*sq).ok);
}

TEST_CASE("countable additivity against the tail certificate") {
  const CountableSpace half;
  const auto r = check_countable_additivity(half, 20);
  CHECK(r.ok);
  CHECK(r.gap == Rational(1, 1 << 20));
  CHECK(r.gap_equals_bound);
  const auto shifted = check_countable_additivity(half, 20, 5);
  CHECK(shifted.ok);
  CHECK(shifted.gap == Rational(1, 1 << 16));
  CountableSpace overclaimed = half;
  overclaimed.tail_base = CountableSpace::parse_tail("4^-n");
  CHECK_FALSE(check_countable_additivity(overclaimed, 20).ok);
  CHECK_THROWS_AS(CountableSpace::parse_tail("2^n"), Error);
  CHECK(CountableSpace::geometric(Rational(1, 3)).mass(2) == Rational(2, 9));
}

TEST_CASE("transform of the die is the identity and of the squared die is the square root") {
  const auto die = build_gallery("fair_die").model;
  const auto r = cox_transform(*die);
  CHECK(r.route == "analytic");
  for (std::size_t i = 0; i < die->range().size(); ++i)
    CHECK(std::fabs(r.probability[i] - die->range()[i].approx()) <= 1e-12);
  const auto sq = build_gallery("transform:square:fair_die").model;
  const auto s = cox_transform(*sq);
  CHECK(std::fabs(s.h - 0.25) <= 1e-9);
  CHECK(std::fabs(s.m - 0.5) <= 1e-9);
  for (std::size_t i = 0; i < sq->range().size(); ++i)
    CHECK(std::fabs(s.probability[i] - std::sqrt(sq->range()[i].approx())) <= 1e-9);
}

TEST_CASE("the pipeline is idempotent on its own output") {
  const auto sq = build_gallery("transform:square:uniform:3").model;
  const auto first = cox_transform(*sq);
  const auto prob = to_probability_model(*sq, first);
  const auto second = cox_transform(prob);
  for (std::size_t a = 0; a < prob.event_count(); ++a)
    for (std::size_t b = 1; b < prob.event_count(); ++b)
      CHECK(std::fabs(second.probability[prob.id(a, b)] - prob.value(a, b).approx()) <= 1e-9);
}

TEST_CASE("degenerate and trivial structures are embedded directly") {
  for (const char* name : {"degenerate", "trivial_two_valued"}) {
    const auto m = build_gallery(name).model;
    const auto r = cox_transform(*m);
    CAPTURE(name);
    CHECK(r.route == "direct_embedding");
    CHECK(r.kolmogorov.k1);
    CHECK(r.kolmogorov.k2);
    CHECK(r.kolmogorov.k3);
    CHECK(r.kolmogorov.additivity.max_error.str() == "0");
  }
}

TEST_CASE("pipeline stops at the first failing stage") {
  auto kind_of = [](const char* name) {
    try {
      cox_transform(*build_gallery(name).model);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  CHECK(kind_of("perturbed:fair_die:1/100") == ErrorKind::NonAssociativeData);
  CHECK(kind_of("min_table") == ErrorKind::PreconditionUnmet);
  CHECK(kind_of("counterexample:4:1") == ErrorKind::ExtensionInconsistent);
}
