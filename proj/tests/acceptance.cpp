// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "coxkit/io.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>

using namespace coxkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Criterion {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

Criterion fair_die_suite() {
  Criterion c;
  const auto t = Clock::now();
  const auto die = build_gallery("fair_die").model;
  const CheckReport report = run_suite(*die);
  for (const auto& e : report.entries) {
    c.require(e.status == Status::Pass, e.name + " is " + to_string(e.status));
    c.require(e.arithmetic == "exact", e.name + " ran in " + e.arithmetic);
  }
  c.require(check_additivity(*die).max_error.str() == "0", "additivity residual is not zero");
  const double s = seconds_since(t);
  c.require(s < 10.0, "took " + std::to_string(s) + " s");
  if (c.ok) c.detail = std::to_string(report.entries.size()) + " checks, exact, " + std::to_string(s) + " s";
  return c;
}

Criterion dice_pair() {
  Criterion c;
  const auto t = Clock::now();
  const auto item = build_gallery("dice_pair");
  const std::size_t omega = item.model->full_event();
  std::size_t atoms = 0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto v = item.product->value({std::size_t{1} << i, std::size_t{1} << j}, {omega, omega});
      c.require(v && v->is_exact() && v->exact() == oracle::Q(1, 36), "atom value is not 1/36");
      ++atoms;
    }
  c.require(atoms == 36 && item.product->algebra()->space().size() == 36, "product does not have 36 atoms");
  c.require(item.product->report().ok(), "product checks: " + item.product->report().first_failure());
  const double s = seconds_since(t);
  c.require(s < 60.0, "took " + std::to_string(s) + " s");
  if (c.ok) c.detail = "36 atoms at 1/36, rectangle checks pass, " + std::to_string(s) + " s";
  return c;
}

Criterion round_trip() {
  Criterion c;
  std::mt19937_64 rng(0xC0C5);
  const char* transforms[] = {"identity", "square", "double"};
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const std::size_t atoms = 3 + static_cast<std::size_t>(k % 4);
    const auto m = oracle::random_measure(rng, atoms);
    std::vector<PValue> masses;
    for (const auto& q : m) masses.emplace_back(q);
    const auto base = measure_model(masses);
    const auto model = transform_model(base, ValueTransform::parse(transforms[k % 3]));
    try {
      const auto r = cox_transform(model);
      for (std::size_t b = 1; b < model.event_count(); ++b)
        for (std::size_t a = 0; a < model.event_count(); ++a) {
          const double expected = oracle::conditional(m, a, b).convert_to<double>();
          worst = std::max(worst, std::fabs(r.probability[model.id(a, b)] - expected));
        }
    } catch (const Error& e) {
      c.require(false, "model " + std::to_string(k) + ": " + e.what());
    }
  }
  c.require(worst <= 1e-6, "sup-norm error " + std::to_string(worst));
  const auto sq = cox_transform(*build_gallery("transform:square:fair_die").model);
  c.require(std::fabs(sq.h - 0.25) <= 1e-9, "h = " + std::to_string(sq.h));
  c.require(std::fabs(sq.m - 0.5) <= 1e-9, "m = " + std::to_string(sq.m));
  if (c.ok) {
    std::ostringstream d;
    d << "30 models, sup error " << worst << "; squared die h = " << sq.h << ", m = " << sq.m;
    c.detail = d.str();
  }
  return c;
}

Criterion generator_fidelity() {
  Criterion c;
  const ScaledProduct mult;
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(std::exp2(-10.0 + 10.0 * i / 99.0));
  const auto fit = recover_generator(mult, 1.0, 0.0, 0.5, grid, std::exp2(-21.0));
  double worst = 0.0, residual = 0.0;
  for (double x : grid) worst = std::max(worst, std::fabs(fit.generator(x) - std::log2(x)));
  for (double x : grid)
    for (double y : grid)
      residual = std::max(residual, std::fabs(fit.generator(x * y) - fit.generator(x) - fit.generator(y)));
  c.require(worst <= 1e-6, "max |g - log2| = " + std::to_string(worst));
  c.require(residual <= 1e-9, "residual " + std::to_string(residual));
  if (c.ok) {
    std::ostringstream d;
    d << "max |g - log2| " << worst << ", residual " << residual;
    c.detail = d.str();
  }
  return c;
}

Criterion sum_rule() {
  Criterion c;
  double functional = 0.0, complement = 0.0;
  std::size_t models = 0;
  for (const auto& entry : gallery_catalog()) {
    if (entry.expected == "pass" || entry.expected == "direct_embedding") {
      const auto item = build_gallery(entry.name);
      const auto r = cox_transform(*item.model);
      c.require(r.sum_rule.pairs > 0 || r.route == "direct_embedding", entry.name + ": no observed pairs");
      functional = std::max(functional, r.sum_rule.functional.approx());
      complement = std::max(complement, r.sum_rule.complement.approx());
      ++models;
    }
  }
  c.require(functional <= 1e-9, "functional residual " + std::to_string(functional));
  c.require(complement <= 1e-9, "complement residual " + std::to_string(complement));
  if (c.ok) {
    std::ostringstream d;
    d << models << " models, functional " << functional << ", complement " << complement;
    c.detail = d.str();
  }
  return c;
}

Criterion convergence() {
  Criterion c;
  const auto die = build_gallery("fair_die").model;
  const auto r = repeated_event_convergence(*die, 0b000111, die->full_event(), 64);
  for (std::size_t i = 0; i < r.values.size(); ++i)
    c.require(r.values[i].is_exact() &&
                  r.values[i].exact() == oracle::Q(1) / oracle::Q(boost::multiprecision::cpp_int(1) << (i + 1)),
              "v_" + std::to_string(i + 1) + " = " + r.values[i].str());
  c.require(r.values.size() >= 20 && r.values[19].str() == "1/1048576", "v_20 is not 2^-20");
  c.require(r.strictly_decreasing && r.converges, "no convergence verdict: " + r.note);
  c.require(r.delta.str() == die->value(die->empty_event(), die->full_event()).str(), "delta is not P(∅|Ω)");
  if (c.ok) c.detail = "v_i = 2^-i for i <= 64, v_20 = 1/1048576, delta = 0";
  return c;
}

Criterion counterexamples() {
  Criterion c;
  std::ostringstream d;
  for (unsigned k = 1; k <= 5; ++k) {
    CounterexampleOptions options;
    options.values = k;
    options.seed = 1;
    options.seconds = 60.0;
    const auto t = Clock::now();
    try {
      const auto search = search_counterexample(options);
      d << "K=" << k << ": ";
      if (!search.found) {
        d << "none up to " << options.max_atoms << " atoms (" << search.nodes << " nodes); ";
        continue;
      }
      const auto& found = *search.found;
      const CheckReport report = run_suite(*found.model);
      c.require(report.find("constrained_associativity")->status == Status::Pass, "constrained check fails");
      c.require(report.find("unconstrained_associativity")->status == Status::Fail, "unconstrained check passes");
      bool inconsistent = false;
      try {
        extend(*found.model, 3);
      } catch (const Error& e) {
        inconsistent = e.kind() == ErrorKind::ExtensionInconsistent;
      }
      c.require(inconsistent, "extend(., 3) does not fail");
      const auto replay = search_counterexample(options);
      c.require(replay.found && dump(counterexample_to_json(*replay.found)) == dump(counterexample_to_json(found)),
                "replay differs");
      d << "found, replay identical; ";
    } catch (const Error& e) {
      c.require(e.kind() == ErrorKind::ExhaustedBudget, std::string("K=") + std::to_string(k) + ": " + e.what());
      d << "K=" << k << ": ExhaustedBudget; ";
    }
    c.require(seconds_since(t) < 300.0, "K=" + std::to_string(k) + " exceeded 5 min");
  }
  if (c.ok) {
    c.detail = d.str();
    c.detail.resize(c.detail.size() - 2);
  }
  return c;
}

Criterion additivity() {
  Criterion c;
  std::mt19937_64 rng(404);
  for (int k = 0; k < 10; ++k) {
    std::vector<PValue> masses;
    for (const auto& q : oracle::random_measure(rng, 2 + k % 5)) masses.emplace_back(q);
    const auto r = check_additivity(measure_model(masses));
    c.require(r.exact && r.max_error.str() == "0" && r.note.empty(), "random measure " + std::to_string(k));
  }
  c.require(check_additivity(*build_gallery("fair_die").model).max_error.str() == "0", "fair die");
  const auto geo = build_gallery("geometric:5");
  const auto r = check_countable_additivity(*geo.countable, 20);
  c.require(r.ok && r.gap == Rational(1, 1 << 20) && r.gap_equals_bound, "gap " + PValue(r.gap).str());
  if (c.ok) c.detail = "zero error on 11 measures; geometric gap at n = 20 is " + PValue(r.gap).str();
  return c;
}

Criterion negative_controls() {
  Criterion c;
  const auto bad = build_gallery("perturbed:fair_die:1/100").model;
  const CheckReport report = run_suite(*bad);
  const CheckEntry* dec = report.find("decomposability");
  c.require(dec->status == Status::Fail, "perturbed die passes decomposability");
  if (dec->status == Status::Fail) {
    const auto& e = dec->verdict.events;
    c.require(e.size() == 6, "witness is not two triples");
    if (e.size() == 6) {
      const auto& m = *bad;
      c.require(m.id(e[0], e[2]) == m.id(e[3], e[5]) &&
                    m.id(e[1], m.intersect(e[0], e[2])) == m.id(e[4], m.intersect(e[3], e[5])) &&
                    m.id(m.intersect(e[0], e[1]), e[2]) != m.id(m.intersect(e[3], e[4]), e[5]),
                "witness does not replay");
    }
  }
  c.require(run_suite(*build_gallery("min_table").model).find("cancellativity")->status == Status::Fail,
            "min table passes cancellativity");
  for (const char* name : {"degenerate", "trivial_two_valued"}) {
    const auto r = cox_transform(*build_gallery(name).model);
    c.require(r.route == "direct_embedding", std::string(name) + " not embedded directly");
    c.require(r.kolmogorov.k1 && r.kolmogorov.k2 && r.kolmogorov.k3, std::string(name) + " fails K1-K3");
  }
  if (c.ok) c.detail = "perturbed die, min table, degenerate and trivial behave as documented";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, Criterion (*)()> criteria[] = {
      {"fair die suite exact", fair_die_suite},
      {"dice pair product", dice_pair},
      {"round-trip isomorphism", round_trip},
      {"generator fidelity", generator_fidelity},
      {"sum-rule residual", sum_rule},
      {"repeated-event convergence", convergence},
      {"counterexample search", counterexamples},
      {"additivity", additivity},
      {"negative controls", negative_controls},
  };
  bool all = true;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Criterion c;
    const auto t = Clock::now();
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = e.what();
    }
    all = all && c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << index++ << " " << name << ": " << c.detail << " ["
              << std::fixed << std::setprecision(1) << seconds_since(t) << " s]" << std::defaultfloat << std::endl;
  }
  return all ? 0 : 1;
}
