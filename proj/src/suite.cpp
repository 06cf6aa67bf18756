#include "coxkit/suite.hpp"

#include <chrono>

namespace coxkit {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "skipped";
}

bool CheckReport::all_pass() const { return first_failure() == nullptr; }

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

const CheckEntry* CheckReport::first_failure() const {
  for (const auto& e : entries)
    if (e.status == Status::Fail) return &e;
  return nullptr;
}

Json CheckReport::to_json(bool timing) const {
  Json j;
  j["classification"] = to_string(classification);
  j["all_pass"] = all_pass();
  j["sample_seed"] = sample_seed;
  Json checks = Json::array();
  for (const auto& e : entries) {
    Json c;
    c["name"] = e.name;
    c["status"] = to_string(e.status);
    c["arithmetic"] = e.arithmetic;
    c["result"] = coxkit::to_json(e.verdict);
    if (timing) c["seconds"] = e.seconds;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  return j;
}

namespace {

class Runner {
 public:
  Runner(CheckReport& report, const PlausibilityModel& model) : report_(report), model_(model) {}

  template <typename F>
  bool run(const std::string& name, std::initializer_list<const char*> requires_, F&& body) {
    CheckEntry entry;
    entry.name = name;
    entry.arithmetic = model_.arithmetic();
    for (const char* dep : requires_) {
      const CheckEntry* d = report_.find(dep);
      if (!d || d->status != Status::Pass) {
        entry.status = Status::Skipped;
        entry.verdict.note = std::string("prerequisite ") + dep + " did not pass";
        report_.entries.push_back(std::move(entry));
        return false;
      }
    }
    const auto start = std::chrono::steady_clock::now();
    entry.verdict = body();
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!entry.verdict.ok) entry.status = Status::Fail;
    else if (entry.verdict.checked == 0 && entry.verdict.skipped > 0) entry.status = Status::Skipped;
    else entry.status = Status::Pass;
    const bool passed = entry.status == Status::Pass;
    report_.entries.push_back(std::move(entry));
    return passed;
  }

  void skip(const std::string& name, const std::string& note) {
    CheckEntry entry;
    entry.name = name;
    entry.status = Status::Skipped;
    entry.arithmetic = model_.arithmetic();
    entry.verdict.note = note;
    report_.entries.push_back(std::move(entry));
  }

 private:
  CheckReport& report_;
  const PlausibilityModel& model_;
};

Verdict from_conflicts(const std::vector<Conflict>& conflicts, const PlausibilityModel& model, bool composition,
                       std::size_t checked) {
  Verdict v;
  v.checked = checked;
  if (conflicts.empty()) return v;
  const Conflict& c = conflicts.front();
  v.ok = false;
  v.note = (composition ? "∘ is not a function: " : "N is not a function: ") + c.describe(model, composition);
  v.events = {c.first.a, c.first.b};
  if (composition) v.events.push_back(c.first.c);
  if (c.second) {
    v.events.push_back(c.second->a);
    v.events.push_back(c.second->b);
    if (composition) v.events.push_back(c.second->c);
  }
  if (c.x != kNoValue) v.values.push_back(model.range()[c.x]);
  if (c.y != kNoValue) v.values.push_back(model.range()[c.y]);
  v.values.push_back(model.range()[c.z_first]);
  if (c.z_second != kNoValue) v.values.push_back(model.range()[c.z_second]);
  if (c.expected) v.values.push_back(*c.expected);
  v.witness["conflicts"] = conflicts.size();
  return v;
}

}  // namespace

CheckReport run_suite(const PlausibilityModel& model, const CheckConfig& config) {
  CheckReport report;
  report.sample_seed = config.sample_seed;
  report.classification = classify(model);
  Runner run(report, model);

  run.run("algebra_closure", {}, [&] {
    Verdict v;
    const auto& events = model.algebra().events();
    const auto closure = verify_algebra_closure(model.algebra().space(), events);
    v.ok = closure.ok;
    v.checked = events.size();
    v.note = closure.message;
    if (closure.first) v.events.push_back(*closure.first);
    if (closure.second) v.events.push_back(*closure.second);
    v.witness["events"] = events.size();
    v.witness["nondegenerate"] = model.algebra().nondegenerate();
    return v;
  });
  run.run("classification", {}, [&] {
    Verdict v;
    v.checked = 1;
    v.note = to_string(report.classification);
    if (auto pair = intermediate_pair(model)) v.events = {pair->first, pair->second};
    return v;
  });
  run.run("inclusion_monotonicity", {}, [&] { return check_inclusion_monotonicity(model); });

  CompositionInference composition;
  run.run("decomposability", {}, [&] {
    composition = infer_composition(model, config.enumeration_budget, config.sample_seed);
    Verdict v = from_conflicts(composition.conflicts, model, true, composition.triples);
    v.sampled = composition.sampled;
    v.witness["entries"] = composition.table.size();
    return v;
  });
  run.run("negation", {}, [&] {
    const auto negation = infer_negation(model);
    Verdict v = from_conflicts(negation.conflicts, model, false, model.range().size());
    if (!v.ok) return v;
    // Involution wherever both images are observed.
    for (ValueId x = 0; x < negation.map.range_size(); ++x) {
      const auto nx = negation.map.lookup(x);
      if (!nx) continue;
      const auto nnx = negation.map.lookup(*nx);
      if (nnx && *nnx != x) {
        v.ok = false;
        v.values = {model.range()[x], model.range()[*nx], model.range()[*nnx]};
        v.note = "N(N(" + v.values[0].str() + ")) = " + v.values[2].str();
        const auto [a, b] = negation.map.witness(x);
        v.events = {a, b};
        return v;
      }
    }
    return v;
  });

  if (report.classification != Classification::General) {
    for (const char* name : {"composition_monotonicity", "cancellativity", "identity", "constrained_associativity",
                             "extension", "unconstrained_associativity", "repeated_event_convergence"})
      run.skip(name, std::string(to_string(report.classification)) + " structure: embedded directly");
    run.run("direct_embedding", {"algebra_closure", "inclusion_monotonicity", "decomposability", "negation"}, [&] {
      Verdict v;
      v.checked = 1;
      v.note = std::string(to_string(report.classification)) + " structure is isomorphic to conditional probability";
      return v;
    });
    return report;
  }

  run.run("composition_monotonicity", {"decomposability"},
          [&] { return check_composition_monotonicity(composition.table, model); });
  run.run("cancellativity", {"decomposability"}, [&] { return check_cancellativity(composition.table, model); });
  run.run("identity", {"decomposability"}, [&] { return find_identity(composition.table, model); });
  run.run("constrained_associativity", {"decomposability"},
          [&] { return check_associativity_constrained(composition.table, model, config); });
  run.run("extension",
          {"inclusion_monotonicity", "negation", "composition_monotonicity", "cancellativity", "identity",
           "constrained_associativity"},
          [&] {
            Verdict v;
            if (!model.operations()) {
              v.skipped = 1;
              v.note = "no composition rule declared; the product needs ∘ beyond observed pairs";
              return v;
            }
            ProductStructure product(model, 2);
            const auto ext = examine_extension(product, config);
            v.ok = ext.ok();
            v.sampled = true;
            for (const auto& [name, sub] : ext.checks) v.checked += sub.checked;
            v.note = ext.ok() ? (ext.undetermined ? "∘ undefined on some product values" : "") : ext.first_failure();
            v.witness = ext.to_json();
            return v;
          });
  run.run("unconstrained_associativity", {"constrained_associativity"},
          [&] { return check_associativity_unconstrained(model, config); });
  run.run("repeated_event_convergence", {"identity", "cancellativity", "composition_monotonicity"}, [&] {
    Verdict v;
    if (!model.operations()) {
      v.skipped = 1;
      v.note = "no composition rule declared";
      return v;
    }
    const auto pair = intermediate_pair(model);
    const auto result = repeated_event_convergence(model, pair->first, pair->second, config.i_max,
                                                   config.convergence_tol);
    v.ok = result.converges && result.strictly_decreasing;
    v.checked = result.values.size();
    v.note = result.note;
    v.events = {pair->first, pair->second};
    v.values = {result.values.front(), result.values.back(), result.delta};
    return v;
  });
  return report;
}

}  // namespace coxkit
