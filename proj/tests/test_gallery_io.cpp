#include "coxkit/io.hpp"

#include <doctest.h>

using namespace coxkit;

namespace {

bool expectation_met(const GalleryEntry& entry) {
  const GalleryItem item = build_gallery(entry.name);
  const CheckReport report = run_suite(*item.model);
  if (entry.expected == "pass") return report.all_pass() && (!item.product || item.product->report().ok());
  if (entry.expected == "direct_embedding") {
    const CheckEntry* e = report.find("direct_embedding");
    return e && e->status == Status::Pass;
  }
  const CheckEntry* e = report.find(entry.expected.substr(5));
  return e && e->status == Status::Fail;
}

Json two_atom_file() {
  return Json::parse(R"({
    "atoms": ["h", "t"], "powerset": true, "rule": "standard",
    "plausibility": [
      {"of": [], "given": ["h"], "value": 0}, {"of": ["h"], "given": ["h"], "value": 1},
      {"of": ["t"], "given": ["h"], "value": 0}, {"of": ["h","t"], "given": ["h"], "value": 1},
      {"of": [], "given": ["t"], "value": 0}, {"of": ["h"], "given": ["t"], "value": 0},
      {"of": ["t"], "given": ["t"], "value": 1}, {"of": ["h","t"], "given": ["t"], "value": 1},
      {"of": [], "given": ["h","t"], "value": 0}, {"of": ["h"], "given": ["h","t"], "value": "1/3"},
      {"of": ["t"], "given": ["h","t"], "value": "2/3"}, {"of": ["h","t"], "given": ["h","t"], "value": 1}
    ]})");
}

ErrorKind load_error(const Json& j) {
  try {
    load_model(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Undetermined;
}

}  // namespace

TEST_CASE("every catalog entry meets its documented outcome") {
  for (const auto& entry : gallery_catalog()) {
    CAPTURE(entry.name);
    CHECK(expectation_met(entry));
  }
}

TEST_CASE("gallery names and parameters") {
  CHECK(build_gallery("uniform:4").model->event_count() == 16);
  CHECK(build_gallery("geometric:3").countable_depth == 3);
  CHECK(build_gallery("transform:cube:uniform:2").model->operations()->name() == "transform:cube");
  CHECK_THROWS_WITH_AS(build_gallery("loaded_die"), doctest::Contains("UnknownName"), Error);
  CHECK_THROWS_WITH_AS(build_gallery("uniform:x"), doctest::Contains("BadParams"), Error);
  CHECK_THROWS_WITH_AS(build_gallery("geometric:12"), doctest::Contains("BadParams"), Error);
  CHECK_THROWS_WITH_AS(build_gallery("transform:cubic:fair_die"), doctest::Contains("UnknownName"), Error);
}

TEST_CASE("model files load and serialize back to the same model") {
  const GalleryItem item = load_model(two_atom_file());
  const auto& m = *item.model;
  CHECK(m.exact());
  CHECK(m.value(0b01, 0b11).str() == "1/3");
  CHECK(run_suite(m).all_pass());
  for (const char* name : {"fair_die", "degenerate", "min_table", "geometric:3"}) {
    const GalleryItem g = build_gallery(name);
    const Json j = model_to_json(*g.model, g.countable, g.countable_depth);
    const GalleryItem back = load_model(j);
    CAPTURE(name);
    CHECK(model_to_json(*back.model, back.countable, back.countable_depth) == j);
    CHECK(run_suite(*back.model).to_json() == run_suite(*g.model).to_json());
  }
}

TEST_CASE("malformed model files are input errors") {
  Json missing = two_atom_file();
  missing["plausibility"].erase(missing["plausibility"].begin());
  CHECK(load_error(missing) == ErrorKind::InvalidInput);

  Json duplicate = two_atom_file();
  duplicate["plausibility"].push_back(duplicate["plausibility"][0]);
  CHECK(load_error(duplicate) == ErrorKind::InvalidInput);

  Json unknown_atom = two_atom_file();
  unknown_atom["plausibility"][0]["given"] = Json::array({"x"});
  CHECK(load_error(unknown_atom) == ErrorKind::InvalidInput);

  Json not_algebra = two_atom_file();
  not_algebra.erase("powerset");
  not_algebra["events"] = Json::parse(R"([[], ["h"], ["h","t"]])");
  CHECK(load_error(not_algebra) == ErrorKind::InvalidInput);

  Json bad_rule = two_atom_file();
  bad_rule["rule"] = "fuzzy";
  CHECK(load_error(bad_rule) == ErrorKind::UnknownName);

  Json bad_value = two_atom_file();
  bad_value["plausibility"][9]["value"] = "1/0";
  CHECK(load_error(bad_value) == ErrorKind::InvalidInput);
}

TEST_CASE("counterexample search: found at four values, replays byte-identically") {
  CounterexampleOptions options;
  options.values = 4;
  options.seed = 3;
  const auto first = search_counterexample(options);
  REQUIRE(first.found);
  const auto again = search_counterexample(options);
  REQUIRE(again.found);
  CHECK(dump(counterexample_to_json(*first.found)) == dump(counterexample_to_json(*again.found)));

  const CheckReport report = run_suite(*first.found->model);
  CHECK(report.find("constrained_associativity")->status == Status::Pass);
  CHECK(report.find("unconstrained_associativity")->status == Status::Fail);
  // The stored structure reloads to the same failing model.
  const GalleryItem reloaded = load_model(counterexample_to_json(*first.found)["structure"]);
  CHECK_FALSE(check_associativity_unconstrained(*reloaded.model).ok);
}

TEST_CASE("counterexample search: none for two values, budget exhaustion is reported") {
  CounterexampleOptions two;
  two.values = 2;
  const auto none = search_counterexample(two);
  CHECK_FALSE(none.found);
  CHECK(none.space_exhausted);
  CHECK_FALSE(search_counterexample(CounterexampleOptions{1, 1, 3, 10, 60.0}).found);

  CounterexampleOptions tiny;
  tiny.values = 5;
  tiny.node_budget = 1;
  try {
    search_counterexample(tiny);
    FAIL("expected ExhaustedBudget");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExhaustedBudget);
  }
}
