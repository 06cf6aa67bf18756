#include "coxkit/gallery.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace coxkit;

TEST_CASE("dice pair: every atom of the product has probability 1/36") {
  const auto item = build_gallery("dice_pair");
  REQUIRE(item.product);
  const ProductStructure& pair = *item.product;
  CHECK(pair.report().ok());
  REQUIRE(pair.algebra());
  CHECK(pair.algebra()->space().size() == 36);
  const std::size_t omega = item.model->full_event();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto v = pair.value({std::size_t{1} << i, std::size_t{1} << j}, {omega, omega});
      REQUIRE(v);
      CHECK(v->is_exact());
      CHECK(v->str() == "1/36");
    }
}

TEST_CASE("three-fold die product agrees with the oracle on random rectangles") {
  const auto die = build_gallery("fair_die").model;
  const ProductStructure cube(*die, 3);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, 63), given(1, 63);
  for (int k = 0; k < 500; ++k) {
    Rectangle of{pick(rng), pick(rng), pick(rng)}, on{given(rng), given(rng), given(rng)};
    const auto v = cube.value(of, on);
    REQUIRE(v);
    CHECK(v->exact() == oracle::uniform_rectangle({of[0], of[1], of[2]}, {on[0], on[1], on[2]}));
    CHECK(cube.value_right(of, on)->exact() == v->exact());
  }
  REQUIRE(cube.algebra());
  CHECK_FALSE(cube.algebra()->materialized());
}

TEST_CASE("extension refuses undeclared rules and inconsistent products") {
  const auto die = build_gallery("fair_die").model;
  const auto bare = die->with_operations(nullptr);
  CHECK_THROWS_WITH_AS(extend(bare, 2), doctest::Contains("Undetermined"), Error);
  const auto ce = build_gallery("counterexample:4:1").model;
  try {
    extend(*ce, 3);
    FAIL("expected ExtensionInconsistent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExtensionInconsistent);
  }
}

TEST_CASE("unconstrained associativity through the three-fold product") {
  CHECK(check_associativity_unconstrained(*build_gallery("fair_die").model).ok);
  const Verdict v = check_associativity_unconstrained(*build_gallery("counterexample:4:1").model);
  REQUIRE_FALSE(v.ok);
  REQUIRE(v.events.size() == 4);
}

TEST_CASE("repeated events on the die: v_i = 2^-i exactly") {
  const auto die = build_gallery("fair_die").model;
  const auto r = repeated_event_convergence(*die, 0b000111, die->full_event(), 64);
  REQUIRE(r.values.size() == 64);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    REQUIRE(r.values[i].is_exact());
    CHECK(r.values[i].exact() == oracle::Q(1) / oracle::Q(boost::multiprecision::cpp_int(1) << (i + 1)));
  }
  CHECK(r.values[19].str() == "1/1048576");
  CHECK(r.strictly_decreasing);
  CHECK(r.converges);
  CHECK(r.delta.str() == "0");
  CHECK(r.bottom.str() == "0");
  const std::string csv = r.csv();
  CHECK(csv.rfind("i,v_i\n1,1/2\n2,1/4\n", 0) == 0);
  CHECK_THROWS_AS(repeated_event_convergence(*die, die->full_event(), die->full_event()), Error);
}

TEST_CASE("densified range reaches the mesh and keeps observed values") {
  for (const char* name : {"fair_die", "transform:square:fair_die", "uniform:2"}) {
    const auto model = build_gallery(name).model;
    const auto grid = densified_range(*model, 0.01);
    CAPTURE(name);
    CHECK(grid.mesh <= 0.01);
    CHECK(std::is_sorted(grid.values.begin(), grid.values.end()));
    for (const auto& v : model->range())
      CHECK(std::binary_search(grid.values.begin(), grid.values.end(), v.approx()));
  }
  CHECK_THROWS_AS(densified_range(*build_gallery("trivial_two_valued").model, 0.01), Error);
}
