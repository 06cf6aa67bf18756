#include "coxkit/event_algebra.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace coxkit;

TEST_CASE("pvalue parses exact and float forms") {
  CHECK(PValue::parse("3/6").is_exact());
  CHECK(PValue::parse("3/6").str() == "1/2");
  CHECK(PValue::parse("-2").exact() == Rational(-2));
  CHECK_FALSE(PValue::parse("0.25").is_exact());
  CHECK(PValue::parse("0.25").approx() == 0.25);
  CHECK_THROWS_AS(PValue::parse("1/0"), Error);
  CHECK_THROWS_AS(PValue::parse("half"), Error);
}

TEST_CASE("pvalue arithmetic stays exact until a float enters") {
  const PValue a = PValue::ratio(1, 3), b = PValue::ratio(1, 6);
  CHECK((a + b).str() == "1/2");
  CHECK((a * b).str() == "1/18");
  CHECK(((a - b) / b).str() == "1");
  CHECK_FALSE((a * PValue(0.5)).is_exact());
  CHECK(sqrt(PValue::ratio(4, 9)).str() == "2/3");
  CHECK(cbrt(PValue::ratio(8, 27)).str() == "2/3");
  CHECK_FALSE(sqrt(PValue::ratio(1, 2)).is_exact());
  CHECK(sqrt(PValue::ratio(1, 2)).approx() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("power algebra enumerates every subset with index equal to mask") {
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(4));
  const EventAlgebra alg = build_power_algebra(space);
  REQUIRE(alg.event_count() == 16);
  CHECK(alg.is_power_set());
  for (std::size_t i = 0; i < 16; ++i) CHECK(alg.events()[i].mask() == i);
  CHECK_THROWS_AS(build_power_algebra(std::make_shared<const AtomSpace>(AtomSpace::numbered(13))), Error);
}

TEST_CASE("closure verdict agrees with the brute-force oracle on random collections") {
  std::mt19937_64 rng(11);
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(4));
  for (int round = 0; round < 300; ++round) {
    std::vector<oracle::Mask> masks{0, 15};
    std::uniform_int_distribution<int> pick(1, 14), count(0, 5);
    for (int k = count(rng); k > 0; --k) masks.push_back(static_cast<oracle::Mask>(pick(rng)));
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<Event> events;
    for (auto m : masks) events.push_back(Event::from_mask(4, m));
    const bool expected = oracle::is_algebra(masks, 15);
    CHECK(verify_algebra_closure(*space, events).ok == expected);
    if (expected) {
      const auto alg = EventAlgebra::from_events(space, events);
      CHECK(alg.event_count() == masks.size());
    } else {
      CHECK_THROWS_AS(EventAlgebra::from_events(space, events), Error);
    }
  }
}

TEST_CASE("sub-algebra blocks and membership") {
  auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(4));
  const auto alg = EventAlgebra::from_blocks(space, {Event::from_mask(4, 0b0011), Event::from_mask(4, 0b1100)});
  CHECK(alg.event_count() == 4);
  CHECK(alg.nondegenerate());
  CHECK_FALSE(alg.is_power_set());
  CHECK(alg.contains(Event::from_mask(4, 0b1100)));
  CHECK_FALSE(alg.contains(Event::from_mask(4, 0b0100)));
  CHECK(alg.index_of(Event::from_mask(4, 0b1111)) == alg.full_index());
}

TEST_CASE("product algebra is the rectangle-generated algebra") {
  auto s2 = std::make_shared<const AtomSpace>(AtomSpace::numbered(2));
  auto s3 = std::make_shared<const AtomSpace>(AtomSpace::numbered(3));
  const auto prod = product_algebra(build_power_algebra(s2), build_power_algebra(s3));
  CHECK(prod.space().size() == 6);
  CHECK(prod.blocks().size() == 6);
  CHECK(prod.space().label(4) == "2⊗2");
  // A coarse factor only splits the product into its own blocks.
  const auto coarse = EventAlgebra::from_blocks(s2, {Event::full(2)});
  CHECK(product_algebra(coarse, build_power_algebra(s3)).blocks().size() == 3);
}
