#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "psr/grid.hpp"

using namespace psr;

TEST_CASE("validate accepts the chain fixture") {
  const GridCase c = fixtures::chain3();
  CHECK(validate(c).empty());
  const DamageScenario s = fixtures::chain3_scenario(1);
  CHECK(validate(c, s).empty());
}

TEST_CASE("validate flags structural problems with locations") {
  GridCase c = fixtures::chain3();

  SUBCASE("duplicate bus id") {
    c.buses.push_back({"b1", 5.0});
    const auto r = validate(c);
    REQUIRE(!r.empty());
    bool found = false;
    for (const auto& iss : r)
      if (iss.where.find("b1") != std::string::npos) found = true;
    CHECK(found);
  }
  SUBCASE("negative demand") {
    c.buses[1].demand = -1.0;
    CHECK(!validate(c).empty());
  }
  SUBCASE("line endpoint missing") {
    c.lines[0].to = "nowhere";
    CHECK(!validate(c).empty());
  }
  SUBCASE("self-loop") {
    c.lines[0].to = c.lines[0].from;
    CHECK(!validate(c).empty());
  }
  SUBCASE("flow limits must bracket zero") {
    c.lines[0].f_min = 5.0;  // > 0
    CHECK(!validate(c).empty());
    c.lines[0].f_min = -10.0;
    c.lines[0].f_max = -1.0;  // < 0
    CHECK(!validate(c).empty());
  }
  SUBCASE("generator bus missing") {
    c.generators[0].bus = "ghost";
    CHECK(!validate(c).empty());
  }
  SUBCASE("p_min above p_max") {
    c.generators[0].p_min = 99.0;
    c.generators[0].p_max = 10.0;
    CHECK(!validate(c).empty());
  }
  SUBCASE("idle unit needs positive capacity and crank fraction") {
    c.generators[1].p_max = 0.0;
    c.generators[1].p_min = 0.0;
    CHECK(!validate(c).empty());
    c.generators[1].p_max = 50.0;
    c.generators[1].crank_fraction = 0.0;
    CHECK(!validate(c).empty());
  }
  SUBCASE("two idle units on one bus rejected") {
    Generator extra = c.generators[1];
    extra.id = "gnbs2";
    c.generators.push_back(extra);
    CHECK(!validate(c).empty());
  }
  SUBCASE("idle unit may not share its bus with any other generator") {
    Generator extra = c.generators[0];
    extra.id = "gbs2";
    extra.bus = "b3";
    c.generators.push_back(extra);
    CHECK(!validate(c).empty());
  }
}

TEST_CASE("scenario validation") {
  const GridCase c = fixtures::chain3();
  DamageScenario s = fixtures::chain3_scenario(1);

  SUBCASE("unknown damaged line") {
    s.damaged_line_ids.push_back("L99");
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("duplicate damaged line") {
    s.damaged_line_ids.push_back("L1");
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("budget must be positive") {
    s.budget = 0;
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("horizon must be positive") {
    s.horizon = 0;
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("demand override outside horizon") {
    s.demand_profile[{"b2", 7}] = 5.0;
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("demand override for unknown bus") {
    s.demand_profile[{"bX", 1}] = 5.0;
    CHECK(!validate(c, s).empty());
  }
  SUBCASE("negative demand override") {
    s.demand_profile[{"b2", 1}] = -2.0;
    CHECK(!validate(c, s).empty());
  }
}

TEST_CASE("cranking power is the fraction of capacity") {
  const GridCase c = fixtures::chain3();
  CHECK(cranking_power(c.generators[1]) == doctest::Approx(10.0));
  CHECK_THROWS_AS(cranking_power(c.generators[0]), std::invalid_argument);
}

TEST_CASE("demand override wins over the base value") {
  const GridCase c = fixtures::chain3();
  DamageScenario s = fixtures::chain3_scenario(1);
  CHECK(demand_at(c, s, "b2", 1) == doctest::Approx(20.0));
  s.demand_profile[{"b2", 2}] = 35.0;
  CHECK(demand_at(c, s, "b2", 1) == doctest::Approx(20.0));
  CHECK(demand_at(c, s, "b2", 2) == doctest::Approx(35.0));
  CHECK(demand_at(c, s, "b2", 3) == doctest::Approx(20.0));
}

TEST_CASE("default horizon leaves two settling steps after the last repair") {
  // ceil(damaged/budget) + 2
  CHECK(default_horizon(0, 3) == 2);
  CHECK(default_horizon(1, 1) == 3);
  CHECK(default_horizon(9, 3) == 5);
  CHECK(default_horizon(10, 3) == 6);
  CHECK(default_horizon(46, 10) == 7);
  CHECK_THROWS_AS(default_horizon(4, 0), std::invalid_argument);
}

TEST_CASE("equality is field-by-field") {
  const GridCase a = fixtures::chain3();
  GridCase b = fixtures::chain3();
  CHECK(a == b);
  b.lines[0].f_max += 1.0;
  CHECK(!(a == b));
}
