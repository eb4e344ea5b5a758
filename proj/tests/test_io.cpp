#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "psr/io.hpp"

using namespace psr;

namespace {

const char* kChainCaseJson = R"({
  "name": "chain3",
  "buses": [
    {"id": "b1", "demand": 0},
    {"id": "b2", "demand": 20},
    {"id": "b3", "demand": 0}
  ],
  "lines": [
    {"id": "L1", "from": "b1", "to": "b2", "f_min": -100, "f_max": 100},
    {"id": "L2", "from": "b2", "to": "b3", "f_min": -100, "f_max": 100}
  ],
  "generators": [
    {"id": "gbs", "bus": "b1", "kind": "BS", "p_min": 0, "p_max": 40},
    {"id": "gnbs", "bus": "b3", "kind": "NBS", "p_min": 0, "p_max": 100}
  ]
})";

std::string temp_dir() {
  auto d = std::filesystem::temp_directory_path() / "psr_io_test";
  std::filesystem::create_directories(d);
  return d.string();
}

}  // namespace

TEST_CASE("case JSON parses to the fixture") {
  const GridCase c = parse_case(kChainCaseJson);
  CHECK(c == fixtures::chain3());
}

TEST_CASE("case round-trips exactly") {
  const GridCase c = fixtures::chain3();
  CHECK(parse_case(case_to_json(c)) == c);

  GridCase odd = c;
  odd.description = "with odd numbers";
  odd.buses[1].demand = 20.000000000000004;  // not representable in short form
  odd.lines[0].susceptance = 2.5;
  odd.generators[1].crank_fraction = 0.225;
  CHECK(parse_case(case_to_json(odd)) == odd);
}

TEST_CASE("scenario round-trips exactly") {
  const GridCase c = fixtures::chain3();
  DamageScenario s = fixtures::chain3_scenario(2, 3);
  s.demand_profile[{"b2", 2}] = 12.5;
  s.demand_profile[{"b2", 3}] = 0.0;
  CHECK(parse_scenario(scenario_to_json(s), c) == s);
}

TEST_CASE("strict parsing rejects malformed input with a path") {
  SUBCASE("not JSON at all") {
    CHECK_THROWS_AS(parse_case("{nope"), ParseError);
  }
  SUBCASE("unknown field names the path") {
    try {
      parse_case(R"({"buses": [], "lines": [], "generators": [], "voltage": 5})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("voltage") != std::string::npos);
    }
  }
  SUBCASE("missing required field") {
    try {
      parse_case(R"({"buses": [{"id": "b1"}], "lines": [], "generators": []})");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("demand") != std::string::npos);
      CHECK(msg.find("buses[0]") != std::string::npos);
    }
  }
  SUBCASE("wrong type") {
    CHECK_THROWS_AS(
        parse_case(
            R"({"buses": [{"id": 7, "demand": 0}], "lines": [], "generators": []})"),
        ParseError);
  }
  SUBCASE("bad generator kind") {
    CHECK_THROWS_AS(
        parse_case(
            R"({"buses": [{"id": "b", "demand": 0}], "lines": [],
                "generators": [{"id": "g", "bus": "b", "kind": "XX",
                                "p_min": 0, "p_max": 1}]})"),
        ParseError);
  }
  SUBCASE("contents failing validation are rejected at load time") {
    CHECK_THROWS_AS(
        parse_case(
            R"({"buses": [{"id": "b", "demand": -3}], "lines": [], "generators": []})"),
        ParseError);
  }
}

TEST_CASE("scenario parsing") {
  const GridCase c = fixtures::chain3();

  SUBCASE("defaults the horizon from damage count and budget") {
    const DamageScenario s =
        parse_scenario(R"({"damaged_lines": ["L1", "L2"], "budget": 1})", c);
    CHECK(s.horizon == 4);  // ceil(2/1) + 2
  }
  SUBCASE("explicit horizon kept") {
    const DamageScenario s = parse_scenario(
        R"({"damaged_lines": ["L1"], "budget": 1, "horizon": 6})", c);
    CHECK(s.horizon == 6);
  }
  SUBCASE("demand profile is keyed by bus then step") {
    const DamageScenario s = parse_scenario(
        R"({"damaged_lines": [], "budget": 1, "horizon": 3,
            "demand_profile": {"b2": {"2": 7.5}}})",
        c);
    REQUIRE(s.demand_profile.size() == 1);
    CHECK(s.demand_profile.at({"b2", 2}) == doctest::Approx(7.5));
  }
  SUBCASE("unknown damaged line rejected") {
    CHECK_THROWS_AS(
        parse_scenario(R"({"damaged_lines": ["zz"], "budget": 1})", c),
        ParseError);
  }
  SUBCASE("non-integer step key rejected") {
    CHECK_THROWS_AS(
        parse_scenario(R"({"damaged_lines": [], "budget": 1, "horizon": 2,
                           "demand_profile": {"b2": {"two": 5}}})",
                       c),
        ParseError);
  }
  SUBCASE("unknown scenario field rejected") {
    CHECK_THROWS_AS(
        parse_scenario(R"({"damaged_lines": [], "budget": 1, "weather": 1})",
                       c),
        ParseError);
  }
}

TEST_CASE("file loading errors carry the file path") {
  try {
    load_case("/definitely/not/here.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/definitely/not/here.json") !=
          std::string::npos);
  }
}

TEST_CASE("atomic write replaces the destination completely") {
  const std::string dir = temp_dir();
  const std::string path = dir + "/file.txt";
  atomic_write(path, "first version");
  atomic_write(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK(!std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("atomic write to an unwritable location throws") {
  CHECK_THROWS_AS(atomic_write("/nonexistent_dir_xyz/file.txt", "data"),
                  std::runtime_error);
}

TEST_CASE("trajectory CSV has the pinned header and cumulative energized") {
  RestorationPlan plan;
  plan.case_name = "demo";
  PlanStep s1;
  s1.step = 1;
  s1.total_unserved = 52.125;
  s1.lines_repaired = {"L1", "L2"};
  PlanStep s2;
  s2.step = 2;
  s2.total_unserved = 0.0;
  s2.nbs_energized = {"g2"};
  plan.steps = {s1, s2};
  CHECK(trajectory_csv(plan) ==
        "step,total_unserved_MW,lines_repaired,nbs_energized\n"
        "1,52.125,2,0\n"
        "2,0,0,1\n");
}

TEST_CASE("plan JSON carries schedule and per-step detail") {
  RestorationPlan plan;
  plan.case_name = "demo";
  plan.status = "Optimal";
  plan.objective = 10.0;
  plan.energized_at["g2"] = 2;
  PlanStep s1;
  s1.step = 1;
  s1.lines_repaired = {"L1"};
  s1.total_unserved = 10.0;
  s1.unserved["b3"] = 10.0;
  s1.dispatch["gbs"] = 20.0;
  s1.flows["L1"] = 20.0;
  plan.steps = {s1};
  const std::string text = plan_to_json(plan);
  CHECK(text.find("\"case\": \"demo\"") != std::string::npos);
  CHECK(text.find("\"energized_at\"") != std::string::npos);
  CHECK(text.find("\"L1\"") != std::string::npos);

  // Identical plans render identical bytes.
  CHECK(plan_to_json(plan) == text);
}

TEST_CASE("bundled data files load and validate") {
  const std::string dir = PSR_DATA_DIR;
  const GridCase c3 = load_case(dir + "/case3.json");
  CHECK(c3.buses.size() == 3);
  CHECK(c3.lines.size() == 2);
  CHECK(c3.generators.size() == 2);
  const DamageScenario s3 = load_scenario(dir + "/scenario3.json", c3);
  CHECK(s3.damaged_line_ids.size() == 2);
  CHECK(s3.budget == 1);
  CHECK(s3.horizon == 3);

  const GridCase c9 = load_case(dir + "/case9.json");
  CHECK(c9.buses.size() == 9);
  CHECK(c9.lines.size() == 9);
  CHECK(c9.generators.size() == 3);
  const DamageScenario s9 = load_scenario(dir + "/scenario9_all.json", c9);
  CHECK(s9.damaged_line_ids.size() == 9);
  CHECK(s9.budget == 3);
  CHECK(s9.horizon == 4);

  const GridCase c39 = load_case(dir + "/case39.json");
  CHECK(c39.buses.size() == 39);
  CHECK(c39.lines.size() == 46);
  CHECK(c39.generators.size() == 10);
  const DamageScenario s39 = load_scenario(dir + "/scenario39_all.json", c39);
  CHECK(s39.damaged_line_ids.size() == 46);
  CHECK(s39.budget == 10);

  const GridCase c113 = load_case(dir + "/case113.json");
  CHECK(c113.buses.size() == 113);
  CHECK(c113.lines.size() >= 113);
  const DamageScenario s113 = load_scenario(dir + "/scenario113.json", c113);
  CHECK(s113.budget == 30);
  CHECK(s113.horizon == 10);

  // Round-trip the big case to exercise the writer on real data.
  CHECK(parse_case(case_to_json(c39)) == c39);
}
