// Core grid-restoration domain types: buses, lines, generators, damage
// scenarios, and the validation rules that make a case admissible.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace psr {

enum class GenKind { BlackStart, NonBlackStart };

struct Bus {
  std::string id;
  double demand = 0.0;  // native MW demand, >= 0

  bool operator==(const Bus&) const = default;
};

struct Line {
  std::string id;
  std::string from;  // bus id
  std::string to;    // bus id, != from
  double f_min = 0.0;  // <= 0
  double f_max = 0.0;  // >= 0
  // Used only by the optional angle-coupled mode; ignored otherwise.
  double susceptance = 1.0;

  bool operator==(const Line&) const = default;
};

struct Generator {
  std::string id;
  std::string bus;  // hosting bus id
  GenKind kind = GenKind::BlackStart;
  double p_min = 0.0;  // 0 <= p_min <= p_max
  double p_max = 0.0;  // > 0 for non-black-start units
  // Cranking power of a non-black-start unit is crank_fraction * p_max.
  double crank_fraction = 0.1;

  bool operator==(const Generator&) const = default;
};

struct GridCase {
  std::string name;
  std::string description;  // free text; bundled synthetic cases say so here
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;

  const Bus* find_bus(const std::string& id) const;
  const Line* find_line(const std::string& id) const;
  const Generator* find_generator(const std::string& id) const;

  bool operator==(const GridCase&) const = default;
};

struct DamageScenario {
  std::vector<std::string> damaged_line_ids;  // subset of case line ids
  int budget = 1;   // max lines repaired per step, >= 1
  int horizon = 1;  // number of steps T, >= 1
  // Optional per-(bus id, step) demand overrides, step in 1..horizon.
  // Pairs not named here fall back to the bus's native demand.
  std::map<std::pair<std::string, int>, double> demand_profile;

  bool operator==(const DamageScenario&) const = default;
};

struct ValidationIssue {
  std::string where;    // e.g. "line 7" or "scenario.budget"
  std::string message;  // human-readable rule violation
};
using ValidationReport = std::vector<ValidationIssue>;

// Structural admissibility of a case alone, and of a case + scenario pair.
// Violations are returned as data; an empty report means admissible.
// Both overloads are pure and idempotent.
ValidationReport validate(const GridCase& c);
ValidationReport validate(const GridCase& c, const DamageScenario& s);

// Cranking power demanded by a non-black-start unit while it is being
// energized. Throws std::invalid_argument for black-start units.
double cranking_power(const Generator& g);

// Effective demand of a bus at a step, honoring scenario overrides.
double demand_at(const GridCase& c, const DamageScenario& s,
                 const std::string& bus_id, int step);

// Default schedule length when a scenario does not pin one:
// ceil(|damaged| / budget) + 2.
int default_horizon(std::size_t damaged_count, int budget);

}  // namespace psr
