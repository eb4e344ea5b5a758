// JSON loading/saving for cases and scenarios, plus plan/trajectory writers.
// Loaders are strict: unknown fields, missing required fields, and wrong
// types are rejected with messages that name the offending JSON path, and a
// successfully loaded object always passes validation.
#pragma once

#include <stdexcept>
#include <string>

#include "psr/grid.hpp"
#include "psr/model.hpp"

namespace psr {

// Thrown for malformed input files: unreadable, bad JSON, schema violations,
// or contents that fail validation.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

GridCase parse_case(const std::string& json_text);
GridCase load_case(const std::string& path);

// The scenario is interpreted against its case: damaged line ids must exist,
// and a missing horizon defaults from the damage count and budget.
DamageScenario parse_scenario(const std::string& json_text, const GridCase& c);
DamageScenario load_scenario(const std::string& path, const GridCase& c);

std::string case_to_json(const GridCase& c);
std::string scenario_to_json(const DamageScenario& s);
void write_case(const std::string& path, const GridCase& c);
void write_scenario(const std::string& path, const DamageScenario& s);

// Per-step summary table. Fixed header:
//   step,total_unserved_MW,lines_repaired,nbs_energized
// where the counts are this step's repairs and the cumulative number of
// energized units. Numbers use shortest round-trip formatting ("%.9g").
std::string trajectory_csv(const RestorationPlan& plan);
void write_trajectory(const std::string& path, const RestorationPlan& plan);

std::string plan_to_json(const RestorationPlan& plan);
void write_plan(const std::string& path, const RestorationPlan& plan);

// Writes via a temporary file in the same directory followed by a rename, so
// readers never observe a half-written file. Throws std::runtime_error when
// the destination is not writable.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace psr
