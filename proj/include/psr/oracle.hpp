// Reference optimizer for small instances: enumerate every budget-respecting
// repair and energization schedule outright, price each one by pinning all
// schedule decisions in the optimization model and solving the remaining LP,
// then keep the cheapest schedule whose priced flows really deliver the
// cranking power at the claimed energization step. Branch-and-bound never
// runs here, so the result certifies the full search on guarded sizes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psr/grid.hpp"

namespace psr {

// Enumeration is exponential; refuse instances beyond these sizes.
struct SizeGuard {
  std::size_t max_damaged_lines = 6;
  int max_steps = 4;
  std::size_t max_nbs_units = 2;
};

// One complete schedule: when each damaged line is repaired and when each
// non-black-start unit first absorbs cranking power (0 = never).
struct ScheduleAtom {
  std::map<std::string, int> repair_step;    // damaged line id -> step, 0 never
  std::map<std::string, int> energize_step;  // NBS generator id -> step, 0 never
};

struct OracleResult {
  double objective = 0.0;
  ScheduleAtom schedule;
  std::size_t atoms_examined = 0;   // schedules enumerated
  std::size_t atoms_feasible = 0;   // schedules with a consistent pricing LP
};

// Throws std::invalid_argument when the instance exceeds the guard or fails
// validation; throws std::runtime_error if no schedule at all is consistent
// (cannot happen for validated inputs: the never-repair schedule is).
OracleResult enumerate_optimal(const GridCase& c, const DamageScenario& s,
                               const SizeGuard& guard = {});

struct CrossCheck {
  bool ok = false;
  double milp_objective = 0.0;
  double oracle_objective = 0.0;
  double difference = 0.0;  // |milp - oracle|
  std::string detail;
};

// Solves the instance with the production pipeline and compares objectives
// against the enumerated optimum at |milp - oracle| <= 1e-6 * (1 + |oracle|).
CrossCheck cross_check(const GridCase& c, const DamageScenario& s,
                       const SizeGuard& guard = {});

}  // namespace psr
