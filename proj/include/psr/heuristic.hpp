// LP-guided construction of feasible restoration schedules, used to seed
// branch-and-bound with an incumbent on instances too large to plunge to
// integrality quickly.
#pragma once

#include <vector>

#include "psr/grid.hpp"
#include "psr/milp.hpp"

namespace psr {

// Build a feasible schedule for the instance produced by build(c, s):
// damaged lines are packed into repair steps in decreasing order of their
// relaxation repair mass, each unit is then energized at the earliest step
// that keeps the schedule feasible and no costlier, and every candidate is
// priced by pinning all binaries and solving the remaining LP. Returns one
// value per instance column, ready for SolveLimits::hint, or an empty vector
// when no feasible schedule was found.
std::vector<double> restoration_hint(const GridCase& c,
                                     const DamageScenario& s,
                                     const MilpInstance& inst);

}  // namespace psr
