// MILP engine: LP relaxation by bounded-variable primal simplex,
// deterministic best-first branch-and-bound with depth-first plunging,
// and LP-format text export.
#pragma once

#include <string>
#include <vector>

#include "psr/milp.hpp"

namespace psr {

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  GapLimit,    // stopped by the time limit before closing the gap
  NodeLimit,   // stopped by the node budget
  NumericalFailure,
};

const char* to_string(SolveStatus s);

struct SolveLimits {
  double rel_gap = 1e-6;    // stop when (obj - bound) <= rel_gap * (1 + |obj|)
  long max_nodes = 0;       // 0 = unlimited
  double time_limit_s = 0;  // 0 = no time limit
  // Optional warm-start point (one value per column). Binary entries are
  // rounded, pinned, and completed by a single LP solve; if that LP is
  // feasible its solution seeds the incumbent before the search starts.
  // Ignored when empty, mis-sized, or infeasible.
  std::vector<double> hint;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<double> x;  // one value per instance column
  double objective = 0.0;
  // LP: dual objective from the final basis. MILP: global best bound.
  double best_bound = 0.0;
  double gap = 0.0;   // (objective - best_bound) / (1 + |objective|)
  long nodes = 0;     // branch-and-bound nodes solved (0 for plain LP)
  long lp_iterations = 0;
  // |primal - dual| certificate from the final basis of each LP solve;
  // for MILP runs this is the maximum over all node solves.
  double duality_residual = 0.0;
};

// Solve the LP relaxation (integrality dropped). The final basis is
// re-factorized and the solution recomputed from it, so row residuals and
// bound violations come out at numerical accuracy, well inside 1e-8.
Solution solve_lp(const MilpInstance& inst);

// Exact deterministic branch-and-bound over the binary columns.
// Branching: repair/energization classes before selector columns and earlier
// steps first, most-fractional within a class, ties by smallest column index.
// Node order: best-first on parent bounds with depth-first plunging.
// Incumbents come from integral node relaxations, from the optional hint in
// the limits, and from periodic all-binary rounding probes.
// Identical instance + limits reproduce identical values and node counts.
Solution solve_milp(const MilpInstance& inst, const SolveLimits& limits = {});

// Deterministic LP-format (CPLEX-style) rendering of an instance; column
// names come from var_name(). Re-rendering an unchanged instance is
// byte-identical.
std::string render_lp(const MilpInstance& inst);

// Write render_lp() output to a file. Throws std::runtime_error when the
// path is not writable.
void export_lp(const MilpInstance& inst, const std::string& path);

}  // namespace psr
