// LP entry point and branch-and-bound for the binary variables. Nodes carry
// their parent's optimal basis so child re-solves start a pivot or two from
// feasibility; exploration is best-first by parent bound with a depth-first
// plunge after each branching to find incumbents early. All tie-breaking is
// by creation order, so repeated runs of the same instance are identical.
#include "psr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <memory>
#include <queue>
#include <utility>
#include <vector>

#include "psr/simplex.hpp"

namespace psr {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kBoundSlack = 1e-9;  // absolute floor for prune/stop tests

SolveStatus from_lp(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return SolveStatus::Optimal;
    case LpStatus::Infeasible: return SolveStatus::Infeasible;
    case LpStatus::Unbounded: return SolveStatus::Unbounded;
    default: return SolveStatus::NumericalFailure;
  }
}

struct BBNode {
  long id = 0;
  double bound = -kInf;              // parent LP objective (root: -inf)
  int fix_col = -1;                  // branching decision vs. parent
  double fix_val = 0.0;
  std::shared_ptr<const BBNode> parent;
  std::shared_ptr<const Basis> warm;  // parent's optimal basis
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<const BBNode>& a,
                  const std::shared_ptr<const BBNode>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
    return a->id > b->id;                                  // FIFO on ties
  }
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::GapLimit: return "GapLimit";
    case SolveStatus::NodeLimit: return "NodeLimit";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

Solution solve_lp(const MilpInstance& inst) {
  LpTableau tab(inst);
  const LpResult r = tab.solve();
  Solution s;
  s.status = from_lp(r.status);
  s.x = r.x;
  s.objective = r.objective;
  s.best_bound = r.dual_objective;
  s.gap = 0.0;
  s.nodes = 0;
  s.lp_iterations = r.iterations;
  s.duality_residual = r.duality_residual;
  return s;
}

Solution solve_milp(const MilpInstance& inst, const SolveLimits& limits) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed_s = [&t0]() {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  Solution out;
  std::vector<int> bins;
  for (std::size_t j = 0; j < inst.cols.size(); ++j)
    if (inst.cols[j].integral) bins.push_back(static_cast<int>(j));

  LpTableau tab(inst);
  if (bins.empty()) {
    out = solve_lp(inst);
    out.nodes = 1;
    return out;
  }

  // Branch bounds are applied by walking a node's decision chain and undone
  // after each solve; original binary bounds are all [0, 1].
  auto apply_fixes = [&tab](const BBNode& node) {
    for (const BBNode* p = &node; p; p = p->parent.get())
      if (p->fix_col >= 0)
        tab.set_col_bounds(p->fix_col, p->fix_val, p->fix_val);
  };
  auto undo_fixes = [&tab](const BBNode& node) {
    for (const BBNode* p = &node; p; p = p->parent.get())
      if (p->fix_col >= 0) tab.set_col_bounds(p->fix_col, 0.0, 1.0);
  };

  std::priority_queue<std::shared_ptr<const BBNode>,
                      std::vector<std::shared_ptr<const BBNode>>, NodeOrder>
      open;
  long next_id = 0;
  long next_probe = 1;  // node count that triggers the next rounding probe
  auto root = std::make_shared<BBNode>();
  root->id = next_id++;
  open.push(root);

  double ub = kInf;               // incumbent objective
  std::vector<double> best_x;
  long nodes = 0;
  double max_resid = 0.0;
  bool numerical_failure = false;
  bool hit_nodes = false, hit_time = false;

  // Pin every binary to a rounded candidate point, complete the continuous
  // part with one LP solve, and adopt the result as incumbent if it beats
  // the current one. Restores the binary boxes before returning.
  auto try_candidate = [&](const std::vector<double>& cand) {
    for (int j : bins) {
      const double v = cand[j] >= 0.5 ? 1.0 : 0.0;
      tab.set_col_bounds(j, v, v);
    }
    const LpResult r = tab.solve();
    for (int j : bins) tab.set_col_bounds(j, 0.0, 1.0);
    out.lp_iterations += r.iterations;
    if (r.status != LpStatus::Optimal) return;
    max_resid = std::max(max_resid, r.duality_residual);
    if (r.objective < ub) {
      ub = r.objective;
      best_x = r.x;
    }
  };

  if (limits.hint.size() == inst.cols.size()) try_candidate(limits.hint);

  auto gap_tol = [&limits](double incumbent) {
    return std::max(kBoundSlack,
                    limits.rel_gap * (1.0 + std::fabs(incumbent)));
  };

  // Solve one node's LP; returns the result and counts it.
  auto solve_node = [&](const BBNode& node) {
    apply_fixes(node);
    LpResult r = node.warm ? tab.solve_from(*node.warm) : tab.solve();
    if (r.status == LpStatus::IterationLimit || r.status == LpStatus::Singular)
      r = tab.solve();  // one cold retry before giving up
    undo_fixes(node);
    ++nodes;
    out.lp_iterations += r.iterations;
    if (r.status == LpStatus::Optimal)
      max_resid = std::max(max_resid, r.duality_residual);
    return r;
  };

  // Branching order: repair and energization decisions drive everything else
  // in the schedule, so settle them before the max-selector columns, and
  // settle earlier steps before later ones. Lower rank branches first.
  std::vector<std::pair<int, int>> rank(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const VarRef& ref = inst.cols[bins[k]].ref;
    rank[k] = {ref.kind == VarKind::Eps ? 1 : 0, ref.step};
  }

  auto pick_branch = [&bins, &rank](const std::vector<double>& x) {
    int pick = -1;
    std::pair<int, int> pick_rank{INT_MAX, INT_MAX};
    double best = kIntTol;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const int j = bins[k];
      const double f = x[j] - std::floor(x[j]);
      const double frac = std::min(f, 1.0 - f);
      if (frac <= kIntTol) continue;
      // Most fractional within a rank; strict > keeps the smallest index.
      if (rank[k] < pick_rank || (rank[k] == pick_rank && frac > best)) {
        pick_rank = rank[k];
        best = frac;
        pick = j;
      }
    }
    return pick;
  };

  // Returns the next node to dive into (nullptr ends the plunge).
  auto process = [&](const std::shared_ptr<const BBNode>& node)
      -> std::shared_ptr<const BBNode> {
    if (ub < kInf && node->bound >= ub - gap_tol(ub)) return nullptr;  // prune
    const LpResult r = solve_node(*node);
    if (r.status == LpStatus::Infeasible) return nullptr;
    if (r.status == LpStatus::Unbounded) {
      // Binaries are boxed, so unboundedness lives in the continuous part
      // and no incumbent can exist.
      out.status = SolveStatus::Unbounded;
      numerical_failure = false;
      ub = -kInf;
      return nullptr;
    }
    if (r.status != LpStatus::Optimal) {
      numerical_failure = true;
      return nullptr;
    }
    if (ub < kInf && r.objective >= ub - gap_tol(ub)) return nullptr;

    const int frac = pick_branch(r.x);
    if (frac < 0) {
      // Integral: new incumbent.
      ub = r.objective;
      best_x = r.x;
      return nullptr;
    }
    if (nodes >= next_probe) {
      try_candidate(r.x);
      next_probe = nodes + 64;
      if (ub < kInf && r.objective >= ub - gap_tol(ub)) return nullptr;
    }

    auto basis = std::make_shared<Basis>(tab.save_basis());
    const double rounded = r.x[frac] >= 0.5 ? 1.0 : 0.0;
    auto make_child = [&](double val) {
      auto child = std::make_shared<BBNode>();
      child->id = next_id++;
      child->bound = r.objective;
      child->fix_col = frac;
      child->fix_val = val;
      child->parent = node;
      child->warm = basis;
      return child;
    };
    auto near = make_child(rounded);
    open.push(make_child(1.0 - rounded));
    return near;
  };

  while (!open.empty()) {
    if (limits.max_nodes > 0 && nodes >= limits.max_nodes) {
      hit_nodes = true;
      break;
    }
    if (limits.time_limit_s > 0 && elapsed_s() > limits.time_limit_s) {
      hit_time = true;
      break;
    }
    const double lb = open.top()->bound;
    if (ub < kInf && ub - lb <= gap_tol(ub)) break;  // proven within gap

    std::shared_ptr<const BBNode> node = open.top();
    open.pop();
    // Plunge: follow the round-nearest child depth-first until it dies out.
    while (node) {
      if (limits.max_nodes > 0 && nodes >= limits.max_nodes) {
        hit_nodes = true;
        open.push(node);  // keep it for the reported bound
        break;
      }
      if (limits.time_limit_s > 0 && elapsed_s() > limits.time_limit_s) {
        hit_time = true;
        open.push(node);
        break;
      }
      node = process(node);
      if (numerical_failure || out.status == SolveStatus::Unbounded) break;
    }
    if (numerical_failure || out.status == SolveStatus::Unbounded) break;
    if (hit_nodes || hit_time) break;
  }

  out.nodes = nodes;
  out.duality_residual = max_resid;
  if (out.status == SolveStatus::Unbounded) return out;
  if (numerical_failure) {
    out.status = SolveStatus::NumericalFailure;
    return out;
  }

  double lb = open.empty() ? ub : std::min(ub, open.top()->bound);
  if (ub < kInf) {
    out.objective = ub;
    out.x = std::move(best_x);
    out.best_bound = lb;
    out.gap = std::max(0.0, (ub - lb) / (1.0 + std::fabs(ub)));
    if (hit_nodes)
      out.status = SolveStatus::NodeLimit;
    else if (hit_time)
      out.status = SolveStatus::GapLimit;
    else
      out.status = SolveStatus::Optimal;
  } else {
    out.best_bound = open.empty() ? kInf : lb;
    if (hit_nodes)
      out.status = SolveStatus::NodeLimit;
    else if (hit_time)
      out.status = SolveStatus::GapLimit;
    else
      out.status = SolveStatus::Infeasible;
  }
  return out;
}

}  // namespace psr
