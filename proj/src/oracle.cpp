// Reference optimizer by exhaustive schedule enumeration. Every candidate
// schedule (who repairs what when, when each non-black-start unit flips on)
// fixes all binary columns of the production model; the remaining LP prices
// the schedule. The LP matrix never changes between atoms — only bounds do —
// so consecutive atoms re-solve from the previous optimal basis in a few
// pivots, which is what makes full enumeration affordable.
//
// Each priced atom is additionally re-checked on the LP solution itself: at
// the claimed energization step the net inflow into the unit's bus must
// equal its cranking power; atoms violating that are rejected rather than
// trusted.
#include "psr/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "psr/milp.hpp"
#include "psr/model.hpp"
#include "psr/simplex.hpp"
#include "psr/solver.hpp"

namespace psr {

namespace {

struct NbsInfo {
  std::string gen_id;
  std::string bus;
  double crank;
};

}  // namespace

OracleResult enumerate_optimal(const GridCase& c, const DamageScenario& s,
                               const SizeGuard& guard) {
  {
    const auto report = validate(c, s);
    if (!report.empty())
      throw std::invalid_argument("oracle: inputs failed validation: " +
                                  report.front().where + ": " +
                                  report.front().message);
  }
  const int T = s.horizon;
  std::vector<NbsInfo> nbs;
  for (const auto& g : c.generators)
    if (g.kind == GenKind::NonBlackStart)
      nbs.push_back({g.id, g.bus, cranking_power(g)});
  if (s.damaged_line_ids.size() > guard.max_damaged_lines)
    throw std::invalid_argument("oracle: damaged line count " +
                                std::to_string(s.damaged_line_ids.size()) +
                                " exceeds guard " +
                                std::to_string(guard.max_damaged_lines));
  if (T > guard.max_steps)
    throw std::invalid_argument("oracle: horizon " + std::to_string(T) +
                                " exceeds guard " +
                                std::to_string(guard.max_steps));
  if (nbs.size() > guard.max_nbs_units)
    throw std::invalid_argument("oracle: non-black-start unit count " +
                                std::to_string(nbs.size()) +
                                " exceeds guard " +
                                std::to_string(guard.max_nbs_units));

  // Damaged lines in case order (canonical, independent of listing order).
  std::vector<std::string> damaged;
  for (const auto& l : c.lines)
    for (const auto& id : s.damaged_line_ids)
      if (l.id == id) damaged.push_back(id);

  const MilpInstance inst = build(c, s);
  LpTableau tab(inst);

  // Column ids for everything an atom pins: repair binaries, energization
  // status, and the max-selector choice.
  std::vector<std::vector<int>> bcol(damaged.size());
  for (std::size_t d = 0; d < damaged.size(); ++d) {
    bcol[d].resize(T + 1, -1);
    for (int t = 1; t <= T; ++t)
      bcol[d][t] = inst.col({VarKind::LineBuild, damaged[d], t});
  }
  std::vector<std::vector<int>> mucol(nbs.size());
  std::vector<std::vector<std::vector<int>>> epscol(nbs.size());
  for (std::size_t u = 0; u < nbs.size(); ++u) {
    mucol[u].resize(T + 1, -1);
    epscol[u].resize(T + 1);
    for (int t = 1; t <= T; ++t) {
      mucol[u][t] = inst.col({VarKind::Mu, nbs[u].bus, t});
      epscol[u][t].resize(t + 1, -1);
      for (int i = 0; i <= t; ++i)
        epscol[u][t][i] = inst.col({VarKind::Eps, nbs[u].bus, t, i});
    }
  }
  OracleResult best;
  bool have_best = false;
  bool solved_once = false;

  std::vector<int> repair_at(damaged.size(), 0);  // 0 = never
  std::vector<int> energize_at(nbs.size(), 0);    // 0 = never
  std::vector<int> used(T + 1, 0);                // repairs per step

  auto price_atom = [&]() {
    for (std::size_t d = 0; d < damaged.size(); ++d)
      for (int t = 1; t <= T; ++t) {
        const double v = repair_at[d] == t ? 1.0 : 0.0;
        tab.set_col_bounds(bcol[d][t], v, v);
      }
    for (std::size_t u = 0; u < nbs.size(); ++u) {
      const int e = energize_at[u];
      for (int t = 1; t <= T; ++t) {
        const double mu = (e != 0 && t >= e) ? 1.0 : 0.0;
        tab.set_col_bounds(mucol[u][t], mu, mu);
        const int sel = (e != 0 && t >= e) ? e : 0;
        for (int i = 0; i <= t; ++i) {
          const double v = i == sel ? 1.0 : 0.0;
          tab.set_col_bounds(epscol[u][t][i], v, v);
        }
      }
    }
    LpResult r = solved_once ? tab.solve_from(tab.save_basis()) : tab.solve();
    if (r.status == LpStatus::IterationLimit || r.status == LpStatus::Singular)
      r = tab.solve();  // cold retry
    solved_once = true;
    ++best.atoms_examined;
    if (r.status == LpStatus::Infeasible) return;
    if (r.status != LpStatus::Optimal)  // solver malfunction, not infeasibility
      throw std::logic_error("oracle: pricing LP failed: " +
                             std::string(to_string(r.status)));
    // Consistency: at the claimed energization step, the bus really absorbs
    // exactly one cranking power.
    for (std::size_t u = 0; u < nbs.size(); ++u) {
      const int e = energize_at[u];
      if (e == 0) continue;
      double inflow = 0.0;
      for (const auto& l : c.lines) {
        if (l.to == nbs[u].bus)
          inflow += r.x[inst.col({VarKind::Flow, l.id, e})];
        if (l.from == nbs[u].bus)
          inflow -= r.x[inst.col({VarKind::Flow, l.id, e})];
      }
      if (std::fabs(inflow - nbs[u].crank) > 1e-6 * (1.0 + nbs[u].crank))
        return;  // inconsistent atom, rejected
    }
    ++best.atoms_feasible;
    if (!have_best || r.objective < best.objective) {
      have_best = true;
      best.objective = r.objective;
      best.schedule.repair_step.clear();
      best.schedule.energize_step.clear();
      for (std::size_t d = 0; d < damaged.size(); ++d)
        best.schedule.repair_step[damaged[d]] = repair_at[d];
      for (std::size_t u = 0; u < nbs.size(); ++u)
        best.schedule.energize_step[nbs[u].gen_id] = energize_at[u];
    }
  };

  auto enum_energize = [&](auto&& self, std::size_t u) -> void {
    if (u == nbs.size()) {
      price_atom();
      return;
    }
    for (int e = 0; e <= T; ++e) {
      energize_at[u] = e;
      self(self, u + 1);
    }
    energize_at[u] = 0;
  };
  auto enum_repairs = [&](auto&& self, std::size_t d) -> void {
    if (d == damaged.size()) {
      enum_energize(enum_energize, 0);
      return;
    }
    for (int t = 0; t <= T; ++t) {
      if (t > 0 && used[t] >= s.budget) continue;
      repair_at[d] = t;
      if (t > 0) ++used[t];
      self(self, d + 1);
      if (t > 0) --used[t];
    }
    repair_at[d] = 0;
  };
  enum_repairs(enum_repairs, 0);

  if (!have_best)
    throw std::runtime_error(
        "oracle: no schedule admits a feasible operating point");
  return best;
}

CrossCheck cross_check(const GridCase& c, const DamageScenario& s,
                       const SizeGuard& guard) {
  CrossCheck cc;
  bool oracle_infeasible = false;
  OracleResult oracle;
  try {
    oracle = enumerate_optimal(c, s, guard);
  } catch (const std::runtime_error&) {
    oracle_infeasible = true;
  }

  const MilpInstance inst = build(c, s);
  SolveLimits exact;
  exact.rel_gap = 0.0;
  const Solution sol = solve_milp(inst, exact);

  if (oracle_infeasible) {
    cc.ok = sol.status == SolveStatus::Infeasible;
    cc.detail = cc.ok ? "both infeasible"
                      : std::string("oracle infeasible but optimizer says ") +
                            to_string(sol.status);
    return cc;
  }
  cc.oracle_objective = oracle.objective;
  if (sol.status != SolveStatus::Optimal) {
    cc.ok = false;
    cc.detail = std::string("optimizer status ") + to_string(sol.status) +
                " but oracle found " + std::to_string(oracle.objective);
    return cc;
  }
  cc.milp_objective = sol.objective;
  cc.difference = std::fabs(sol.objective - oracle.objective);
  cc.ok = cc.difference <= 1e-6 * (1.0 + std::fabs(oracle.objective));
  if (!cc.ok)
    cc.detail = "objectives differ by " + std::to_string(cc.difference);
  return cc;
}

}  // namespace psr
