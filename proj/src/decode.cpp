// Turning a solved vector back into a restoration plan, plus an independent
// re-check of every constraint family against raw case/scenario data. The
// checker recomputes coefficients from scratch; the instance is used only to
// locate columns.
#include "psr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psr {

namespace {

double at(const MilpInstance& inst, const std::vector<double>& x, VarKind k,
          const std::string& entity, int step, int aux = -1) {
  return inst.value_of({k, entity, step, aux}, x);
}

}  // namespace

std::vector<ConstraintViolation> check_solution(const GridCase& c,
                                                const DamageScenario& s,
                                                const MilpInstance& inst,
                                                const std::vector<double>& x,
                                                double tol) {
  std::vector<ConstraintViolation> out;
  auto flag = [&out](const std::string& family, const std::string& where,
                     double residual) {
    if (residual > 0) out.push_back({family, where, residual});
  };
  const int T = s.horizon;

  std::vector<const Generator*> nbs;  // case order
  for (const auto& g : c.generators)
    if (g.kind == GenKind::NonBlackStart) nbs.push_back(&g);

  auto net_inflow = [&](const std::string& bus_id, int t) {
    double v = 0.0;
    for (const auto& l : c.lines) {
      if (l.to == bus_id) v += at(inst, x, VarKind::Flow, l.id, t);
      if (l.from == bus_id) v -= at(inst, x, VarKind::Flow, l.id, t);
    }
    return v;
  };

  for (int t = 1; t <= T; ++t)
    for (const auto& b : c.buses) {
      double lhs = at(inst, x, VarKind::LoadShed, b.id, t) + net_inflow(b.id, t);
      for (const auto& g : c.generators)
        if (g.bus == b.id) lhs += at(inst, x, VarKind::Gen, g.id, t);
      const double d = demand_at(c, s, b.id, t);
      flag("balance", b.id + "@t" + std::to_string(t),
           std::fabs(lhs - d) - tol * (1.0 + std::fabs(d)));
    }

  for (int t = 1; t <= T; ++t)
    for (const auto& l : c.lines) {
      const double f = at(inst, x, VarKind::Flow, l.id, t);
      const bool damaged =
          std::find(s.damaged_line_ids.begin(), s.damaged_line_ids.end(),
                    l.id) != s.damaged_line_ids.end();
      const double st = damaged ? at(inst, x, VarKind::LineStatus, l.id, t)
                                : 1.0;
      const double guard_hi = tol * (1.0 + std::fabs(l.f_max));
      const double guard_lo = tol * (1.0 + std::fabs(l.f_min));
      flag("gating", l.id + "@t" + std::to_string(t) + ":hi",
           f - st * l.f_max - guard_hi);
      flag("gating", l.id + "@t" + std::to_string(t) + ":lo",
           st * l.f_min - f - guard_lo);
      if (damaged) {
        double built = 0.0;
        for (int tau = 1; tau <= t; ++tau)
          built += at(inst, x, VarKind::LineBuild, l.id, tau);
        flag("gating", l.id + "@t" + std::to_string(t) + ":status",
             std::fabs(st - built) - tol);
      }
    }

  for (const auto& id : s.damaged_line_ids) {
    double total = 0.0;
    for (int t = 1; t <= T; ++t)
      total += at(inst, x, VarKind::LineBuild, id, t);
    flag("build-once", id, total - 1.0 - tol);
  }

  for (int t = 1; t <= T; ++t) {
    double used = 0.0;
    for (const auto& id : s.damaged_line_ids)
      used += at(inst, x, VarKind::LineBuild, id, t);
    flag("budget", "t" + std::to_string(t),
         used - static_cast<double>(s.budget) - tol);
  }

  for (const Generator* g : nbs) {
    const double crank = cranking_power(*g);
    for (int t = 1; t <= T; ++t) {
      const double beta = at(inst, x, VarKind::Beta, g->bus, t);
      flag("beta-link", g->bus + "@t" + std::to_string(t),
           std::fabs(crank * beta - net_inflow(g->bus, t)) -
               tol * (1.0 + crank));
    }
    for (int t = 2; t <= T; ++t)
      flag("mu-monotone", g->bus + "@t" + std::to_string(t),
           at(inst, x, VarKind::Mu, g->bus, t - 1) -
               at(inst, x, VarKind::Mu, g->bus, t) - tol);
    for (int t = 1; t <= T; ++t) {
      const double p = at(inst, x, VarKind::Gen, g->id, t);
      const double mu_prev =
          t == 1 ? 0.0 : at(inst, x, VarKind::Mu, g->bus, t - 1);
      const double lo = -crank * (1.0 - mu_prev) + mu_prev * g->p_min;
      const double hi = -crank * (1.0 - mu_prev) + mu_prev * g->p_max;
      const double guard = tol * (1.0 + crank + g->p_max);
      flag("nbs-dispatch", g->id + "@t" + std::to_string(t) + ":lo",
           lo - p - guard);
      flag("nbs-dispatch", g->id + "@t" + std::to_string(t) + ":hi",
           p - hi - guard);
    }
    for (int t = 1; t <= T; ++t) {
      double sum = 0.0;
      for (int i = 0; i <= t; ++i)
        sum += at(inst, x, VarKind::Eps, g->bus, t, i);
      flag("eps-sum", g->bus + "@t" + std::to_string(t),
           std::fabs(sum - 1.0) - tol);
    }
    for (int t = 1; t <= T; ++t) {
      const double mu = at(inst, x, VarKind::Mu, g->bus, t);
      for (int i = 1; i <= t; ++i)
        flag("mu-max",
             g->bus + "@t" + std::to_string(t) + ":ge_i" + std::to_string(i),
             at(inst, x, VarKind::Beta, g->bus, i) - mu - tol);
      // The selected candidate pins mu from above (candidate 0 is zero).
      for (int i = 0; i <= t; ++i) {
        if (at(inst, x, VarKind::Eps, g->bus, t, i) < 0.5) continue;
        const double cand =
            i == 0 ? 0.0 : at(inst, x, VarKind::Beta, g->bus, i);
        flag("mu-max",
             g->bus + "@t" + std::to_string(t) + ":sel_i" + std::to_string(i),
             mu - cand - tol);
      }
      flag("mu-max", g->bus + "@t" + std::to_string(t) + ":nonneg",
           -mu - tol);
    }
  }
  return out;
}

RestorationPlan decode(const GridCase& c, const DamageScenario& s,
                       const MilpInstance& inst, const Solution& sol) {
  if (sol.status == SolveStatus::Infeasible ||
      sol.status == SolveStatus::Unbounded ||
      sol.status == SolveStatus::NumericalFailure || sol.x.empty())
    throw std::invalid_argument(
        std::string("decode: no usable solution (status ") +
        to_string(sol.status) + ")");
  if (sol.x.size() != inst.cols.size())
    throw std::invalid_argument("decode: solution size " +
                                std::to_string(sol.x.size()) +
                                " does not match instance columns " +
                                std::to_string(inst.cols.size()));

  const auto violations = check_solution(c, s, inst, sol.x, 1e-6);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "decode: solution fails re-check:";
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i)
      os << " [" << violations[i].family << " " << violations[i].where
         << " by " << violations[i].residual << "]";
    if (violations.size() > 5) os << " (+" << violations.size() - 5 << ")";
    throw std::logic_error(os.str());
  }

  RestorationPlan plan;
  plan.case_name = c.name;
  plan.status = to_string(sol.status);
  plan.objective = sol.objective;
  plan.gap = sol.gap;
  plan.nodes = sol.nodes;

  const int T = s.horizon;
  for (int t = 1; t <= T; ++t) {
    PlanStep step;
    step.step = t;
    for (const auto& l : c.lines) {
      const bool damaged =
          std::find(s.damaged_line_ids.begin(), s.damaged_line_ids.end(),
                    l.id) != s.damaged_line_ids.end();
      if (damaged && at(inst, sol.x, VarKind::LineBuild, l.id, t) > 0.5)
        step.lines_repaired.push_back(l.id);
      step.flows[l.id] = at(inst, sol.x, VarKind::Flow, l.id, t);
    }
    for (const auto& g : c.generators) {
      step.dispatch[g.id] = at(inst, sol.x, VarKind::Gen, g.id, t);
      if (g.kind != GenKind::NonBlackStart) continue;
      const double mu_now = at(inst, sol.x, VarKind::Mu, g.bus, t);
      const double mu_prev =
          t == 1 ? 0.0 : at(inst, sol.x, VarKind::Mu, g.bus, t - 1);
      if (mu_now > 0.5 && mu_prev <= 0.5) {
        step.nbs_energized.push_back(g.id);
        plan.energized_at[g.id] = t;
      }
    }
    for (const auto& b : c.buses) {
      const double shed = at(inst, sol.x, VarKind::LoadShed, b.id, t);
      step.total_unserved += shed;
      if (shed > 1e-9) step.unserved[b.id] = shed;
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

}  // namespace psr
