// Restoration MILP assembly. Variable families and constraint families are
// emitted in a fixed order so instances (and their LP renderings) are
// deterministic for identical inputs.
#include "psr/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace psr {

namespace {

struct BusCtx {
  const Bus* bus = nullptr;
  std::vector<int> lines_in;    // indices into case lines, to == bus
  std::vector<int> lines_out;   // from == bus
  std::vector<int> gens;        // indices into case generators
  int nbs_gen = -1;             // index of the hosted non-black-start unit
};

struct BuildCtx {
  const GridCase& c;
  const DamageScenario& s;
  std::vector<BusCtx> buses;
  std::unordered_map<std::string, int> bus_pos;
  std::vector<int> damaged;      // case line indices, in case order
  std::vector<char> is_damaged;  // per case line index
  std::vector<int> nbs_buses;    // bus indices hosting NBS units, case order
};

BuildCtx make_ctx(const GridCase& c, const DamageScenario& s) {
  BuildCtx ctx{c, s, {}, {}, {}, {}, {}};
  ctx.buses.resize(c.buses.size());
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    ctx.buses[i].bus = &c.buses[i];
    ctx.bus_pos.emplace(c.buses[i].id, static_cast<int>(i));
  }
  for (std::size_t a = 0; a < c.lines.size(); ++a) {
    ctx.buses[ctx.bus_pos.at(c.lines[a].from)].lines_out.push_back(
        static_cast<int>(a));
    ctx.buses[ctx.bus_pos.at(c.lines[a].to)].lines_in.push_back(
        static_cast<int>(a));
  }
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    auto& bc = ctx.buses[ctx.bus_pos.at(c.generators[g].bus)];
    bc.gens.push_back(static_cast<int>(g));
    if (c.generators[g].kind == GenKind::NonBlackStart)
      bc.nbs_gen = static_cast<int>(g);
  }
  ctx.is_damaged.assign(c.lines.size(), 0);
  for (const auto& id : s.damaged_line_ids)
    for (std::size_t a = 0; a < c.lines.size(); ++a)
      if (c.lines[a].id == id) ctx.is_damaged[a] = 1;
  // Canonical damaged order is case order, independent of scenario listing.
  for (std::size_t a = 0; a < c.lines.size(); ++a)
    if (ctx.is_damaged[a]) ctx.damaged.push_back(static_cast<int>(a));
  for (std::size_t b = 0; b < ctx.buses.size(); ++b)
    if (ctx.buses[b].nbs_gen >= 0) ctx.nbs_buses.push_back(static_cast<int>(b));
  return ctx;
}

// Dimensionless switching constant for the energization max-selector at a
// bus: strictly dominates |net inflow| / cranking power, which incident
// line limits cap at (sum f_max + sum |f_min|) / crank.
double big_m_for(const BuildCtx& ctx, int b) {
  const auto& bc = ctx.buses[b];
  const Generator& g = ctx.c.generators[bc.nbs_gen];
  const double crank = cranking_power(g);
  double cap = 0.0;
  for (int a : bc.lines_in)
    cap += ctx.c.lines[a].f_max + std::fabs(ctx.c.lines[a].f_min);
  for (int a : bc.lines_out)
    cap += ctx.c.lines[a].f_max + std::fabs(ctx.c.lines[a].f_min);
  const double beta_cap = cap / crank;
  const double m = 1.0 + beta_cap;
  if (!(m > beta_cap))
    throw std::logic_error("big-M does not dominate beta range at bus " +
                           ctx.c.buses[b].id);
  return m;
}

}  // namespace

std::size_t ModelShape::total_cols() const {
  return cols_load_shed + cols_flow + cols_gen + cols_line_build +
         cols_line_status + cols_beta + cols_mu + cols_eps;
}
std::size_t ModelShape::total_rows() const {
  return rows_balance + rows_gating + rows_status_link + rows_budget +
         rows_beta_link + rows_mu_lower + rows_mu_upper + rows_eps_sum +
         rows_nbs_dispatch + rows_mu_mono + rows_reach + rows_inflow_reach +
         rows_shed_floor;
}

ModelShape expected_shape(const GridCase& c, const DamageScenario& s) {
  const std::size_t B = c.buses.size(), A = c.lines.size();
  const std::size_t G = c.generators.size();
  const std::size_t Ad = s.damaged_line_ids.size();
  const std::size_t T = static_cast<std::size_t>(s.horizon);
  std::size_t n = 0;
  for (const auto& g : c.generators)
    n += g.kind == GenKind::NonBlackStart ? 1 : 0;

  ModelShape sh;
  sh.cols_load_shed = B * T;
  sh.cols_flow = A * T;
  sh.cols_gen = G * T;
  sh.cols_line_build = Ad * T;
  sh.cols_line_status = Ad * T;
  sh.cols_beta = n * T;
  sh.cols_mu = n * T;
  sh.cols_eps = n * T * (T + 3) / 2;
  sh.rows_balance = B * T;
  sh.rows_gating = 2 * Ad * T;
  sh.rows_status_link = Ad * T;
  sh.rows_budget = T;
  sh.rows_beta_link = n * T;
  sh.rows_mu_lower = n * T * (T + 1) / 2;
  sh.rows_mu_upper = n * T * (T + 3) / 2;
  sh.rows_eps_sum = n * T;
  sh.rows_nbs_dispatch = 2 * n * (T - 1);
  std::size_t cut_buses = 0;
  for (const auto& g : c.generators) {
    if (g.kind != GenKind::NonBlackStart) continue;
    bool any_intact = false;
    for (const auto& l : c.lines) {
      if (l.from != g.bus && l.to != g.bus) continue;
      bool dmg = false;
      for (const auto& id : s.damaged_line_ids) dmg = dmg || id == l.id;
      any_intact = any_intact || !dmg;
    }
    if (!any_intact) ++cut_buses;
  }
  sh.rows_mu_mono = n * (T - 1);
  sh.rows_reach = cut_buses * T;
  sh.rows_inflow_reach = cut_buses * T;

  for (int t = 1; t <= static_cast<int>(T); ++t)
    for (const auto& bus : c.buses) {
      bool hosts_gen = false;
      for (const auto& g : c.generators) hosts_gen = hosts_gen || g.bus == bus.id;
      if (hosts_gen) continue;
      const double d = demand_at(c, s, bus.id, t);
      if (d <= 0.0) continue;
      bool any_damaged = false;
      double intact_cap = 0.0;
      for (const auto& l : c.lines) {
        if (l.from != bus.id && l.to != bus.id) continue;
        bool dmg = false;
        for (const auto& id : s.damaged_line_ids) dmg = dmg || id == l.id;
        const double in_cap =
            std::min(d, std::max(0.0, l.to == bus.id ? l.f_max : -l.f_min));
        if (dmg)
          any_damaged = true;
        else
          intact_cap += in_cap;
      }
      if (any_damaged && intact_cap < d) ++sh.rows_shed_floor;
    }
  return sh;
}

MilpInstance build(const GridCase& c, const DamageScenario& s,
                   const BuildOptions& opt) {
  const auto report = validate(c, s);
  if (!report.empty()) {
    std::ostringstream os;
    os << "build: inputs failed validation:";
    for (std::size_t i = 0; i < report.size() && i < 8; ++i)
      os << " [" << report[i].where << ": " << report[i].message << "]";
    if (report.size() > 8) os << " (+" << report.size() - 8 << " more)";
    throw std::invalid_argument(os.str());
  }

  const BuildCtx ctx = make_ctx(c, s);
  const int T = s.horizon;
  MilpInstance inst;
  inst.name = c.name;

  // ---- columns, family-major; unserved MW is the whole objective ----
  for (int t = 1; t <= T; ++t)
    for (std::size_t b = 0; b < c.buses.size(); ++b) {
      double shed_cap = demand_at(c, s, c.buses[b].id, t);
      if (ctx.buses[b].nbs_gen >= 0)
        shed_cap += cranking_power(c.generators[ctx.buses[b].nbs_gen]);
      inst.add_col({VarKind::LoadShed, c.buses[b].id, t}, 0.0, shed_cap, false,
                   1.0);
    }
  for (int t = 1; t <= T; ++t)
    for (const auto& l : c.lines)
      inst.add_col({VarKind::Flow, l.id, t}, l.f_min, l.f_max, false);
  for (int t = 1; t <= T; ++t)
    for (const auto& g : c.generators) {
      if (g.kind == GenKind::BlackStart) {
        inst.add_col({VarKind::Gen, g.id, t}, g.p_min, g.p_max, false);
      } else {
        const double crank = cranking_power(g);
        // While dark, the unit is a fixed load of one cranking power; the
        // dispatch window opens the step after its status flips (see the
        // nbs-dispatch rows). At t=1 the prior status is identically zero.
        const double lb = -crank;
        const double ub = (t == 1) ? -crank : g.p_max;
        inst.add_col({VarKind::Gen, g.id, t}, lb, ub, false);
      }
    }
  for (int t = 1; t <= T; ++t)
    for (int a : ctx.damaged)
      inst.add_col({VarKind::LineBuild, c.lines[a].id, t}, 0.0, 1.0, true);
  for (int t = 1; t <= T; ++t)
    for (int a : ctx.damaged)
      inst.add_col({VarKind::LineStatus, c.lines[a].id, t}, 0.0, 1.0, false);
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const auto& bc = ctx.buses[b];
      const Generator& g = c.generators[bc.nbs_gen];
      double cap = 0.0;
      for (int a : bc.lines_in)
        cap += c.lines[a].f_max + std::fabs(c.lines[a].f_min);
      for (int a : bc.lines_out)
        cap += c.lines[a].f_max + std::fabs(c.lines[a].f_min);
      const double beta_cap = cap / cranking_power(g);
      inst.add_col({VarKind::Beta, c.buses[b].id, t}, -beta_cap,
                   std::min(1.0, beta_cap), false);
    }
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses)
      inst.add_col({VarKind::Mu, c.buses[b].id, t}, 0.0, 1.0, true);
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses)
      for (int i = 0; i <= t; ++i)
        inst.add_col({VarKind::Eps, c.buses[b].id, t, i}, 0.0, 1.0, true);

  std::vector<int> theta_col;  // per (t-1)*|B| + b when angle mode is on
  if (opt.angle_mode) {
    // Angle spread over any path is bounded by the sum of per-line
    // |flow|/susceptance ranges; use it as a generous symmetric box.
    double spread = 1.0;
    for (const auto& l : c.lines)
      spread += std::max(std::fabs(l.f_min), l.f_max) / l.susceptance;
    theta_col.resize(c.buses.size() * static_cast<std::size_t>(T), -1);
    for (int t = 1; t <= T; ++t)
      for (std::size_t b = 0; b < c.buses.size(); ++b)
        theta_col[(t - 1) * c.buses.size() + b] = inst.add_col(
            {VarKind::Theta, c.buses[b].id, t}, -spread, spread, false);
  }

  auto col = [&inst](VarKind k, const std::string& e, int t, int aux = -1) {
    const int j = inst.col({k, e, t, aux});
    if (j < 0) throw std::logic_error("builder lost column " +
                                      var_name({k, e, t, aux}));
    return j;
  };

  // ---- rows ----
  // Bus power balance: generation + shed + net inflow covers demand.
  for (int t = 1; t <= T; ++t)
    for (std::size_t b = 0; b < c.buses.size(); ++b) {
      const auto& bc = ctx.buses[b];
      std::vector<std::pair<int, double>> terms;
      for (int g : bc.gens)
        terms.emplace_back(col(VarKind::Gen, c.generators[g].id, t), 1.0);
      terms.emplace_back(col(VarKind::LoadShed, c.buses[b].id, t), 1.0);
      for (int a : bc.lines_in)
        terms.emplace_back(col(VarKind::Flow, c.lines[a].id, t), 1.0);
      for (int a : bc.lines_out)
        terms.emplace_back(col(VarKind::Flow, c.lines[a].id, t), -1.0);
      inst.add_row("bal_" + c.buses[b].id + "_t" + std::to_string(t),
                   std::move(terms), RowSense::EQ,
                   demand_at(c, s, c.buses[b].id, t));
    }
  // Damaged-line flow gating by cumulative status.
  for (int t = 1; t <= T; ++t)
    for (int a : ctx.damaged) {
      const auto& l = c.lines[a];
      const int f = col(VarKind::Flow, l.id, t);
      const int sc = col(VarKind::LineStatus, l.id, t);
      inst.add_row("cap_hi_" + l.id + "_t" + std::to_string(t),
                   {{f, 1.0}, {sc, -l.f_max}}, RowSense::LE, 0.0);
      inst.add_row("cap_lo_" + l.id + "_t" + std::to_string(t),
                   {{f, 1.0}, {sc, -l.f_min}}, RowSense::GE, 0.0);
    }
  // Status accumulates repairs; S in [0,1] simultaneously caps repairs at
  // one per line over the whole schedule.
  for (int t = 1; t <= T; ++t)
    for (int a : ctx.damaged) {
      const auto& l = c.lines[a];
      std::vector<std::pair<int, double>> terms{
          {col(VarKind::LineStatus, l.id, t), 1.0}};
      for (int tau = 1; tau <= t; ++tau)
        terms.emplace_back(col(VarKind::LineBuild, l.id, tau), -1.0);
      inst.add_row("status_" + l.id + "_t" + std::to_string(t),
                   std::move(terms), RowSense::EQ, 0.0);
    }
  // Per-step repair budget.
  for (int t = 1; t <= T; ++t) {
    std::vector<std::pair<int, double>> terms;
    for (int a : ctx.damaged)
      terms.emplace_back(col(VarKind::LineBuild, c.lines[a].id, t), 1.0);
    inst.add_row("budget_t" + std::to_string(t), std::move(terms),
                 RowSense::LE, static_cast<double>(s.budget));
  }
  // beta * crank equals net inflow at each non-black-start bus.
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const auto& bc = ctx.buses[b];
      const double crank = cranking_power(c.generators[bc.nbs_gen]);
      std::vector<std::pair<int, double>> terms{
          {col(VarKind::Beta, c.buses[b].id, t), crank}};
      for (int a : bc.lines_in)
        terms.emplace_back(col(VarKind::Flow, c.lines[a].id, t), -1.0);
      for (int a : bc.lines_out)
        terms.emplace_back(col(VarKind::Flow, c.lines[a].id, t), 1.0);
      inst.add_row("beta_" + c.buses[b].id + "_t" + std::to_string(t),
                   std::move(terms), RowSense::EQ, 0.0);
    }
  // Energization status equals max(0, beta history) via an exclusive
  // selector: mu dominates every candidate and is pinned to the selected
  // one (candidate 0 is the constant zero).
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const std::string& bid = c.buses[b].id;
      const int mu = col(VarKind::Mu, bid, t);
      for (int i = 1; i <= t; ++i)
        inst.add_row(
            "mu_lo_" + bid + "_t" + std::to_string(t) + "_i" +
                std::to_string(i),
            {{mu, 1.0}, {col(VarKind::Beta, bid, i), -1.0}}, RowSense::GE,
            0.0);
    }
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const std::string& bid = c.buses[b].id;
      const int mu = col(VarKind::Mu, bid, t);
      const double m = big_m_for(ctx, b);
      for (int i = 0; i <= t; ++i) {
        // Candidate 0 is the constant zero, so its pin needs no slack
        // beyond the binary range: selecting it forces mu all the way down.
        const double w = i == 0 ? 1.0 : m;
        std::vector<std::pair<int, double>> terms{
            {mu, 1.0}, {col(VarKind::Eps, bid, t, i), w}};
        if (i >= 1) terms.emplace_back(col(VarKind::Beta, bid, i), -1.0);
        inst.add_row("mu_hi_" + bid + "_t" + std::to_string(t) + "_i" +
                         std::to_string(i),
                     std::move(terms), RowSense::LE, w);
      }
    }
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const std::string& bid = c.buses[b].id;
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i <= t; ++i)
        terms.emplace_back(col(VarKind::Eps, bid, t, i), 1.0);
      inst.add_row("eps_sum_" + bid + "_t" + std::to_string(t),
                   std::move(terms), RowSense::EQ, 1.0);
    }
  // Dispatch window: from the step after the status flip the unit runs in
  // [p_min, p_max]; before that it is a fixed cranking load. t=1 is handled
  // by the column bounds (prior status is identically zero).
  for (int t = 2; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const auto& bc = ctx.buses[b];
      const Generator& g = c.generators[bc.nbs_gen];
      const double crank = cranking_power(g);
      const int p = col(VarKind::Gen, g.id, t);
      const int mu_prev = col(VarKind::Mu, c.buses[b].id, t - 1);
      inst.add_row("disp_lo_" + g.id + "_t" + std::to_string(t),
                   {{p, 1.0}, {mu_prev, -(crank + g.p_min)}}, RowSense::GE,
                   -crank);
      inst.add_row("disp_hi_" + g.id + "_t" + std::to_string(t),
                   {{p, 1.0}, {mu_prev, -(crank + g.p_max)}}, RowSense::LE,
                   -crank);
    }

  // Once energized a unit stays energized, which the selector machinery only
  // guarantees at integral points; stated directly it prunes relaxations
  // where the status dips after rising.
  for (int t = 1; t <= T - 1; ++t)
    for (int b : ctx.nbs_buses) {
      const std::string& bid = c.buses[b].id;
      inst.add_row("mu_mono_" + bid + "_t" + std::to_string(t),
                   {{col(VarKind::Mu, bid, t), 1.0},
                    {col(VarKind::Mu, bid, t + 1), -1.0}},
                   RowSense::LE, 0.0);
    }

  // An energized unit's bus needs a live incident line. When every incident
  // line is damaged this bounds the energization status — and the inflow
  // ratio, which never exceeds one with the cranking draw netted out — by
  // the repaired status mass next to the bus. Integer solutions satisfy both
  // automatically (energization requires delivered cranking flow), so they
  // only tighten the relaxation: fractional energization must pay for
  // repairs.
  for (int t = 1; t <= T; ++t)
    for (int b : ctx.nbs_buses) {
      const auto& bc = ctx.buses[b];
      bool all_damaged = true;
      for (int a : bc.lines_in) all_damaged = all_damaged && ctx.is_damaged[a];
      for (int a : bc.lines_out) all_damaged = all_damaged && ctx.is_damaged[a];
      if (!all_damaged) continue;
      std::vector<std::pair<int, double>> terms{
          {col(VarKind::Mu, c.buses[b].id, t), 1.0}};
      std::vector<std::pair<int, double>> beta_terms{
          {col(VarKind::Beta, c.buses[b].id, t), 1.0}};
      for (const auto& lines : {bc.lines_in, bc.lines_out})
        for (int a : lines) {
          const int sc = col(VarKind::LineStatus, c.lines[a].id, t);
          terms.emplace_back(sc, -1.0);
          beta_terms.emplace_back(sc, -1.0);
        }
      inst.add_row("reach_" + c.buses[b].id + "_t" + std::to_string(t),
                   std::move(terms), RowSense::LE, 0.0);
      inst.add_row("inflow_reach_" + c.buses[b].id + "_t" + std::to_string(t),
                   std::move(beta_terms), RowSense::LE, 0.0);
    }

  // A generator-free bus is served only through incident lines, each able to
  // deliver at most min(demand, inbound capacity) once repaired. Integer
  // repair states already imply the bound through flow gating; stating it on
  // the repair status directly makes fractional repairs shed proportional
  // load instead of serving full demand through barely-built lines.
  for (int t = 1; t <= T; ++t)
    for (std::size_t b = 0; b < ctx.buses.size(); ++b) {
      const auto& bc = ctx.buses[b];
      if (!bc.gens.empty()) continue;
      const double d = demand_at(c, s, c.buses[b].id, t);
      if (d <= 0.0) continue;
      auto deliver_cap = [&](int a) {
        const Line& l = c.lines[a];
        const double in_cap = l.to == c.buses[b].id ? l.f_max : -l.f_min;
        return std::min(d, std::max(0.0, in_cap));
      };
      double intact_cap = 0.0;
      std::vector<std::pair<int, double>> terms{
          {col(VarKind::LoadShed, c.buses[b].id, t), 1.0}};
      bool any_damaged = false;
      for (const auto& lines : {bc.lines_in, bc.lines_out})
        for (int a : lines) {
          if (ctx.is_damaged[a]) {
            any_damaged = true;
            terms.emplace_back(col(VarKind::LineStatus, c.lines[a].id, t),
                               deliver_cap(a));
          } else {
            intact_cap += deliver_cap(a);
          }
        }
      if (!any_damaged || intact_cap >= d) continue;
      inst.add_row("shed_floor_" + c.buses[b].id + "_t" + std::to_string(t),
                   std::move(terms), RowSense::GE, d - intact_cap);
    }

  if (opt.angle_mode) {
    // Extension: tie flows to angle differences; repaired status relaxes the
    // coupling on damaged lines via a per-line switching constant.
    for (int t = 1; t <= T; ++t)
      for (std::size_t a = 0; a < c.lines.size(); ++a) {
        const auto& l = c.lines[a];
        const int f = col(VarKind::Flow, l.id, t);
        const int th_f =
            theta_col[(t - 1) * c.buses.size() + ctx.bus_pos.at(l.from)];
        const int th_t =
            theta_col[(t - 1) * c.buses.size() + ctx.bus_pos.at(l.to)];
        std::vector<std::pair<int, double>> base{
            {f, 1.0}, {th_f, -l.susceptance}, {th_t, l.susceptance}};
        if (!ctx.is_damaged[a]) {
          inst.add_row("ang_" + l.id + "_t" + std::to_string(t), base,
                       RowSense::EQ, 0.0);
        } else {
          double spread = 0.0;
          for (const auto& l2 : c.lines)
            spread += std::max(std::fabs(l2.f_min), l2.f_max) / l2.susceptance;
          const double ma = std::max(std::fabs(l.f_min), l.f_max) +
                            2.0 * l.susceptance * (spread + 1.0);
          const int sc = col(VarKind::LineStatus, l.id, t);
          auto hi = base;
          hi.emplace_back(sc, ma);
          inst.add_row("ang_hi_" + l.id + "_t" + std::to_string(t),
                       std::move(hi), RowSense::LE, ma);
          auto lo = base;
          lo.emplace_back(sc, -ma);
          inst.add_row("ang_lo_" + l.id + "_t" + std::to_string(t),
                       std::move(lo), RowSense::GE, -ma);
        }
      }
  }

  inst.self_check();
  return inst;
}

}  // namespace psr
