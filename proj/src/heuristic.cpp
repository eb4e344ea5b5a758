// Schedule construction: first queue the damaged lines lying on shortest
// repair paths from black-start buses to each idle unit (cranking power must
// travel these before anything can be energized), then the remaining lines
// by how much repaired status the LP relaxation gave them; pack the queue
// into the per-step budget and energize each unit at the earliest step the
// priced schedule allows. Pricing pins every binary column and solves the
// remaining LP, exactly the way the enumeration oracle prices its atoms;
// consecutive prices differ only in bounds, so they re-solve warm from the
// previous basis.
#include "psr/heuristic.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>

#include "psr/simplex.hpp"
#include "psr/solver.hpp"

namespace psr {

namespace {

// Damaged-line repair lists for the cheapest black-start-to-unit paths:
// Dijkstra over buses where crossing a damaged line costs one repair (ties
// broken by hop count, then by discovery order, all deterministic).
std::vector<std::vector<std::size_t>> crank_paths(
    const GridCase& c, const std::vector<std::string>& damaged,
    const std::vector<std::string>& nbs_buses) {
  std::unordered_map<std::string, int> bus_pos;
  for (std::size_t i = 0; i < c.buses.size(); ++i)
    bus_pos.emplace(c.buses[i].id, static_cast<int>(i));
  std::unordered_map<std::string, std::size_t> damaged_pos;
  for (std::size_t d = 0; d < damaged.size(); ++d)
    damaged_pos.emplace(damaged[d], d);

  struct Edge {
    int to;
    int line;     // index into c.lines
    int repairs;  // 1 when the line is damaged
  };
  std::vector<std::vector<Edge>> adj(c.buses.size());
  for (std::size_t a = 0; a < c.lines.size(); ++a) {
    const int u = bus_pos.at(c.lines[a].from);
    const int v = bus_pos.at(c.lines[a].to);
    const int w = damaged_pos.count(c.lines[a].id) ? 1 : 0;
    adj[u].push_back({v, static_cast<int>(a), w});
    adj[v].push_back({u, static_cast<int>(a), w});
  }

  using Key = std::pair<int, int>;  // (repairs, hops)
  const Key unreached{INT_MAX, INT_MAX};
  std::vector<Key> dist(c.buses.size(), unreached);
  std::vector<int> via_line(c.buses.size(), -1);
  std::vector<int> via_bus(c.buses.size(), -1);
  std::priority_queue<std::pair<Key, int>, std::vector<std::pair<Key, int>>,
                      std::greater<>>
      pq;
  for (const auto& g : c.generators)
    if (g.kind == GenKind::BlackStart) {
      const int b = bus_pos.at(g.bus);
      if (dist[b] != Key{0, 0}) {
        dist[b] = {0, 0};
        pq.push({{0, 0}, b});
      }
    }
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& e : adj[u]) {
      const Key nd{d.first + e.repairs, d.second + 1};
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        via_line[e.to] = e.line;
        via_bus[e.to] = u;
        pq.push({nd, e.to});
      }
    }
  }

  std::vector<std::vector<std::size_t>> paths;
  for (const auto& bid : nbs_buses) {
    std::vector<std::size_t> lines;
    int b = bus_pos.at(bid);
    if (dist[b] != unreached) {
      for (; via_bus[b] >= 0; b = via_bus[b]) {
        const auto it = damaged_pos.find(c.lines[via_line[b]].id);
        if (it != damaged_pos.end()) lines.push_back(it->second);
      }
      std::reverse(lines.begin(), lines.end());  // source-to-unit order
    }
    paths.push_back(std::move(lines));
  }
  return paths;
}

}  // namespace

std::vector<double> restoration_hint(const GridCase& c,
                                     const DamageScenario& s,
                                     const MilpInstance& inst) {
  const int T = s.horizon;
  const Solution lp = solve_lp(inst);
  if (lp.status != SolveStatus::Optimal) return {};

  // Damaged lines in case order (canonical, independent of listing order).
  std::vector<std::string> damaged;
  for (const auto& l : c.lines)
    for (const auto& id : s.damaged_line_ids)
      if (l.id == id) damaged.push_back(id);

  struct Unit {
    std::string bus;
  };
  std::vector<Unit> nbs;
  for (const auto& g : c.generators)
    if (g.kind == GenKind::NonBlackStart) nbs.push_back({g.bus});

  // Column tables for everything a schedule pins.
  std::vector<std::vector<int>> bcol(damaged.size());
  for (std::size_t d = 0; d < damaged.size(); ++d) {
    bcol[d].resize(T + 1, -1);
    for (int t = 1; t <= T; ++t) {
      bcol[d][t] = inst.col({VarKind::LineBuild, damaged[d], t});
      if (bcol[d][t] < 0) return {};
    }
  }
  std::vector<std::vector<int>> mucol(nbs.size());
  std::vector<std::vector<std::vector<int>>> epscol(nbs.size());
  for (std::size_t u = 0; u < nbs.size(); ++u) {
    mucol[u].resize(T + 1, -1);
    epscol[u].resize(T + 1);
    for (int t = 1; t <= T; ++t) {
      mucol[u][t] = inst.col({VarKind::Mu, nbs[u].bus, t});
      if (mucol[u][t] < 0) return {};
      epscol[u][t].resize(t + 1, -1);
      for (int i = 0; i <= t; ++i) {
        epscol[u][t][i] = inst.col({VarKind::Eps, nbs[u].bus, t, i});
        if (epscol[u][t][i] < 0) return {};
      }
    }
  }

  // Repair order: cranking paths first (so units can energize early), then
  // everything else by the repaired-status mass the relaxation assigned to
  // it, largest first; stable on ties so the order is deterministic.
  std::vector<std::string> nbs_bus_ids;
  for (const auto& u : nbs) nbs_bus_ids.push_back(u.bus);
  std::vector<std::size_t> order;
  std::vector<char> queued(damaged.size(), 0);
  for (const auto& path : crank_paths(c, damaged, nbs_bus_ids))
    for (std::size_t d : path)
      if (!queued[d]) {
        queued[d] = 1;
        order.push_back(d);
      }
  std::vector<double> mass(damaged.size(), 0.0);
  for (std::size_t d = 0; d < damaged.size(); ++d)
    for (int t = 1; t <= T; ++t)
      mass[d] += lp.x[inst.col({VarKind::LineStatus, damaged[d], t})];
  std::vector<std::size_t> rest;
  for (std::size_t d = 0; d < damaged.size(); ++d)
    if (!queued[d]) rest.push_back(d);
  std::stable_sort(rest.begin(), rest.end(),
                   [&mass](std::size_t a, std::size_t b) {
                     return mass[a] > mass[b];
                   });
  order.insert(order.end(), rest.begin(), rest.end());
  std::vector<int> repair_at(damaged.size(), 0);  // 0 = never repaired
  for (std::size_t r = 0; r < order.size(); ++r) {
    const int step = 1 + static_cast<int>(r / std::max(1, s.budget));
    if (step <= T) repair_at[order[r]] = step;
  }

  LpTableau tab(inst);
  bool solved_once = false;
  std::vector<int> energize_at(nbs.size(), 0);  // 0 = never energized

  const double infeasible = std::numeric_limits<double>::infinity();
  auto price = [&](std::vector<double>* x_out) {
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
    if (r.status != LpStatus::Optimal) return infeasible;
    if (x_out) *x_out = r.x;
    return r.objective;
  };

  double best = price(nullptr);
  if (!std::isfinite(best)) return {};  // not even repairs-only works

  // Earliest-feasible energization, one unit at a time. An energization that
  // prices worse than the current schedule only steals capacity, so it is
  // reverted and retried at a later step.
  auto energize_greedy = [&] {
    std::fill(energize_at.begin(), energize_at.end(), 0);
    best = price(nullptr);
    for (int t = 1; t <= T; ++t)
      for (std::size_t u = 0; u < nbs.size(); ++u) {
        if (energize_at[u] != 0) continue;
        energize_at[u] = t;
        const double trial = price(nullptr);
        if (trial <= best + 1e-7 * (1.0 + std::fabs(best)))
          best = trial;
        else
          energize_at[u] = 0;
      }
  };
  energize_greedy();

  // Local improvement: pull each repair to an earlier step, into a free
  // budget slot if one exists, otherwise by displacing the lightest line
  // scheduled there; keep strict improvements only. Energizations are
  // re-derived after each sweep since earlier repairs can unlock earlier
  // flips.
  std::vector<int> slots(T + 1, 0);
  for (int at : repair_at)
    if (at > 0) ++slots[at];
  for (int round = 0; round < 2; ++round) {
    bool improved = false;
    for (std::size_t d = 0; d < damaged.size(); ++d) {
      const int t0 = repair_at[d];
      if (t0 == 0) continue;
      for (int t = 1; t < t0; ++t) {
        const double before = best;
        if (slots[t] < s.budget) {
          repair_at[d] = t;
          const double trial = price(nullptr);
          if (trial < best - 1e-9 * (1.0 + std::fabs(best))) {
            best = trial;
            --slots[t0];
            ++slots[t];
          } else {
            repair_at[d] = t0;
          }
        } else {
          std::size_t lightest = damaged.size();
          for (std::size_t e = 0; e < damaged.size(); ++e)
            if (repair_at[e] == t && e != d &&
                (lightest == damaged.size() || mass[e] < mass[lightest]))
              lightest = e;
          if (lightest == damaged.size()) continue;
          repair_at[d] = t;
          repair_at[lightest] = t0;
          const double trial = price(nullptr);
          if (trial < best - 1e-9 * (1.0 + std::fabs(best)))
            best = trial;
          else {
            repair_at[d] = t0;
            repair_at[lightest] = t;
          }
        }
        if (best < before) {
          improved = true;
          break;  // d now sits earlier; move on to the next line
        }
      }
    }
    energize_greedy();
    if (!improved) break;
  }

  std::vector<double> x;
  if (!std::isfinite(price(&x))) return {};
  return x;
}

}  // namespace psr
