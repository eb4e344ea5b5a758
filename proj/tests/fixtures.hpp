// Shared test fixtures: hand-built small grids with known optima and a
// deterministic random-instance generator sized for the enumeration oracle.
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "psr/grid.hpp"

namespace fixtures {

// Three buses in a row: black-start unit -- L1 -- load -- L2 -- idle unit.
// Both lines damaged. With repair budget 1 the best schedule repairs L1
// first (serve the 20 MW load from step 1... it arrives at step 1 only if L1
// is repaired at step 1), then L2, cranking the far unit at step 2.
inline psr::GridCase chain3(double bs_pmax = 40.0) {
  psr::GridCase c;
  c.name = "chain3";
  c.buses = {{"b1", 0.0}, {"b2", 20.0}, {"b3", 0.0}};
  c.lines = {{"L1", "b1", "b2", -100.0, 100.0, 1.0},
             {"L2", "b2", "b3", -100.0, 100.0, 1.0}};
  psr::Generator bs;
  bs.id = "gbs";
  bs.bus = "b1";
  bs.kind = psr::GenKind::BlackStart;
  bs.p_min = 0.0;
  bs.p_max = bs_pmax;
  psr::Generator nbs;
  nbs.id = "gnbs";
  nbs.bus = "b3";
  nbs.kind = psr::GenKind::NonBlackStart;
  nbs.p_min = 0.0;
  nbs.p_max = 100.0;
  nbs.crank_fraction = 0.1;  // cranking power 10
  c.generators = {bs, nbs};
  return c;
}

inline psr::DamageScenario chain3_scenario(int budget, int horizon = 3) {
  psr::DamageScenario s;
  s.damaged_line_ids = {"L1", "L2"};
  s.budget = budget;
  s.horizon = horizon;
  return s;
}

// Two buses, no black-start capacity at all: the 50 MW load and the idle
// unit's cranking draw (8 MW) stay unserved for the whole horizon.
inline psr::GridCase no_bs_2bus() {
  psr::GridCase c;
  c.name = "nobs2";
  c.buses = {{"u", 0.0}, {"d", 50.0}};
  c.lines = {{"L", "u", "d", -60.0, 60.0, 1.0}};
  psr::Generator nbs;
  nbs.id = "g1";
  nbs.bus = "u";
  nbs.kind = psr::GenKind::NonBlackStart;
  nbs.p_min = 0.0;
  nbs.p_max = 80.0;
  nbs.crank_fraction = 0.1;  // cranking power 8
  c.generators = {nbs};
  return c;
}

inline psr::DamageScenario no_bs_scenario() {
  psr::DamageScenario s;
  s.damaged_line_ids = {"L"};
  s.budget = 1;
  s.horizon = 2;
  return s;
}

// Multiply every power quantity by lambda. Cranking power scales through
// p_max, so the whole instance is a rescaling of the original.
inline psr::GridCase scale_case(psr::GridCase c, double lambda) {
  for (auto& b : c.buses) b.demand *= lambda;
  for (auto& l : c.lines) {
    l.f_min *= lambda;
    l.f_max *= lambda;
  }
  for (auto& g : c.generators) {
    g.p_min *= lambda;
    g.p_max *= lambda;
  }
  return c;
}

inline psr::DamageScenario scale_scenario(psr::DamageScenario s,
                                          double lambda) {
  for (auto& [key, v] : s.demand_profile) v *= lambda;
  return s;
}

// Deterministic small-instance generator. Only the raw mt19937 stream is
// used (its sequence is pinned by the standard), so instances are identical
// on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(static_cast<uint32_t>(seed)) {}
  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng_() % static_cast<uint32_t>(hi - lo + 1));
  }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng_()) / 4294967296.0);
  }
  bool chance(double p) { return real(0.0, 1.0) < p; }

 private:
  std::mt19937 eng_;
};

struct RandomInstance {
  psr::GridCase c;
  psr::DamageScenario s;
};

// Connected grid of 3..6 buses with one black-start unit, 1..2 idle units,
// and 2..4 damaged lines — inside the enumeration guard by construction.
inline RandomInstance random_instance(uint64_t seed) {
  Rng rng(seed);
  RandomInstance ri;
  ri.c.name = "rand" + std::to_string(seed);

  const int nb = rng.uniform(3, 6);
  for (int i = 1; i <= nb; ++i)
    ri.c.buses.push_back({"b" + std::to_string(i), 0.0});

  // Spanning tree plus up to two chords.
  int line_no = 0;
  auto add_line = [&](int from, int to) {
    psr::Line l;
    l.id = "e" + std::to_string(++line_no);
    l.from = "b" + std::to_string(from);
    l.to = "b" + std::to_string(to);
    l.f_max = rng.uniform(2, 12) * 10.0;
    l.f_min = rng.chance(0.2) ? 0.0 : -l.f_max;
    ri.c.lines.push_back(l);
  };
  for (int i = 2; i <= nb; ++i) add_line(rng.uniform(1, i - 1), i);
  const int chords = rng.uniform(0, 2);
  for (int k = 0; k < chords; ++k) {
    const int a = rng.uniform(1, nb), b = rng.uniform(1, nb);
    if (a != b) add_line(a, b);
  }

  // One black-start unit at bus 1.
  psr::Generator bs;
  bs.id = "g_bs";
  bs.bus = "b1";
  bs.kind = psr::GenKind::BlackStart;
  bs.p_min = 0.0;
  bs.p_max = rng.uniform(5, 15) * 10.0;
  ri.c.generators.push_back(bs);

  // One or two idle units on distinct other buses.
  const int n_nbs = rng.uniform(1, 2);
  int next_bus = 2;
  for (int u = 0; u < n_nbs && next_bus <= nb; ++u) {
    const int host = next_bus + rng.uniform(0, nb - next_bus);
    psr::Generator g;
    g.id = "g_n" + std::to_string(u + 1);
    g.bus = "b" + std::to_string(host);
    g.kind = psr::GenKind::NonBlackStart;
    g.p_min = 0.0;
    g.p_max = rng.uniform(4, 12) * 10.0;
    g.crank_fraction = 0.1;
    ri.c.generators.push_back(g);
    next_bus = host + 1;
  }

  // Demands everywhere except (usually) the idle units' buses.
  for (auto& b : ri.c.buses) {
    bool hosted = false;
    for (const auto& g : ri.c.generators)
      if (g.kind == psr::GenKind::NonBlackStart && g.bus == b.id)
        hosted = true;
    if (hosted && !rng.chance(0.3)) continue;
    if (rng.chance(0.75)) b.demand = rng.uniform(0, 6) * 10.0;
  }

  // Damage 2..4 lines (all of them when the grid is small).
  const int want = rng.uniform(2, 4);
  std::vector<int> order(ri.c.lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform(0, static_cast<int>(i) - 1)]);
  for (int k = 0; k < want && k < static_cast<int>(order.size()); ++k)
    ri.s.damaged_line_ids.push_back(ri.c.lines[order[k]].id);

  ri.s.budget = rng.uniform(1, 2);
  ri.s.horizon = rng.uniform(3, 4);
  return ri;
}

}  // namespace fixtures
