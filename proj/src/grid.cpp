#include "psr/grid.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace psr {

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& v, const std::string& id) {
  for (const auto& e : v)
    if (e.id == id) return &e;
  return nullptr;
}

void issue(ValidationReport& r, std::string where, std::string message) {
  r.push_back({std::move(where), std::move(message)});
}

}  // namespace

const Bus* GridCase::find_bus(const std::string& id) const {
  return find_by_id(buses, id);
}
const Line* GridCase::find_line(const std::string& id) const {
  return find_by_id(lines, id);
}
const Generator* GridCase::find_generator(const std::string& id) const {
  return find_by_id(generators, id);
}

ValidationReport validate(const GridCase& c) {
  ValidationReport r;

  std::unordered_set<std::string> bus_ids;
  for (const auto& b : c.buses) {
    const std::string where = "bus " + b.id;
    if (b.id.empty()) issue(r, where, "empty id");
    if (!bus_ids.insert(b.id).second) issue(r, where, "duplicate bus id");
    if (b.demand < 0.0) issue(r, where, "demand must be >= 0");
  }

  std::unordered_set<std::string> line_ids;
  for (const auto& l : c.lines) {
    const std::string where = "line " + l.id;
    if (l.id.empty()) issue(r, where, "empty id");
    if (!line_ids.insert(l.id).second) issue(r, where, "duplicate line id");
    if (l.from == l.to) issue(r, where, "endpoints must differ");
    if (!bus_ids.count(l.from))
      issue(r, where, "from-bus '" + l.from + "' does not exist");
    if (!bus_ids.count(l.to))
      issue(r, where, "to-bus '" + l.to + "' does not exist");
    if (!(l.f_min <= 0.0)) issue(r, where, "f_min must be <= 0");
    if (!(l.f_max >= 0.0)) issue(r, where, "f_max must be >= 0");
    if (!std::isfinite(l.f_min) || !std::isfinite(l.f_max))
      issue(r, where, "flow limits must be finite");
    if (l.susceptance <= 0.0) issue(r, where, "susceptance must be > 0");
  }

  std::unordered_set<std::string> gen_ids;
  std::unordered_map<std::string, int> gens_per_bus;
  std::unordered_map<std::string, int> nbs_per_bus;
  for (const auto& g : c.generators) {
    const std::string where = "generator " + g.id;
    if (g.id.empty()) issue(r, where, "empty id");
    if (!gen_ids.insert(g.id).second) issue(r, where, "duplicate generator id");
    if (!bus_ids.count(g.bus))
      issue(r, where, "bus '" + g.bus + "' does not exist");
    if (g.p_min < 0.0) issue(r, where, "p_min must be >= 0");
    if (g.p_max < g.p_min) issue(r, where, "p_max must be >= p_min");
    gens_per_bus[g.bus]++;
    if (g.kind == GenKind::NonBlackStart) {
      nbs_per_bus[g.bus]++;
      if (!(g.p_max > 0.0))
        issue(r, where, "non-black-start unit needs p_max > 0");
      if (!(g.crank_fraction > 0.0))
        issue(r, where, "crank_fraction must be > 0");
    }
  }
  // A bus hosting a non-black-start unit hosts exactly that one generator:
  // its energization bookkeeping reads net bus inflow, which would be
  // polluted by co-located units.
  for (const auto& [bus, n] : nbs_per_bus) {
    if (n > 1)
      issue(r, "bus " + bus, "hosts more than one non-black-start unit");
    else if (gens_per_bus[bus] > 1)
      issue(r, "bus " + bus,
            "hosts a non-black-start unit alongside another generator");
  }

  return r;
}

ValidationReport validate(const GridCase& c, const DamageScenario& s) {
  ValidationReport r = validate(c);

  if (s.budget < 1) issue(r, "scenario.budget", "must be >= 1");
  if (s.horizon < 1) issue(r, "scenario.horizon", "must be >= 1");

  std::unordered_set<std::string> line_ids;
  for (const auto& l : c.lines) line_ids.insert(l.id);
  std::set<std::string> damaged_seen;
  for (const auto& id : s.damaged_line_ids) {
    const std::string where = "scenario.damaged_lines '" + id + "'";
    if (!line_ids.count(id)) issue(r, where, "not a line of the case");
    if (!damaged_seen.insert(id).second) issue(r, where, "listed twice");
  }

  for (const auto& [key, value] : s.demand_profile) {
    const auto& [bus_id, step] = key;
    std::ostringstream where;
    where << "scenario.demand_profile (" << bus_id << ", step " << step << ")";
    if (!c.find_bus(bus_id)) issue(r, where.str(), "bus does not exist");
    if (step < 1 || step > s.horizon)
      issue(r, where.str(), "step outside 1..horizon");
    if (value < 0.0) issue(r, where.str(), "demand must be >= 0");
  }

  return r;
}

double cranking_power(const Generator& g) {
  if (g.kind != GenKind::NonBlackStart)
    throw std::invalid_argument("cranking_power: generator '" + g.id +
                                "' is not a non-black-start unit");
  return g.crank_fraction * g.p_max;
}

double demand_at(const GridCase& c, const DamageScenario& s,
                 const std::string& bus_id, int step) {
  auto it = s.demand_profile.find({bus_id, step});
  if (it != s.demand_profile.end()) return it->second;
  const Bus* b = c.find_bus(bus_id);
  if (!b) throw std::invalid_argument("demand_at: unknown bus '" + bus_id + "'");
  return b->demand;
}

int default_horizon(std::size_t damaged_count, int budget) {
  if (budget < 1) throw std::invalid_argument("default_horizon: budget < 1");
  const auto steps =
      (damaged_count + static_cast<std::size_t>(budget) - 1) /
      static_cast<std::size_t>(budget);
  return static_cast<int>(steps) + 2;
}

}  // namespace psr
