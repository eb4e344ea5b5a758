#include "psr/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

namespace psr {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

std::string type_name(const json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "number";
}

void check_keys(const json& o, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!o.is_object()) fail(path, "expected an object, got " + type_name(o));
  for (const auto& item : o.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail(path, "unknown field '" + item.key() + "'");
  }
}

const json& need(const json& o, const char* key, const std::string& path) {
  auto it = o.find(key);
  if (it == o.end()) fail(path, std::string("missing required field '") + key + "'");
  return *it;
}

std::string need_str(const json& o, const char* key, const std::string& path) {
  const json& v = need(o, key, path);
  if (!v.is_string())
    fail(path + "." + key, "expected a string, got " + type_name(v));
  return v.get<std::string>();
}

double need_num(const json& o, const char* key, const std::string& path) {
  const json& v = need(o, key, path);
  if (!v.is_number())
    fail(path + "." + key, "expected a number, got " + type_name(v));
  return v.get<double>();
}

double opt_num(const json& o, const char* key, double fallback,
               const std::string& path) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  if (!it->is_number())
    fail(path + "." + key, "expected a number, got " + type_name(*it));
  return it->get<double>();
}

int need_int(const json& o, const char* key, const std::string& path) {
  const json& v = need(o, key, path);
  if (!v.is_number_integer())
    fail(path + "." + key, "expected an integer, got " + type_name(v));
  return v.get<int>();
}

std::string opt_str(const json& o, const char* key, const std::string& path) {
  auto it = o.find(key);
  if (it == o.end()) return {};
  if (!it->is_string())
    fail(path + "." + key, "expected a string, got " + type_name(*it));
  return it->get<std::string>();
}

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ParseError(std::string(what) + ": not valid JSON");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  if (!in.good() && !in.eof()) throw ParseError(path + ": read error");
  return os.str();
}

void throw_validation(const ValidationReport& report, const char* what) {
  if (report.empty()) return;
  std::ostringstream os;
  os << what << ": validation failed:";
  for (std::size_t i = 0; i < report.size() && i < 8; ++i)
    os << " [" << report[i].where << ": " << report[i].message << "]";
  if (report.size() > 8) os << " (+" << report.size() - 8 << " more)";
  throw ParseError(os.str());
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

GridCase parse_case(const std::string& json_text) {
  const json j = parse_text(json_text, "case");
  check_keys(j, {"name", "description", "buses", "lines", "generators"},
             "case");
  GridCase c;
  c.name = opt_str(j, "name", "case");
  c.description = opt_str(j, "description", "case");

  const json& buses = need(j, "buses", "case");
  if (!buses.is_array()) fail("case.buses", "expected an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string p = "case.buses[" + std::to_string(i) + "]";
    check_keys(buses[i], {"id", "demand"}, p);
    Bus b;
    b.id = need_str(buses[i], "id", p);
    b.demand = need_num(buses[i], "demand", p);
    c.buses.push_back(std::move(b));
  }

  const json& lines = need(j, "lines", "case");
  if (!lines.is_array()) fail("case.lines", "expected an array");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string p = "case.lines[" + std::to_string(i) + "]";
    check_keys(lines[i], {"id", "from", "to", "f_min", "f_max", "susceptance"},
               p);
    Line l;
    l.id = need_str(lines[i], "id", p);
    l.from = need_str(lines[i], "from", p);
    l.to = need_str(lines[i], "to", p);
    l.f_min = need_num(lines[i], "f_min", p);
    l.f_max = need_num(lines[i], "f_max", p);
    l.susceptance = opt_num(lines[i], "susceptance", 1.0, p);
    c.lines.push_back(std::move(l));
  }

  const json& gens = need(j, "generators", "case");
  if (!gens.is_array()) fail("case.generators", "expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = "case.generators[" + std::to_string(i) + "]";
    check_keys(gens[i],
               {"id", "bus", "kind", "p_min", "p_max", "crank_fraction"}, p);
    Generator g;
    g.id = need_str(gens[i], "id", p);
    g.bus = need_str(gens[i], "bus", p);
    const std::string kind = need_str(gens[i], "kind", p);
    if (kind == "BS")
      g.kind = GenKind::BlackStart;
    else if (kind == "NBS")
      g.kind = GenKind::NonBlackStart;
    else
      fail(p + ".kind", "expected \"BS\" or \"NBS\", got \"" + kind + "\"");
    g.p_min = need_num(gens[i], "p_min", p);
    g.p_max = need_num(gens[i], "p_max", p);
    g.crank_fraction = opt_num(gens[i], "crank_fraction", 0.1, p);
    c.generators.push_back(std::move(g));
  }

  throw_validation(validate(c), "case");
  return c;
}

GridCase load_case(const std::string& path) {
  try {
    return parse_case(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DamageScenario parse_scenario(const std::string& json_text,
                              const GridCase& c) {
  const json j = parse_text(json_text, "scenario");
  check_keys(j, {"damaged_lines", "budget", "horizon", "demand_profile"},
             "scenario");
  DamageScenario s;

  const json& dmg = need(j, "damaged_lines", "scenario");
  if (!dmg.is_array()) fail("scenario.damaged_lines", "expected an array");
  for (std::size_t i = 0; i < dmg.size(); ++i) {
    const std::string p = "scenario.damaged_lines[" + std::to_string(i) + "]";
    if (!dmg[i].is_string())
      fail(p, "expected a string, got " + type_name(dmg[i]));
    s.damaged_line_ids.push_back(dmg[i].get<std::string>());
  }

  s.budget = need_int(j, "budget", "scenario");
  if (s.budget < 1) fail("scenario.budget", "must be at least 1");
  if (auto it = j.find("horizon"); it != j.end()) {
    if (!it->is_number_integer())
      fail("scenario.horizon", "expected an integer, got " + type_name(*it));
    s.horizon = it->get<int>();
  } else {
    s.horizon = default_horizon(s.damaged_line_ids.size(), s.budget);
  }

  if (auto it = j.find("demand_profile"); it != j.end()) {
    if (!it->is_object())
      fail("scenario.demand_profile",
           "expected an object, got " + type_name(*it));
    for (const auto& bus_item : it->items()) {
      const std::string bp = "scenario.demand_profile." + bus_item.key();
      if (!bus_item.value().is_object())
        fail(bp, "expected an object, got " + type_name(bus_item.value()));
      for (const auto& step_item : bus_item.value().items()) {
        const std::string sp = bp + "." + step_item.key();
        int step = 0;
        try {
          std::size_t used = 0;
          step = std::stoi(step_item.key(), &used);
          if (used != step_item.key().size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          fail(sp, "step key must be an integer");
        }
        if (!step_item.value().is_number())
          fail(sp, "expected a number, got " + type_name(step_item.value()));
        s.demand_profile[{bus_item.key(), step}] =
            step_item.value().get<double>();
      }
    }
  }

  throw_validation(validate(c, s), "scenario");
  return s;
}

DamageScenario load_scenario(const std::string& path, const GridCase& c) {
  try {
    return parse_scenario(slurp(path), c);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string case_to_json(const GridCase& c) {
  json j = json::object();
  if (!c.name.empty()) j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  j["buses"] = json::array();
  for (const auto& b : c.buses)
    j["buses"].push_back(json{{"id", b.id}, {"demand", b.demand}});
  j["lines"] = json::array();
  for (const auto& l : c.lines) {
    json lj{{"id", l.id}, {"from", l.from}, {"to", l.to},
            {"f_min", l.f_min}, {"f_max", l.f_max}};
    if (l.susceptance != 1.0) lj["susceptance"] = l.susceptance;
    j["lines"].push_back(std::move(lj));
  }
  j["generators"] = json::array();
  for (const auto& g : c.generators) {
    json gj{{"id", g.id},
            {"bus", g.bus},
            {"kind", g.kind == GenKind::BlackStart ? "BS" : "NBS"},
            {"p_min", g.p_min},
            {"p_max", g.p_max}};
    if (g.crank_fraction != 0.1) gj["crank_fraction"] = g.crank_fraction;
    j["generators"].push_back(std::move(gj));
  }
  return j.dump(2) + "\n";
}

std::string scenario_to_json(const DamageScenario& s) {
  json j = json::object();
  j["damaged_lines"] = s.damaged_line_ids;
  j["budget"] = s.budget;
  j["horizon"] = s.horizon;
  if (!s.demand_profile.empty()) {
    json prof = json::object();
    for (const auto& [key, value] : s.demand_profile)
      prof[key.first][std::to_string(key.second)] = value;
    j["demand_profile"] = std::move(prof);
  }
  return j.dump(2) + "\n";
}

void write_case(const std::string& path, const GridCase& c) {
  atomic_write(path, case_to_json(c));
}

void write_scenario(const std::string& path, const DamageScenario& s) {
  atomic_write(path, scenario_to_json(s));
}

std::string trajectory_csv(const RestorationPlan& plan) {
  std::ostringstream os;
  os << "step,total_unserved_MW,lines_repaired,nbs_energized\n";
  std::size_t energized = 0;
  for (const auto& st : plan.steps) {
    energized += st.nbs_energized.size();
    os << st.step << ',' << fmt9(st.total_unserved) << ','
       << st.lines_repaired.size() << ',' << energized << '\n';
  }
  return os.str();
}

void write_trajectory(const std::string& path, const RestorationPlan& plan) {
  atomic_write(path, trajectory_csv(plan));
}

std::string plan_to_json(const RestorationPlan& plan) {
  json j = json::object();
  j["case"] = plan.case_name;
  j["status"] = plan.status;
  j["objective"] = plan.objective;
  j["gap"] = plan.gap;
  j["nodes"] = plan.nodes;
  json en = json::object();
  for (const auto& [gen, step] : plan.energized_at) en[gen] = step;
  j["energized_at"] = std::move(en);
  j["steps"] = json::array();
  for (const auto& st : plan.steps) {
    json sj = json::object();
    sj["step"] = st.step;
    sj["lines_repaired"] = st.lines_repaired;
    sj["nbs_energized"] = st.nbs_energized;
    sj["total_unserved_MW"] = st.total_unserved;
    json un = json::object();
    for (const auto& [bus, v] : st.unserved) un[bus] = v;
    sj["unserved"] = std::move(un);
    json dis = json::object();
    for (const auto& [gen, v] : st.dispatch) dis[gen] = v;
    sj["dispatch"] = std::move(dis);
    json fl = json::object();
    for (const auto& [line, v] : st.flows) fl[line] = v;
    sj["flows"] = std::move(fl);
    j["steps"].push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

void write_plan(const std::string& path, const RestorationPlan& plan) {
  atomic_write(path, plan_to_json(plan));
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path dest(path);
  fs::path tmp = dest;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out.good()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error(path + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error(path + ": rename failed: " + ec.message());
  }
}

}  // namespace psr
