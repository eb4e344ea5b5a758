// Plain-text LP rendering of an instance. Output is a pure function of the
// instance (stable iteration order, fixed number formatting), so exporting
// the same model twice yields byte-identical files.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "psr/milp.hpp"
#include "psr/solver.hpp"

namespace psr {

namespace {

constexpr std::size_t kWrapCol = 70;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Appends "text" to the current line, wrapping into a fresh indented line
// when the current one is full.
void put(std::ostringstream& os, std::string& line, const std::string& text) {
  if (!line.empty() && line.size() + 1 + text.size() > kWrapCol) {
    os << line << '\n';
    line = "   ";
  }
  if (!line.empty() && line.back() != ' ') line += ' ';
  line += text;
}

void flush(std::ostringstream& os, std::string& line) {
  if (!line.empty()) os << line << '\n';
  line.clear();
}

std::string term(double coef, const std::string& name, bool first) {
  std::string s;
  if (first) {
    s = coef < 0 ? "- " : "";
  } else {
    s = coef < 0 ? "- " : "+ ";
  }
  s += num(std::fabs(coef));
  s += ' ';
  s += name;
  return s;
}

}  // namespace

std::string render_lp(const MilpInstance& inst) {
  inst.self_check();
  std::vector<std::string> names(inst.cols.size());
  for (std::size_t j = 0; j < inst.cols.size(); ++j)
    names[j] = var_name(inst.cols[j].ref);

  std::ostringstream os;
  if (!inst.name.empty()) os << "\\ " << inst.name << '\n';
  os << "Minimize\n";
  std::string line = " obj:";
  bool first = true;
  for (std::size_t j = 0; j < inst.cols.size(); ++j) {
    if (inst.cols[j].cost == 0.0) continue;
    put(os, line, term(inst.cols[j].cost, names[j], first));
    first = false;
  }
  flush(os, line);

  os << "Subject To\n";
  for (const auto& row : inst.rows) {
    line = " " + row.name + ":";
    first = true;
    bool any = false;
    for (const auto& [j, v] : row.terms) {
      if (v == 0.0) continue;
      put(os, line, term(v, names[j], first));
      first = false;
      any = true;
    }
    if (!any)  // degenerate but legal row: pin a zero multiple of a column
      put(os, line, term(0.0, names.empty() ? "x0" : names[0], true));
    const char* sense = row.sense == RowSense::LE   ? "<="
                        : row.sense == RowSense::GE ? ">="
                                                    : "=";
    put(os, line, std::string(sense) + " " + num(row.rhs));
    flush(os, line);
  }

  os << "Bounds\n";
  for (std::size_t j = 0; j < inst.cols.size(); ++j) {
    const double lb = inst.cols[j].lb, ub = inst.cols[j].ub;
    if (lb == 0.0 && ub == kInf) continue;  // the implied default
    if (lb == -kInf && ub == kInf) {
      os << ' ' << names[j] << " free\n";
    } else if (lb == ub) {
      os << ' ' << names[j] << " = " << num(lb) << '\n';
    } else {
      os << ' ' << (lb == -kInf ? "-infinity" : num(lb)) << " <= " << names[j]
         << " <= " << (ub == kInf ? "+infinity" : num(ub)) << '\n';
    }
  }

  bool any_bin = false;
  for (const auto& c : inst.cols) any_bin = any_bin || c.integral;
  if (any_bin) {
    os << "Binaries\n";
    line.clear();
    for (std::size_t j = 0; j < inst.cols.size(); ++j) {
      if (!inst.cols[j].integral) continue;
      if (line.empty()) line = " ";
      put(os, line, names[j]);
    }
    flush(os, line);
  }
  os << "End\n";
  return os.str();
}

void export_lp(const MilpInstance& inst, const std::string& path) {
  const std::string text = render_lp(inst);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out.good()) throw std::runtime_error(path + ": write failed");
}

}  // namespace psr
