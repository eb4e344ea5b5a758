#include "psr/milp.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace psr {

std::size_t VarRefHash::operator()(const VarRef& v) const {
  std::size_t h = std::hash<std::string>{}(v.entity);
  h ^= static_cast<std::size_t>(v.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) +
       (h >> 2);
  h ^= static_cast<std::size_t>(v.step + 1) * 0x100000001b3ULL;
  h ^= static_cast<std::size_t>(v.aux + 2) * 0xff51afd7ed558ccdULL;
  return h;
}

std::string var_name(const VarRef& v) {
  const char* prefix = nullptr;
  const char* entity_word = nullptr;
  switch (v.kind) {
    case VarKind::LoadShed:   prefix = "LS";   entity_word = "bus";  break;
    case VarKind::Flow:       prefix = "F";    entity_word = "line"; break;
    case VarKind::Gen:        prefix = "P";    entity_word = "gen";  break;
    case VarKind::LineBuild:  prefix = "B";    entity_word = "line"; break;
    case VarKind::LineStatus: prefix = "S";    entity_word = "line"; break;
    case VarKind::Beta:       prefix = "BETA"; entity_word = "bus";  break;
    case VarKind::Mu:         prefix = "MU";   entity_word = "bus";  break;
    case VarKind::Eps:        prefix = "EPS";  entity_word = "bus";  break;
    case VarKind::Theta:      prefix = "TH";   entity_word = "bus";  break;
  }
  std::string s = prefix;
  s += '_';
  s += entity_word;
  // Keep LP-format identifiers clean: ids are expected to be alphanumeric;
  // anything else is mapped to '_'.
  for (char ch : v.entity)
    s += (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
  s += "_t" + std::to_string(v.step);
  if (v.kind == VarKind::Eps) s += "_i" + std::to_string(v.aux);
  return s;
}

int MilpInstance::add_col(const VarRef& ref, double lb, double ub,
                          bool integral, double cost) {
  if (index.count(ref))
    throw std::logic_error("duplicate column " + var_name(ref));
  const int j = static_cast<int>(cols.size());
  cols.push_back({ref, lb, ub, integral, cost});
  index.emplace(ref, j);
  return j;
}

void MilpInstance::add_row(std::string name,
                           std::vector<std::pair<int, double>> terms,
                           RowSense sense, double rhs) {
  rows.push_back({std::move(name), std::move(terms), sense, rhs});
}

int MilpInstance::col(const VarRef& ref) const {
  auto it = index.find(ref);
  return it == index.end() ? -1 : it->second;
}

double MilpInstance::value_of(const VarRef& ref,
                              const std::vector<double>& x) const {
  const int j = col(ref);
  return j < 0 ? 0.0 : x.at(static_cast<std::size_t>(j));
}

std::size_t MilpInstance::num_binary() const {
  std::size_t n = 0;
  for (const auto& c : cols) n += c.integral ? 1 : 0;
  return n;
}

void MilpInstance::self_check() const {
  for (const auto& c : cols) {
    if (!(c.lb <= c.ub))
      throw std::logic_error("column " + var_name(c.ref) + ": lb > ub");
    if (c.integral && (c.lb < -1e-12 || c.ub > 1.0 + 1e-12))
      throw std::logic_error("column " + var_name(c.ref) +
                             ": binary bounds outside [0,1]");
  }
  for (const auto& r : rows)
    for (const auto& [j, coef] : r.terms) {
      if (j < 0 || j >= static_cast<int>(cols.size()))
        throw std::logic_error("row " + r.name + ": column index out of range");
      (void)coef;
    }
}

}  // namespace psr
