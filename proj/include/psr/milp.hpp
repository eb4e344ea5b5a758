// Solver-facing MILP container: columns with bounds/integrality, sparse rows,
// and a name map tying every column back to a model entity.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace psr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind : std::uint8_t {
  LoadShed,    // LS_<bus>_t<t>   unserved MW at a bus and step
  Flow,        // F_<line>_t<t>   MW flow on a line
  Gen,         // P_<gen>_t<t>    dispatch of a generator
  LineBuild,   // B_<line>_t<t>   binary: line repaired at this step
  LineStatus,  // S_<line>_t<t>   cumulated build status in [0,1]
  Beta,        // BETA_<bus>_t<t> net inflow / cranking power at an NBS bus
  Mu,          // MU_<bus>_t<t>   binary energization status of an NBS bus
  Eps,         // EPS_<bus>_t<t>_i<k> binary max-selector, k=0 virtual zero
  Theta,       // TH_<bus>_t<t>   bus angle (angle-coupled extension only)
};

struct VarRef {
  VarKind kind = VarKind::LoadShed;
  std::string entity;  // bus/line/generator id
  int step = 0;        // 1-based schedule step
  int aux = -1;        // Eps candidate index 0..step; -1 elsewhere

  bool operator==(const VarRef&) const = default;
};

struct VarRefHash {
  std::size_t operator()(const VarRef& v) const;
};

// Stable textual rendering used for LP export and diagnostics,
// e.g. B_line7_t2 or EPS_bus2_t3_i0.
std::string var_name(const VarRef& v);

enum class RowSense : std::uint8_t { LE, GE, EQ };

struct MilpRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (column index, coefficient)
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

struct MilpColumn {
  VarRef ref;
  double lb = 0.0;
  double ub = kInf;
  bool integral = false;  // true only for binary columns (bounds within [0,1])
  double cost = 0.0;      // objective coefficient, minimization
};

struct MilpInstance {
  std::string name;
  std::vector<MilpColumn> cols;
  std::vector<MilpRow> rows;
  std::unordered_map<VarRef, int, VarRefHash> index;

  int add_col(const VarRef& ref, double lb, double ub, bool integral,
              double cost = 0.0);
  void add_row(std::string name, std::vector<std::pair<int, double>> terms,
               RowSense sense, double rhs);

  // Column index for a ref, or -1 when the instance has no such column.
  int col(const VarRef& ref) const;
  // Value lookup shorthand used by decoders/checkers; 0.0 for absent refs.
  double value_of(const VarRef& ref, const std::vector<double>& x) const;

  std::size_t num_binary() const;
  // Internal consistency: term indices in range, binary bounds within [0,1],
  // lb <= ub everywhere. Throws std::logic_error on violation.
  void self_check() const;
};

}  // namespace psr
