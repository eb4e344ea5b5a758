// Bounded-variable primal simplex over sparse rows. This is the LP kernel
// under both solve_lp and the branch-and-bound node solves; it supports
// tightening column bounds in place and restarting from a saved basis so a
// child node re-solve costs a handful of pivots instead of a cold start.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psr/milp.hpp"

namespace psr {

enum class LpStatus : uint8_t {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  Singular,  // basis factorization failed beyond repair
};

const char* to_string(LpStatus s);

// Where a nonbasic variable rests.
enum class NonbasicAt : uint8_t { Lower, Upper, Free };

struct Basis {
  std::vector<int> basic;          // row -> column index
  std::vector<NonbasicAt> at;      // column -> rest position (ignored if basic)
};

struct LpResult {
  LpStatus status = LpStatus::Singular;
  double objective = 0.0;
  // Dual objective y.b + sum over nonbasic j of d_j * x_j; equals the primal
  // objective at optimality up to roundoff.
  double dual_objective = 0.0;
  // max(0, objective - dual_objective scaled): reported weak-duality slack.
  double duality_residual = 0.0;
  std::vector<double> x;
  long iterations = 0;
};

// One instance owns the constraint matrix in fixed row-major sparse form;
// equality/inequality senses become slack columns internally so every row is
// an equation and every column is boxed (possibly one-sided).
class LpTableau {
 public:
  explicit LpTableau(const MilpInstance& inst);

  // Tighten/restore bounds of a structural column (branching). The tableau
  // keeps no memory of the original bounds; callers save/restore.
  void set_col_bounds(int col, double lb, double ub);
  double col_lb(int col) const { return lb_[col]; }
  double col_ub(int col) const { return ub_[col]; }

  // Solve from the all-slack basis.
  LpResult solve();
  // Solve starting from a previously saved basis (typically the parent
  // node's optimal basis). Falls back to a cold start if the basis shape
  // does not match.
  LpResult solve_from(const Basis& start);

  Basis save_basis() const;

  int num_structural() const { return n_struct_; }
  int num_rows() const { return m_; }

  // Iteration cap per solve; 0 means the built-in proportional cap.
  long max_iterations = 0;

 private:
  struct Impl;
  LpResult run(Basis basis, bool have_basis);

  int m_ = 0;        // rows
  int n_ = 0;        // columns incl. slacks
  int n_struct_ = 0; // structural columns (prefix of 0..n_)
  std::vector<double> cost_;
  std::vector<double> lb_, ub_;
  // Column-major sparse matrix of the row system A x = rhs_ (slacks included).
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> rhs_;
  Basis last_basis_;
  bool has_last_basis_ = false;
};

}  // namespace psr
