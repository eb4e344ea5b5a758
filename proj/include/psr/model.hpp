// Restoration MILP builder and result decoding: translates a grid case plus
// damage scenario into a MilpInstance minimizing total unserved MW, and maps
// solver output back to a per-step restoration plan.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "psr/grid.hpp"
#include "psr/milp.hpp"
#include "psr/solver.hpp"

namespace psr {

struct BuildOptions {
  // Couple flows to bus angles (f = b * (theta_from - theta_to), big-M
  // relaxed on unrepaired lines). Off by default: the base model treats
  // flows as transport variables bounded by line limits only.
  bool angle_mode = false;
};

// Exact column/row counts implied by a (case, scenario) pair in the default
// (transport) mode; the builder is tested against these formulas.
//   columns: LoadShed |B|*T, Flow |A|*T, Gen |G|*T, LineBuild |Ad|*T,
//            LineStatus |Ad|*T, Beta n*T, Mu n*T, Eps n*T*(T+3)/2
//            with n = number of non-black-start units.
//   rows:    balance |B|*T, gating 2*|Ad|*T, status-link |Ad|*T, budget T,
//            beta-link n*T, mu-lower n*T*(T+1)/2, mu-upper n*T*(T+3)/2,
//            eps-sum n*T, nbs-dispatch 2*n*(T-1), mu-mono n*(T-1), reach and
//            inflow-reach r*T each where r counts non-black-start buses whose
//            incident lines are all damaged, shed-floor one per
//            (generator-free demand bus, step) whose intact incident capacity
//            cannot cover the step's demand.
struct ModelShape {
  std::size_t cols_load_shed = 0, cols_flow = 0, cols_gen = 0;
  std::size_t cols_line_build = 0, cols_line_status = 0;
  std::size_t cols_beta = 0, cols_mu = 0, cols_eps = 0;
  std::size_t rows_balance = 0, rows_gating = 0, rows_status_link = 0;
  std::size_t rows_budget = 0, rows_beta_link = 0;
  std::size_t rows_mu_lower = 0, rows_mu_upper = 0, rows_eps_sum = 0;
  std::size_t rows_nbs_dispatch = 0, rows_mu_mono = 0;
  std::size_t rows_reach = 0, rows_inflow_reach = 0, rows_shed_floor = 0;

  std::size_t total_cols() const;
  std::size_t total_rows() const;
};

ModelShape expected_shape(const GridCase& c, const DamageScenario& s);

// Build the restoration MILP. Inputs must validate cleanly; otherwise
// throws std::invalid_argument listing the violations.
MilpInstance build(const GridCase& c, const DamageScenario& s,
                   const BuildOptions& opt = {});

struct PlanStep {
  int step = 0;
  std::vector<std::string> lines_repaired;   // line ids repaired this step
  std::vector<std::string> nbs_energized;    // generator ids flipping on here
  std::map<std::string, double> dispatch;    // generator id -> MW
  std::map<std::string, double> flows;       // line id -> MW
  std::map<std::string, double> unserved;    // bus id -> MW shed (only > 0)
  double total_unserved = 0.0;
};

struct RestorationPlan {
  std::string case_name;
  std::string status;
  double objective = 0.0;
  double gap = 0.0;
  long nodes = 0;
  std::vector<PlanStep> steps;
  // Non-black-start generator id -> step at which its status flipped to
  // energized; units absent from the map never energize in the plan.
  std::map<std::string, int> energized_at;
};

// Decode a solved instance into a restoration plan. The solution must carry
// one value per instance column (throws std::invalid_argument otherwise)
// and have a usable incumbent (Optimal, or a limit status with values).
// The decoded values are re-checked against the model's constraint families
// at tolerance 1e-6; violations throw std::logic_error.
RestorationPlan decode(const GridCase& c, const DamageScenario& s,
                       const MilpInstance& inst, const Solution& sol);

struct ConstraintViolation {
  std::string family;  // e.g. "balance", "gating", "eps-sum"
  std::string where;   // entity/step qualifier
  double residual = 0.0;
};

// Independent re-check of a value vector against every constraint family,
// recomputed from the raw case/scenario data (not from instance rows).
// Families: balance, gating, build-once, budget, beta-link, mu-monotone,
// nbs-dispatch, eps-sum, mu-max. Empty result = all families hold within tol.
std::vector<ConstraintViolation> check_solution(const GridCase& c,
                                                const DamageScenario& s,
                                                const MilpInstance& inst,
                                                const std::vector<double>& x,
                                                double tol = 1e-6);

}  // namespace psr
