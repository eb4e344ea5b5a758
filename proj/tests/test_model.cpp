#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "psr/milp.hpp"
#include "psr/model.hpp"
#include "psr/solver.hpp"

using namespace psr;

namespace {

// Sum of incident |capacity| at a bus, the basis for the switching constant.
double incident_cap(const GridCase& c, const std::string& bus) {
  double cap = 0.0;
  for (const auto& l : c.lines)
    if (l.from == bus || l.to == bus) cap += l.f_max + std::fabs(l.f_min);
  return cap;
}

}  // namespace

TEST_CASE("variable names are readable and unique") {
  CHECK(var_name({VarKind::LoadShed, "b2", 3}) == "LS_busb2_t3");
  CHECK(var_name({VarKind::Flow, "L1", 1}) == "F_lineL1_t1");
  CHECK(var_name({VarKind::Gen, "g7", 2}) == "P_geng7_t2");
  CHECK(var_name({VarKind::LineBuild, "L1", 2}) == "B_lineL1_t2");
  CHECK(var_name({VarKind::LineStatus, "L1", 2}) == "S_lineL1_t2");
  CHECK(var_name({VarKind::Beta, "b3", 1}) == "BETA_busb3_t1");
  CHECK(var_name({VarKind::Mu, "b3", 4}) == "MU_busb3_t4");
  CHECK(var_name({VarKind::Eps, "b3", 3, 0}) == "EPS_busb3_t3_i0");
  // Identifier characters outside [A-Za-z0-9_] are sanitized.
  CHECK(var_name({VarKind::Flow, "a-b.c", 1}) == "F_linea_b_c_t1");
}

TEST_CASE("instance rejects duplicate columns and bad rows") {
  MilpInstance inst;
  inst.add_col({VarKind::Flow, "x", 1}, 0.0, 1.0, false);
  CHECK_THROWS_AS(inst.add_col({VarKind::Flow, "x", 1}, 0.0, 1.0, false),
                  std::logic_error);
  inst.add_row("r", {{0, 1.0}}, RowSense::LE, 1.0);
  CHECK_NOTHROW(inst.self_check());
  inst.rows.push_back({"bad", {{7, 1.0}}, RowSense::LE, 0.0});
  CHECK_THROWS_AS(inst.self_check(), std::logic_error);
}

TEST_CASE("shape formulas match the built chain instance") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const ModelShape sh = expected_shape(c, s);
  const MilpInstance inst = build(c, s);

  CHECK(inst.cols.size() == sh.total_cols());
  CHECK(inst.rows.size() == sh.total_rows());

  // |B|=3, |A|=2, |G|=2, damaged=2, T=3, one idle unit.
  CHECK(sh.cols_load_shed == 9);
  CHECK(sh.cols_flow == 6);
  CHECK(sh.cols_gen == 6);
  CHECK(sh.cols_line_build == 6);
  CHECK(sh.cols_line_status == 6);
  CHECK(sh.cols_beta == 3);
  CHECK(sh.cols_mu == 3);
  CHECK(sh.cols_eps == 9);  // T(T+3)/2 = 9 for T=3
  CHECK(sh.rows_balance == 9);
  CHECK(sh.rows_gating == 12);
  CHECK(sh.rows_status_link == 6);
  CHECK(sh.rows_budget == 3);
  CHECK(sh.rows_beta_link == 3);
  CHECK(sh.rows_mu_lower == 6);   // T(T+1)/2
  CHECK(sh.rows_mu_upper == 9);   // T(T+3)/2
  CHECK(sh.rows_eps_sum == 3);
  CHECK(sh.rows_nbs_dispatch == 4);  // 2(T-1)
  CHECK(sh.rows_mu_mono == 2);
  CHECK(sh.rows_reach == 3);         // b3's only incident line is damaged
  CHECK(sh.rows_inflow_reach == 3);
  CHECK(sh.rows_shed_floor == 3);  // b2 is generator-free with demand
}

TEST_CASE("9-bus all-damaged shape pins") {
  const GridCase c = [] {
    GridCase g;
    for (int i = 1; i <= 9; ++i) g.buses.push_back({std::to_string(i), 0.0});
    g.buses[4].demand = 125;
    g.buses[5].demand = 90;
    g.buses[7].demand = 100;
    auto line = [&g](const char* id, const char* a, const char* b, double cap) {
      g.lines.push_back({id, a, b, -cap, cap, 1.0});
    };
    line("1", "1", "4", 140);
    line("2", "4", "5", 100);
    line("3", "5", "7", 80);
    line("4", "2", "7", 163);
    line("5", "7", "8", 75);
    line("6", "8", "9", 75);
    line("7", "3", "9", 108);
    line("8", "9", "6", 60);
    line("9", "6", "4", 60);
    Generator g1;
    g1.id = "G1";
    g1.bus = "1";
    g1.kind = GenKind::BlackStart;
    g1.p_max = 140;
    Generator g2;
    g2.id = "G2";
    g2.bus = "2";
    g2.kind = GenKind::NonBlackStart;
    g2.p_max = 163;
    Generator g3;
    g3.id = "G3";
    g3.bus = "3";
    g3.kind = GenKind::NonBlackStart;
    g3.p_max = 108;
    g.generators = {g1, g2, g3};
    return g;
  }();
  DamageScenario s;
  for (const auto& l : c.lines) s.damaged_line_ids.push_back(l.id);
  s.budget = 3;
  s.horizon = 4;

  const ModelShape sh = expected_shape(c, s);
  CHECK(sh.cols_line_build == 36);  // 9 lines x 4 steps
  CHECK(sh.cols_eps == 28);         // 2 units x T(T+3)/2 = 2 x 14
  CHECK(sh.cols_mu == 8);
  const MilpInstance inst = build(c, s);
  CHECK(inst.cols.size() == sh.total_cols());
  CHECK(inst.rows.size() == sh.total_rows());
  CHECK(inst.num_binary() == 36 + 8 + 28);

  // Exactly t+1 selector columns exist at (bus, t): candidates 0..t.
  for (int i = 0; i <= 3; ++i)
    CHECK(inst.col({VarKind::Eps, "2", 3, i}) >= 0);
  CHECK(inst.col({VarKind::Eps, "2", 3, 4}) == -1);
}

TEST_CASE("no binaries without damage or idle units") {
  GridCase c = fixtures::chain3();
  c.generators.pop_back();  // drop the idle unit
  DamageScenario s;
  s.budget = 1;
  s.horizon = 2;
  const MilpInstance inst = build(c, s);
  CHECK(inst.num_binary() == 0);
  const ModelShape sh = expected_shape(c, s);
  CHECK(sh.cols_line_build == 0);
  CHECK(sh.cols_beta == 0);
  CHECK(inst.cols.size() == sh.total_cols());
}

TEST_CASE("column bounds encode the operating rules") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const MilpInstance inst = build(c, s);

  // Shed capacity: native demand, plus cranking power where an idle unit sits.
  CHECK(inst.cols[inst.col({VarKind::LoadShed, "b2", 1})].ub ==
        doctest::Approx(20.0));
  CHECK(inst.cols[inst.col({VarKind::LoadShed, "b3", 2})].ub ==
        doctest::Approx(10.0));
  CHECK(inst.cols[inst.col({VarKind::LoadShed, "b1", 1})].ub ==
        doctest::Approx(0.0));

  // The idle unit is a fixed cranking load at step 1, dispatchable later.
  const MilpColumn& p1 = inst.cols[inst.col({VarKind::Gen, "gnbs", 1})];
  CHECK(p1.lb == doctest::Approx(-10.0));
  CHECK(p1.ub == doctest::Approx(-10.0));
  const MilpColumn& p2 = inst.cols[inst.col({VarKind::Gen, "gnbs", 2})];
  CHECK(p2.lb == doctest::Approx(-10.0));
  CHECK(p2.ub == doctest::Approx(100.0));

  // Black-start units dispatch from step 1.
  const MilpColumn& pb = inst.cols[inst.col({VarKind::Gen, "gbs", 1})];
  CHECK(pb.lb == doctest::Approx(0.0));
  CHECK(pb.ub == doctest::Approx(40.0));

  // Status columns are continuous in [0,1]; build columns binary.
  CHECK(!inst.cols[inst.col({VarKind::LineStatus, "L1", 2})].integral);
  CHECK(inst.cols[inst.col({VarKind::LineBuild, "L1", 2})].integral);

  // The bus-status column is bounded by deliverable inflow over crank.
  const MilpColumn& beta = inst.cols[inst.col({VarKind::Beta, "b3", 1})];
  const double cap = incident_cap(c, "b3") / 10.0;
  CHECK(beta.lb == doctest::Approx(-cap));
  CHECK(beta.ub == doctest::Approx(std::min(1.0, cap)));
}

TEST_CASE("the switching constant dominates the bus-status range") {
  // A mu upper row with an inflow term must stay satisfiable when its
  // selector is off, for any inflow the lines could physically deliver:
  // M > incident_cap/crank. The zero-candidate rows carry no inflow term
  // and pin mu against the binary range instead.
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const MilpInstance inst = build(c, s);
  const double beta_cap = incident_cap(c, "b3") / 10.0;
  int with_inflow = 0, zero_candidate = 0;
  for (const auto& row : inst.rows) {
    if (row.name.rfind("mu_hi_", 0) != 0) continue;
    // rhs is the switching constant M for these rows.
    if (row.terms.size() == 3) {
      CHECK(row.rhs > beta_cap);
      ++with_inflow;
    } else {
      CHECK(row.rhs == 1.0);
      ++zero_candidate;
    }
  }
  CHECK(with_inflow == 6);    // candidates 1..t over t=1..3
  CHECK(zero_candidate == 3);  // one per step
}

TEST_CASE("build validates its inputs") {
  GridCase c = fixtures::chain3();
  DamageScenario s = fixtures::chain3_scenario(1);
  s.damaged_line_ids.push_back("L99");
  CHECK_THROWS_AS(build(c, s), std::invalid_argument);
}

TEST_CASE("angle mode adds coupling and keeps the base model solvable") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(2, 3);
  BuildOptions opt;
  opt.angle_mode = true;
  const MilpInstance inst = build(c, s, opt);
  CHECK(inst.col({VarKind::Theta, "b1", 1}) >= 0);
  const ModelShape sh = expected_shape(c, s);
  CHECK(inst.cols.size() == sh.total_cols() + 9);  // one angle per bus/step

  const Solution sol = solve_milp(inst, {});
  REQUIRE(sol.status == SolveStatus::Optimal);
  // Angles do not change the chain optimum: a tree has no loop constraints.
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("decode rejects unusable solutions and size mismatches") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const MilpInstance inst = build(c, s);
  Solution sol;
  sol.status = SolveStatus::Infeasible;
  CHECK_THROWS_AS(decode(c, s, inst, sol), std::invalid_argument);
  sol.status = SolveStatus::Optimal;
  sol.x.assign(3, 0.0);  // wrong length
  CHECK_THROWS_AS(decode(c, s, inst, sol), std::invalid_argument);
}

TEST_CASE("check_solution flags violations by family") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const MilpInstance inst = build(c, s);

  // All-zero vector: balance fails wherever demand or crank draw exists,
  // and the idle unit's fixed draw is violated too.
  std::vector<double> x(inst.cols.size(), 0.0);
  auto viols = check_solution(c, s, inst, x);
  bool balance = false, dispatch = false;
  for (const auto& v : viols) {
    if (v.family == "balance") balance = true;
    if (v.family == "nbs-dispatch") dispatch = true;
  }
  CHECK(balance);
  CHECK(dispatch);
}

TEST_CASE("decode on a real solve produces a coherent plan") {
  const GridCase c = fixtures::chain3();
  const DamageScenario s = fixtures::chain3_scenario(1, 3);
  const MilpInstance inst = build(c, s);
  const Solution sol = solve_milp(inst, {});
  REQUIRE(sol.status == SolveStatus::Optimal);
  const RestorationPlan plan = decode(c, s, inst, sol);

  CHECK(plan.steps.size() == 3);
  // Each damaged line repaired exactly once across the horizon.
  int repairs = 0;
  for (const auto& st : plan.steps) {
    CHECK(st.lines_repaired.size() <= 1);  // budget
    repairs += static_cast<int>(st.lines_repaired.size());
  }
  CHECK(repairs == 2);
  REQUIRE(plan.energized_at.count("gnbs") == 1);
  CHECK(plan.energized_at.at("gnbs") == 2);
  CHECK(plan.objective == doctest::Approx(10.0));
  CHECK(plan.steps.back().total_unserved == doctest::Approx(0.0));
}
