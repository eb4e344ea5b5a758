// Command-line front end: compute restoration schedules, certify small
// instances against the enumeration oracle, or export the optimization model
// as an LP file.
//
// Exit codes: 0 success; 1 input/usage error; 2 infeasible, limit-terminated,
// or certification mismatch.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "psr/grid.hpp"
#include "psr/heuristic.hpp"
#include "psr/io.hpp"
#include "psr/milp.hpp"
#include "psr/model.hpp"
#include "psr/oracle.hpp"
#include "psr/solver.hpp"

namespace {

void print_summary(const psr::GridCase& c, const psr::DamageScenario& s,
                   const psr::RestorationPlan& plan) {
  std::printf("case: %s  (%zu buses, %zu lines, %zu generators)\n",
              c.name.empty() ? "<unnamed>" : c.name.c_str(), c.buses.size(),
              c.lines.size(), c.generators.size());
  std::printf("damaged lines: %zu   per-step repair budget: %d   steps: %d\n",
              s.damaged_line_ids.size(), s.budget, s.horizon);
  std::printf("status: %s   objective (total unserved MW over horizon): %.9g\n",
              plan.status.c_str(), plan.objective);
  std::printf("nodes: %ld   gap: %.3g\n", plan.nodes, plan.gap);
  for (const auto& st : plan.steps) {
    std::string repairs;
    for (const auto& id : st.lines_repaired)
      repairs += (repairs.empty() ? "" : ",") + id;
    std::string energized;
    for (const auto& id : st.nbs_energized)
      energized += (energized.empty() ? "" : ",") + id;
    std::printf("  step %d: unserved %.9g MW | repaired [%s] | energized [%s]\n",
                st.step, st.total_unserved, repairs.c_str(), energized.c_str());
  }
  if (!plan.steps.empty())
    std::printf("final unserved load: %.9g MW\n",
                plan.steps.back().total_unserved);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gridrestore: minimum-unserved-load restoration schedules for "
      "blacked-out grids (line repairs coordinated with generator "
      "energization)"};

  std::string case_path, scenario_path, out_dir = ".";
  std::string mode = "solve";
  double gap = 1e-6, time_limit = 0.0;
  long nodes = 0;
  bool angle_mode = false;

  app.add_option("--case", case_path, "Path to the case JSON file")
      ->required();
  app.add_option("--scenario", scenario_path, "Path to the scenario JSON file")
      ->required();
  app.add_option("--out", out_dir,
                 "Output directory (plan.json, trajectory.csv, model.lp)");
  app.add_option("--mode", mode, "One of: solve, verify, export-lp")
      ->check(CLI::IsMember({"solve", "verify", "export-lp"}));
  app.add_option("--gap", gap, "Relative optimality gap for termination");
  app.add_option("--nodes", nodes, "Node limit (0 = unlimited)");
  app.add_option("--time-limit", time_limit,
                 "Wall-clock limit in seconds (0 = none)");
  app.add_flag("--angle-mode", angle_mode,
               "Couple flows to bus angles through line susceptances");

  CLI11_PARSE(app, argc, argv);

  psr::GridCase c;
  psr::DamageScenario s;
  try {
    c = psr::load_case(case_path);
    s = psr::load_scenario(scenario_path, c);
  } catch (const psr::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto out_path = [&out_dir](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  try {
    psr::BuildOptions opt;
    opt.angle_mode = angle_mode;

    if (mode == "export-lp") {
      const psr::MilpInstance inst = psr::build(c, s, opt);
      psr::export_lp(inst, out_path("model.lp"));
      std::printf("wrote %s (%zu columns, %zu rows, %zu binaries)\n",
                  out_path("model.lp").c_str(), inst.cols.size(),
                  inst.rows.size(), inst.num_binary());
      return 0;
    }

    if (mode == "verify") {
      psr::CrossCheck cc;
      try {
        cc = psr::cross_check(c, s);
      } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
      }
      if (cc.ok) {
        std::printf("CERTIFIED: optimizer %.9g == oracle %.9g (diff %.3g)\n",
                    cc.milp_objective, cc.oracle_objective, cc.difference);
        return 0;
      }
      std::printf("MISMATCH: %s\n", cc.detail.c_str());
      return 2;
    }

    // solve
    const psr::MilpInstance inst = psr::build(c, s, opt);
    psr::SolveLimits limits;
    limits.rel_gap = gap;
    limits.max_nodes = nodes;
    limits.time_limit_s = time_limit;
    limits.hint = psr::restoration_hint(c, s, inst);
    const psr::Solution sol = psr::solve_milp(inst, limits);

    if (sol.status == psr::SolveStatus::Infeasible ||
        sol.status == psr::SolveStatus::Unbounded ||
        sol.status == psr::SolveStatus::NumericalFailure || sol.x.empty()) {
      std::cerr << "no plan: solver status " << psr::to_string(sol.status)
                << "\n";
      return 2;
    }

    const psr::RestorationPlan plan = psr::decode(c, s, inst, sol);
    psr::write_plan(out_path("plan.json"), plan);
    psr::write_trajectory(out_path("trajectory.csv"), plan);
    print_summary(c, s, plan);
    std::printf("wrote %s and %s\n", out_path("plan.json").c_str(),
                out_path("trajectory.csv").c_str());
    return sol.status == psr::SolveStatus::Optimal ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
