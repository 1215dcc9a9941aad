#pragma once

#include <string>

#include "rimnull/evaluation.hpp"
#include "rimnull/scenario.hpp"

namespace rimnull {

// Dispatches one solver configuration against an assembled system.
WeightSolution run_solver(const NullingSystem& sys, const SolverConfig& cfg,
                          std::optional<std::uint64_t> seed);

// Mean-power suppression across the null targets, in dB: the gain drop of
// the weighted pattern against the w = 1 reference.
double average_suppression_db(const NullingSystem& sys, const Eigen::VectorXcd& w);

// Condition number of A (ratio of extreme singular values).
double condition_number(const NullingSystem& sys);

// solve: writes weights_<method>.json, trace_<method>.csv and
// null_report_<method>.json per configured solver.
void cmd_solve(const Scenario& scenario, const std::string& out_dir);

// pattern: writes pattern.csv for the configured sweep; non-reference
// methods read their weights from a previous solve in the same out_dir.
void cmd_pattern(const Scenario& scenario, const std::string& out_dir);

// analyze: writes correlation.json (all null-target pairs) and
// feasibility.json (pseudoinverse norm criteria).
void cmd_analyze(const Scenario& scenario, const std::string& out_dir);

// table: writes table.csv, one row per configured angle set.
void cmd_table(const Scenario& scenario, const std::string& out_dir);

}  // namespace rimnull
