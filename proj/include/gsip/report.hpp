#pragma once

#include "gsip/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsip {

struct RunOptions {
  GsipOptions gsip;
  PopOptions convex;  // popsolve options for the single-shot KKT problems
};

// Result of one case (or of the whole problem when it has no cases).
struct CaseReport {
  std::string name;
  std::string status;
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::quiet_NaN();
  int loops = 0;
  double seconds = 0.0;
  std::string message;
};

struct RunReport {
  std::string instance;
  std::string mode;
  std::string status;
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::quiet_NaN();
  double g_final = std::numeric_limits<double>::quiet_NaN();  // min_j g_j at x*
  int loops = 0;
  double seconds = 0.0;
  bool certified = false;
  std::string message;
  std::string chosen_case;
  std::vector<CaseReport> cases;
  std::vector<IterationRecord> trace;  // of the chosen case
  std::vector<std::string> x_names, u_names;
  // Convex mode: lower-level points and multipliers per g_j.
  std::vector<Eigen::VectorXd> z, lambda;

  // Comparison with stored values (corpus runs only).
  std::optional<double> f_ref;
  std::optional<int> loops_ref;
  std::string status_ref;
  bool compared = false;
  bool pass = false;
  std::string verdict;
};

RunReport run_problem(const ProblemFile& pf, const RunOptions& opts = {});

// Runs a corpus instance and compares against its stored values: the status must match,
// f within 1e-3 (relative when |f_ref| > 10) and the loop count within loop_slack.
RunReport run_instance(const CorpusEntry& e, const RunOptions& opts = {}, int loop_slack = 2);

bool value_matches(double f, double f_ref, double tol = 1e-3);

// Human table with 4 decimals, one row per report.
std::string format_table(const std::vector<RunReport>& reports);
// Per-loop table (k, x_k, u_k, f_k, g_k) of one report.
std::string format_trace(const RunReport& r);
// Structured output with full precision.
std::string to_json(const std::vector<RunReport>& reports, bool with_trace = true);

}  // namespace gsip
