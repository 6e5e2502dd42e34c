#pragma once

#include "gsip/extensions.hpp"
#include "gsip/popsolve.hpp"

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace gsip {

// min f(x) s.t. x in X, g_j(x, u) >= 0 for all u in U(x), j = 1..s.
// Polynomials over (x, u) put the n x-variables first.
struct GsipProblem {
  std::string name;
  int n = 0;
  int p = 0;
  Polynomial f;
  PolyVector c_eq, c_in;  // X, over x
  PolyVector h_eq, h_in;  // U(x), over (x, u)
  PolyVector g;           // over (x, u)
  ExtensionRule extension;

  int s() const { return int(g.size()); }
  void validate() const;
  Pop upper_pop() const;  // F_0 = X
  NumericSystem numeric_system() const;
};

struct GsipOptions {
  double eps = 1e-6;
  int max_loops = 30;
  PopOptions upper;
  PopOptions lower;
  NumericOptions numeric;
  // Cut with g(x, u_hat) instead of polynomial extensions (only sound for SIPs).
  bool exchange_only = false;
  // When positive, each extension is sampled over X inside [sample_lo, sample_hi].
  int validity_samples = 0;
  Eigen::VectorXd sample_lo, sample_hi;
};

enum class GsipStatus { Optimal, Infeasible, LoopCap, ExtensionFailure, NumericalFailure };

std::string to_string(GsipStatus s);

struct LowerResult {
  std::vector<double> g_hat;           // +inf when U(x_hat) is empty
  std::vector<Eigen::VectorXd> u_hat;  // empty vector when no point exists
  double g_min = std::numeric_limits<double>::infinity();
  bool u_empty = false;
  // Lower problem j only bounded from below by a relaxation; its u_hat may not attain it.
  std::vector<bool> approximate;
};

struct IterationRecord {
  int k = 0;
  Eigen::VectorXd x_hat;
  std::vector<Eigen::VectorXd> minimizers;
  double f_k = 0.0;
  double bound = 0.0;  // relaxation value of (P_k)
  bool upper_certified = true;
  LowerResult lower;
  std::vector<int> labels;  // N_k
  std::vector<Extension> extensions;
  double seconds = 0.0;
};

struct GsipResult {
  GsipStatus status = GsipStatus::NumericalFailure;
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::quiet_NaN();
  double g_min = std::numeric_limits<double>::quiet_NaN();
  int loops = 0;
  bool certified = false;  // infeasibility backed by a verified SDP ray
  std::vector<IterationRecord> trace;
  PolyVector cuts;  // g_j(x, q(x)) >= 0 accumulated over loops
  std::string message;
};

LowerResult check_feasibility(const Eigen::VectorXd& x_hat, const GsipProblem& prob, const PopOptions& opts = {},
                              double eps = 1e-6);

// Extension of u_hat at x_hat according to prob.extension (Auto resolves by pattern matching).
Extension build_extension(const GsipProblem& prob, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat,
                          const NumericOptions& opts = {});

// F_0 strengthened by the constant-u cuts g_j(x, u_hat) >= 0.
Pop classical_exchange_step(const GsipProblem& prob, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat);

GsipResult solve_gsip(const GsipProblem& prob, const GsipOptions& opts = {});

// Restricts a polynomial over (x, u) to u at fixed x.
Polynomial fix_x(const Polynomial& p, int n, int np, const Eigen::VectorXd& x);

}  // namespace gsip
