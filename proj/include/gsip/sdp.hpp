#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace gsip {

// Sparse symmetric matrix stored by its upper triangle (row <= col).
// Repeated positions are summed.
struct SymEntry {
  int row;
  int col;
  double value;
};
using SparseSym = std::vector<SymEntry>;

// Standard primal form:
//   min  <C, X> + c_w' w
//   s.t. <A_i, X> + sum_j a_ij w_j = b_i,  X = diag(X_1..X_B) psd,  w free.
// Dual:
//   max  b' y   s.t.  C - sum_i y_i A_i psd,  sum_i a_ij y_i = c_wj.
// Free variables are optional; without them this is the textbook form.
struct SdpProblem {
  struct Part {
    int block;
    SparseSym matrix;
  };
  struct Constraint {
    std::vector<Part> parts;
    double rhs = 0.0;
  };
  struct FreeVar {
    std::vector<std::pair<int, double>> coeffs;  // (constraint index, a_ij)
    double cost = 0.0;
  };

  std::vector<int> blocks;
  std::vector<Eigen::MatrixXd> cost;  // C_b, dense symmetric; empty means zero
  std::vector<Constraint> constraints;
  std::vector<FreeVar> free_vars;

  int add_block(int size);
  int num_constraints() const { return int(constraints.size()); }
  void validate() const;
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalFailure };

std::string to_string(SdpStatus s);

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double cert_tol = 1e-6;
  // Accepted when the iteration stalls before reaching the tight tolerances.
  double loose_tol = 1e-6;
  int max_iter = 200;
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  std::vector<Eigen::MatrixXd> X;
  Eigen::VectorXd w;
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> S;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  // Optimal but only within loose_tol.
  bool inaccurate = false;

  // PrimalInfeasible: cert_y with b'y = 1, sum y_i A_i nsd, a_j'y = 0.
  // DualInfeasible: (cert_X, cert_w) with X psd, <A_i,X> + a_i'w = 0, <C,X> + c_w'w = -1.
  Eigen::VectorXd cert_y;
  std::vector<Eigen::MatrixXd> cert_X;
  Eigen::VectorXd cert_w;
  bool certificate_verified = false;
  double certificate_error = 0.0;
};

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {});

// Which side's feasibility is asked: the X-problem (Primal) or the y-problem (Dual).
enum class FeasibilitySide { Primal, Dual };

struct FeasibilityResult {
  bool feasible = false;
  bool certified = false;  // infeasibility backed by a verified ray
  SdpSolution solution;
};

// Solves with zero objective on the requested side.
FeasibilityResult feasibility_sdp(const SdpProblem& prob, FeasibilitySide side = FeasibilitySide::Primal,
                                  const SdpOptions& opts = {});

// Sparse SDPA text of the dual problem: min -b'y s.t. sum y_i (-A_i) - (-C) psd.
// Free-variable equalities become a pair of LP rows.
void write_sdpa(const SdpProblem& prob, std::ostream& os);

// Helpers shared with tests.
Eigen::MatrixXd dense(const SparseSym& s, int n);
double inner(const SparseSym& s, const Eigen::MatrixXd& m);

}  // namespace gsip
