#pragma once

#include "gsip/polynomial.hpp"
#include "gsip/sdp.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace gsip {

// min f(x) s.t. eq(x) = 0, ineq(x) >= 0.
struct Pop {
  int nvars = 0;
  Polynomial objective;
  PolyVector eq;
  PolyVector ineq;

  void validate() const;
  // max over objective and constraints of ceil(deg/2), at least 1.
  int d0() const;
  int max_degree() const;
};

// Position of each exponent in monomial_basis(nvars, degree).
class MonomialIndex {
 public:
  MonomialIndex(int nvars, int degree);
  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const std::vector<Exponent>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }
  // -1 when absent.
  int find(const Exponent& e) const;
  int at(const Exponent& e) const;

 private:
  int nvars_;
  int degree_;
  std::vector<Exponent> basis_;
  std::map<Exponent, int> index_;
};

// Truncated moment sequence of degree 2*order.
struct Tms {
  int nvars = 0;
  int order = 0;
  Eigen::VectorXd values;  // indexed by monomial_basis(nvars, 2*order)

  // Moments of an atomic measure sum_j w_j delta_{pts_j}.
  static Tms from_atoms(const std::vector<Eigen::VectorXd>& pts, const std::vector<double>& weights, int order);
  double operator[](const Exponent& e) const;
  // <p, y>
  double apply(const Polynomial& p) const;
  Eigen::VectorXd first_moments() const;
};

Eigen::MatrixXd moment_matrix(const Tms& y, int d);

// Side t = k - ceil(deg(p)/2) so that deg(p phi^2) <= 2k.
int localizing_order(const Polynomial& p, int k);
Eigen::MatrixXd localizing_matrix(const Polynomial& p, const Tms& y, int k);

// Entries <p x^gamma, y> for gamma in monomial_basis(n, two_k - deg(p)).
Eigen::VectorXd localizing_vector(const Polynomial& p, const Tms& y, int two_k);

struct MomentRelaxation {
  SdpProblem sdp;
  int order = 0;
  int nvars = 0;
  // SDP constraint i corresponds to moment basis()[i]; the moment value is y_dual[i].
  std::vector<Exponent> basis;

  Tms tms(const SdpSolution& sol) const;
  // Relaxation value <f, y> at an optimal SDP solution.
  double value(const SdpSolution& sol) const { return -sol.dual_value; }
};

MomentRelaxation build_moment_relaxation(const Pop& pop, int k);

struct FlatResult {
  bool flat = false;
  int t = 0;
  int rank = 0;
};

int numerical_rank(const Eigen::MatrixXd& m, double rank_tol);

FlatResult check_flat_truncation(const Tms& y, int d0, int k, double rank_tol = 1e-6);

// Atoms of a flat truncation via multiplication matrices in a pivoted Cholesky basis
// and a Schur decomposition of a fixed random combination.
std::vector<Eigen::VectorXd> extract_minimizers(const Tms& y, int t, int r);

}  // namespace gsip
