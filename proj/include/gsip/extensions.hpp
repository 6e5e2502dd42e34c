#pragma once

#include "gsip/polynomial.hpp"
#include "gsip/sdp.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsip {

class ExtensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape data for U(x); all polynomials are in x only.
struct ExtensionRule {
  enum class Kind { Auto, Constant, Box, Simplex, Ball, Ellipsoid, Numeric };
  Kind kind = Kind::Auto;
  PolyVector l;        // box lower bounds, simplex lower bounds
  PolyVector w;        // box upper bounds
  Polynomial budget;   // simplex: e'u <= budget
  PolyVector center;   // ball / ellipsoid a(x)
  Polynomial inner;    // ball l(x)
  Polynomial outer;    // ball w(x)
  PolyMatrix shape;    // ellipsoid D(x)
  int degree = 2;      // numeric: starting degree of q
  int max_degree = 4;  // numeric: escalation cap
};

std::string to_string(ExtensionRule::Kind k);

struct Extension {
  PolyVector q;
  Eigen::VectorXd x_hat;
  Eigen::VectorXd u_hat;
  std::string rule;
  // Worst sampled U-membership margin over X; NaN when no sampler was supplied.
  double validity = std::numeric_limits<double>::quiet_NaN();
  int degree = 0;
};

Extension constant_extension(int nx, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat);
Extension box_extension(const PolyVector& l, const PolyVector& w, const Eigen::VectorXd& x_hat,
                        const Eigen::VectorXd& u_hat);
Extension simplex_extension(const PolyVector& l, const Polynomial& w, const Eigen::VectorXd& x_hat,
                            const Eigen::VectorXd& u_hat);
Extension ball_extension(const PolyVector& a, const Polynomial& l, const Polynomial& w,
                         const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat);
Extension ellipsoid_extension(const PolyVector& a, const PolyMatrix& D, const Eigen::VectorXd& x_hat,
                              const Eigen::VectorXd& u_hat);

// X and U(x) in polynomial form; h is over (x, u) with nx leading x-variables.
struct NumericSystem {
  int nx = 0;
  PolyVector c_eq, c_in;
  PolyVector h_eq, h_in;
};

struct NumericOptions {
  int degree = 2;
  int max_degree = 4;
  SdpOptions sdp;
};

// Solves the conic feasibility system for q of increasing degree; throws ExtensionError
// when no degree up to max_degree works.
Extension numeric_extension(const NumericSystem& sys, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat,
                            const NumericOptions& opts = {});

// Smallest margin of the shape inequalities of U(x) at (x, q(x)); >= 0 means q(x) in U(x).
double shape_margin(const ExtensionRule& rule, const PolyVector& q, const Eigen::VectorXd& x);

// Smallest value of h_in(x, q(x)) and -|h_eq(x, q(x))|.
double system_margin(const PolyVector& h_eq, const PolyVector& h_in, int nx, const PolyVector& q,
                     const Eigen::VectorXd& x);

// Halton points in the box [lo, hi].
std::vector<Eigen::VectorXd> halton_points(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count,
                                           int skip = 1);

// Pattern-matches box / simplex / constant structure of U(x) from h; returns Kind::Auto
// when nothing matches (the caller may then try Numeric).
ExtensionRule detect_rule(const PolyVector& h_eq, const PolyVector& h_in, int nx);

}  // namespace gsip
