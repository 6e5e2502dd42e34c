#pragma once

#include "gsip/gsip_loop.hpp"

#include <string>
#include <vector>

namespace gsip {

// GSIP whose U(x) is given by inequalities only, with g_j convex and h_i concave in u
// (attested by the user, not checked). g_j may be rational: base.g[j] / g_den[j] with
// g_den[j] > 0 on X x U.
struct ConvexGsip {
  enum class Sign { Positive, Negative, Unknown };

  GsipProblem base;
  PolyVector g_den;  // empty, or one per g_j; a zero polynomial means 1

  // Optional Lagrange multiplier expression: T(x,u) H(x,u) = phi(x,u) I_m.
  bool has_lme = false;
  PolyMatrix T;
  Polynomial phi;
  Sign phi_sign = Sign::Unknown;

  int m() const { return int(base.h_in.size()); }
  Polynomial denominator(int j) const;
  void validate() const;
};

std::string to_string(ConvexGsip::Sign s);

struct HEta {
  PolyMatrix H;    // (p + m) x m
  PolyVector eta;  // p + m
};

// H = [grad_u h_1 ... grad_u h_m; diag(h)], eta = (grad_u g; 0). Polynomials over (x, u).
HEta assemble_H_eta(const PolyVector& h, const Polynomial& g, int n);

// Largest coefficient of T H - phi I after expansion.
double lme_residual(const PolyMatrix& T, const Polynomial& phi, const PolyMatrix& H);

// T = [G^{-1} 0], phi = 1 when the gradient block G of H is square and constant.
bool lme_from_gradient(const PolyVector& h, int n, int p, PolyMatrix& T, Polynomial& phi);

struct KktPop {
  Pop pop;
  int n = 0, s = 0, p = 0, m = 0;
  bool explicit_multipliers = true;
  std::vector<std::string> names;

  int z_index(int j, int k) const { return n + j * p + k; }
  int lambda_index(int j, int i) const { return n + s * p + j * m + i; }
  Eigen::VectorXd x_of(const Eigen::VectorXd& v) const { return v.head(n); }
  Eigen::VectorXd z_of(const Eigen::VectorXd& v, int j) const { return v.segment(n + j * p, p); }
  Eigen::VectorXd lambda_of(const Eigen::VectorXd& v, int j) const;
};

// Variables (x, z_1..z_s, lambda_1..lambda_s). With a denominator D_j, lambda_j stands for
// D_j^2 times the multiplier, which keeps its sign.
KktPop build_kkt_pop(const ConvexGsip& prob);

// Variables (x, z_1..z_s); lambda_j = T eta_j / phi is substituted and denominators cleared.
KktPop build_lme_pop(const ConvexGsip& prob);

struct ConvexResult {
  PopStatus status = PopStatus::NumericalFailure;
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> z, lambda;
  double f = 0.0;
  double bound = 0.0;
  std::vector<double> g;  // g_j(x, z_j)
  int order = 0;
  KktPop kkt;
};

ConvexResult solve_convex(const ConvexGsip& prob, bool use_lme, const PopOptions& opts = {});

}  // namespace gsip
