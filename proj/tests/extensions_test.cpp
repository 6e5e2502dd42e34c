#include "gsip/extensions.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>


namespace gsip {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(ExtensionProperty, ThousandRandomInstances) {
  props::ExtensionTally t = props::extension_property(1000, 20240613);
  EXPECT_EQ(t.instances, 1000);
  EXPECT_EQ(t.violations, 0) << "worst anchor " << t.worst_anchor << ", worst violation " << t.worst_violation;
}

TEST(ExtensionProperty, ShapeMarginOfBoxExtension) {
  // U(x) = [x1^2 - 1, x1^2 + x2^2 + 1] x [-x2, 1 + x1^2 - x2].
  Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  ExtensionRule rule;
  rule.kind = ExtensionRule::Kind::Box;
  rule.l = {x1 * x1 - 1.0, -x2};
  rule.w = {x1 * x1 + x2 * x2 + 1.0, 1.0 + x1 * x1 - x2};
  VectorXd x_hat(2), u(2);
  x_hat << 0.5, -0.25;
  u << rule.l[0].eval(x_hat), rule.w[1].eval(x_hat);
  Extension e = box_extension(rule.l, rule.w, x_hat, u);
  for (double a = -2; a <= 2; a += 0.1)
    for (double b = -2; b <= 2; b += 0.1) {
      VectorXd x(2);
      x << a, b;
      VectorXd q = eval(e.q, x);
      double margin = std::min({q[0] - rule.l[0].eval(x), rule.w[0].eval(x) - q[0], q[1] - rule.l[1].eval(x),
                                rule.w[1].eval(x) - q[1]});
      EXPECT_NEAR(shape_margin(rule, e.q, x), margin, 1e-12);
      EXPECT_GE(margin, -1e-12);
    }
}

TEST(Extension, ConstantReturnsAnchor) {
  VectorXd x_hat(2), u(3);
  x_hat << 0.3, -1;
  u << 1, 2, 3;
  Extension e = constant_extension(2, x_hat, u);
  ASSERT_EQ(e.q.size(), 3u);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(e.q[j].degree(), u[j] == 0 ? -1 : 0);
  EXPECT_LT((eval(e.q, VectorXd::Constant(2, 5.0)) - u).norm(), 1e-15);
}

// U(x) = [0, x1], q must be sigma * x1 passing through the anchor.
TEST(Extension, BoxMatchesHandFormula) {
  Polynomial x1 = Polynomial::variable(1, 0);
  VectorXd x_hat(1), u(1);
  x_hat << 2.0;
  u << 0.5;
  Extension e = box_extension({Polynomial(1)}, {x1}, x_hat, u);
  EXPECT_NEAR(e.q[0].coeff({1}), 0.25, 1e-14);
  EXPECT_NEAR(e.q[0].coeff({0}), 0.0, 1e-14);
}

TEST(Extension, RejectsAnchorOutsideSet) {
  Polynomial x1 = Polynomial::variable(1, 0);
  VectorXd x_hat(1), u(1);
  x_hat << 1.0;
  u << 3.0;
  EXPECT_THROW(box_extension({Polynomial(1)}, {x1}, x_hat, u), ExtensionError);
  EXPECT_THROW(simplex_extension({Polynomial(1)}, x1, x_hat, u), ExtensionError);
  EXPECT_THROW(ball_extension({Polynomial(1)}, Polynomial(1), x1, x_hat, u), ExtensionError);
  PolyMatrix D(1, 1, 1);
  D(0, 0) = x1;
  EXPECT_THROW(ellipsoid_extension({Polynomial(1)}, D, x_hat, u), ExtensionError);
}

// U(x) = {u : x1 - u1 - u2 >= 0, u >= 0} is u-affine but not a recognized shape.
TEST(Extension, NumericExtensionStaysInsideSystem) {
  const int nx = 1;
  Polynomial x1 = Polynomial::variable(3, 0), u1 = Polynomial::variable(3, 1), u2 = Polynomial::variable(3, 2);
  NumericSystem sys;
  sys.nx = nx;
  Polynomial y = Polynomial::variable(1, 0);
  sys.c_in = {y, 2.0 - y};  // X = [0, 2]
  sys.h_in = {x1 - u1 - 2.0 * u2, u1, u2};
  VectorXd x_hat(1), u(2);
  x_hat << 1.0;
  u << 0.2, 0.3;
  Extension e = numeric_extension(sys, x_hat, u);
  EXPECT_LT((eval(e.q, x_hat) - u).norm(), 1e-6);
  for (double x = 0; x <= 2.0; x += 0.01) {
    VectorXd xv(1);
    xv << x;
    EXPECT_GE(system_margin(sys.h_eq, sys.h_in, nx, e.q, xv), -1e-6) << "x = " << x;
  }
}

TEST(Extension, DetectsBoxAndSimplex) {
  // over (x1, u1, u2)
  Polynomial x1 = Polynomial::variable(3, 0), u1 = Polynomial::variable(3, 1), u2 = Polynomial::variable(3, 2);
  ExtensionRule box = detect_rule({}, {u1, x1 - u1, u2 + 1.0, 2.0 - u2}, 1);
  EXPECT_EQ(box.kind, ExtensionRule::Kind::Box);
  ExtensionRule simplex = detect_rule({}, {u1, u2, x1 * x1 + 1.0 - u1 - u2}, 1);
  EXPECT_EQ(simplex.kind, ExtensionRule::Kind::Simplex);
}

}  // namespace
}  // namespace gsip
