#include "gsip/convex_kkt.hpp"
#include "gsip/corpus.hpp"

#include <gtest/gtest.h>

#include <random>

namespace gsip {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Polynomial v(int n, int i) { return Polynomial::variable(n, i); }

// min -x over [0, 2] with u^2 - 2 x u + 1 >= 0 for u in [0, x]; binding at u = x gives x <= 1.
ConvexGsip interval_problem() {
  ConvexGsip c;
  GsipProblem& P = c.base;
  P.name = "interval";
  P.n = 1;
  P.p = 1;
  P.f = -v(1, 0);
  P.c_in = {v(1, 0), 2.0 - v(1, 0)};
  Polynomial x = v(2, 0), u = v(2, 1);
  P.h_in = {u, x - u};
  P.g = {u * u - 2.0 * x * u + 1.0};
  return c;
}

double grid_oracle(const ConvexGsip& c) {
  const GsipProblem& P = c.base;
  double best = INFINITY;
  VectorXd xu(2);
  for (int i = 0; i <= 2000; ++i) {
    double x = 2.0 * i / 2000;
    double worst = INFINITY;
    for (int j = 0; j <= 2000; ++j) {
      xu << x, x * j / 2000;
      worst = std::min(worst, P.g[0].eval(xu));
    }
    if (worst >= 0) best = std::min(best, P.f.eval(VectorXd::Constant(1, x)));
  }
  return best;
}

TEST(ConvexKkt, HEtaLayout) {
  const int n = 1;
  Polynomial x = v(3, 0), u1 = v(3, 1), u2 = v(3, 2);
  PolyVector h = {x - u1 - u2, u1};
  HEta he = assemble_H_eta(h, u1 * u1 + x * u2, n);
  ASSERT_EQ(he.H.rows, 4);
  ASSERT_EQ(he.H.cols, 2);
  VectorXd pt(3);
  pt << 2, 0.5, 0.25;
  MatrixXd H = he.H.eval(pt);
  MatrixXd expect(4, 2);
  expect << -1, 1, -1, 0, 1.25, 0, 0, 0.5;
  EXPECT_LT((H - expect).norm(), 1e-14);
  EXPECT_NEAR(he.eta[0].eval(pt), 1.0, 1e-14);
  EXPECT_NEAR(he.eta[1].eval(pt), 2.0, 1e-14);
  EXPECT_TRUE(he.eta[2].is_zero() && he.eta[3].is_zero());
}

// T H = phi I checked pointwise at random points, independently of the symbolic residual.
TEST(ConvexKkt, StoredMultiplierExpressionIsExact) {
  const CorpusEntry* e = find_instance("ex6.9-lme");
  ASSERT_NE(e, nullptr);
  ConvexGsip c = e->file.convex_problem();
  HEta he = assemble_H_eta(c.base.h_in, c.base.g[0], c.base.n);
  EXPECT_LT(lme_residual(c.T, c.phi, he.H), 1e-12);
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int s = 0; s < 20; ++s) {
    VectorXd pt(4);
    for (int i = 0; i < 4; ++i) pt[i] = U(gen);
    MatrixXd TH = c.T.eval(pt) * he.H.eval(pt);
    EXPECT_LT((TH - c.phi.eval(pt) * MatrixXd::Identity(3, 3)).norm(), 1e-10);
  }
}

TEST(ConvexKkt, GradientMultiplierExpression) {
  // h = (x + u1 - u2, 1 - u1): the gradient block in u is constant and invertible.
  Polynomial x = v(3, 0), u1 = v(3, 1), u2 = v(3, 2);
  PolyVector h = {x + u1 - u2, 1.0 - u1};
  PolyMatrix T;
  Polynomial phi;
  ASSERT_TRUE(lme_from_gradient(h, 1, 2, T, phi));
  HEta he = assemble_H_eta(h, u1, 1);
  EXPECT_LT(lme_residual(T, phi, he.H), 1e-12);
  EXPECT_FALSE(lme_from_gradient({x * u1 - u2, 1.0 - u1}, 1, 2, T, phi));
}

TEST(ConvexKkt, KktPopLayout) {
  ConvexGsip c = interval_problem();
  KktPop k = build_kkt_pop(c);
  EXPECT_EQ(k.pop.nvars, 1 + 1 + 2);
  EXPECT_EQ(k.z_index(0, 0), 1);
  EXPECT_EQ(k.lambda_index(0, 1), 3);
}

TEST(ConvexKkt, IntervalProblemMatchesGrid) {
  ConvexGsip c = interval_problem();
  double oracle = grid_oracle(c);
  EXPECT_NEAR(oracle, -1.0, 1e-3);
  ConvexResult r = solve_convex(c, false);
  ASSERT_EQ(r.status, PopStatus::Optimal);
  EXPECT_NEAR(r.f, oracle, 2e-3);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  ASSERT_EQ(r.z.size(), 1u);
  EXPECT_GE(r.g[0], -1e-6);
}

TEST(ConvexKkt, TezelProblem) {
  const CorpusEntry* e = find_instance("ex6.8");
  ConvexResult r = solve_convex(e->file.convex_problem(), false);
  ASSERT_EQ(r.status, PopStatus::Optimal);
  EXPECT_LE(r.x.lpNorm<Eigen::Infinity>(), 1e-4);
  EXPECT_LE(r.f, 1e-4);
}

TEST(ConvexKkt, ValidateChecksDenominators) {
  ConvexGsip c = interval_problem();
  c.g_den = {Polynomial(2), Polynomial(2)};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace gsip
