#include "gsip/popsolve.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gsip {
namespace {

using Eigen::VectorXd;

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

TEST(PopVersusGrid, FiveSmallProblems) {
  auto cases = props::grid_cases();
  ASSERT_EQ(cases.size(), 5u);
  for (const auto& c : cases) {
    props::GridOutcome o = props::check_grid_case(c);
    EXPECT_TRUE(o.ok) << c.name << ": " << to_string(o.status) << " value " << o.value << " grid " << o.oracle
                      << " point gap " << o.worst_point_gap
                      << (o.orders_monotone ? "" : ", relaxation values not monotone in the order");
  }
}

// A lower problem from the design loop with an unbounded feasible set: order 1 is unbounded and
// order 2 must still give a valid lower bound (the grid minimum is 0.162335 at (-1.555, -0.362)).
TEST(PopSolve, BoundStaysBelowFeasiblePoint) {
  Pop pop;
  pop.nvars = 2;
  Polynomial v1 = var(2, 0), v2 = var(2, 1);
  pop.objective = 1.6522075879330127 + 1.3044151762221705 * v1 + 0.95662276292116655 * v1 * v2;
  pop.ineq = {0.34779241312293152 - v1 - v2, 0.53124802504762769 - v1 + 0.65220758811108526 * v2,
              0.65220758811108526 + 0.65220758793301281 * v1 - v2, -v1};
  VectorXd feasible(2);
  feasible << -1.555, -0.362;
  ASSERT_TRUE(check_membership(feasible, pop, 0).ok);
  for (int k = 2; k <= 4; ++k) {
    MomentRelaxation rel = build_moment_relaxation(pop, k);
    SdpSolution s = solve_sdp(rel.sdp);
    ASSERT_EQ(s.status, SdpStatus::Optimal) << "order " << k;
    EXPECT_LE(rel.value(s), pop.objective.eval(feasible) + 1e-6) << "order " << k;
    for (std::size_t b = 0; b < s.X.size(); ++b) {
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.X[b]).eigenvalues().minCoeff(), -1e-9);
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.S[b]).eigenvalues().minCoeff(), -1e-9);
    }
  }
  PopResult r = minimize(pop);
  ASSERT_EQ(r.status, PopStatus::Optimal);
  EXPECT_NEAR(r.value, 0.16224, 1e-4);
}

TEST(PopSolve, UnboundedObjectiveIsFlagged) {
  Pop pop;
  pop.nvars = 1;
  pop.objective = var(1, 0);
  PopResult r = minimize(pop);
  EXPECT_NE(r.status, PopStatus::Optimal);
}

TEST(PopSolve, MembershipScalesByCoefficients) {
  Pop pop;
  pop.nvars = 1;
  pop.ineq = {1000.0 * var(1, 0) - 1000.0};
  VectorXd x(1);
  x << 1.0 - 1e-9;
  EXPECT_TRUE(check_membership(x, pop, 1e-8).ok);
  x << 0.99;
  EXPECT_FALSE(check_membership(x, pop, 1e-8).ok);
}

}  // namespace
}  // namespace gsip
