#include "gsip/corpus.hpp"
#include "gsip/gsip_loop.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

#include <random>

namespace gsip {
namespace {

using Eigen::VectorXd;

const GsipProblem& corpus_problem(const std::string& id) {
  const CorpusEntry* e = find_instance(id);
  if (!e) throw std::runtime_error("missing " + id);
  return e->file.problem;
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

// Smallest g_j(x, u) over random points of a ball, an oracle that never touches the SDP.
double sampled_min_over_ball(const GsipProblem& P, const VectorXd& x, const VectorXd& center, double radius,
                             int samples) {
  std::mt19937 gen(3);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U;
  double worst = INFINITY;
  VectorXd xu(P.n + P.p);
  xu.head(P.n) = x;
  for (int s = 0; s < samples; ++s) {
    VectorXd d(P.p);
    for (int i = 0; i < P.p; ++i) d[i] = N(gen);
    // Half the samples on the sphere, where the minimizers of these g usually sit.
    double r = s % 2 ? radius : radius * std::pow(U(gen), 1.0 / P.p);
    xu.tail(P.p) = center + r * d.normalized();
    for (const auto& g : P.g) worst = std::min(worst, g.eval(xu));
  }
  return worst;
}

TEST(GsipLoop, FixXRestrictsToU) {
  // p(x, u) = x1 * u1 + u1^2 at x1 = 3 is 3 u1 + u1^2.
  Polynomial x1 = Polynomial::variable(2, 0), u1 = Polynomial::variable(2, 1);
  Polynomial q = fix_x(x1 * u1 + u1 * u1, 1, 1, vec({3.0}));
  ASSERT_EQ(q.nvars(), 1);
  EXPECT_DOUBLE_EQ(q.coeff({1}), 3.0);
  EXPECT_DOUBLE_EQ(q.coeff({2}), 1.0);
}

// At x = (0, 0) the demo problem needs u^5 >= 1 with u <= 0, so U(x) is empty.
TEST(GsipLoop, EmptyUGivesInfiniteValue) {
  LowerResult r = check_feasibility(vec({0.0, 0.0}), corpus_problem("ex3.1"));
  EXPECT_TRUE(r.u_empty);
  EXPECT_TRUE(std::isinf(r.g_min) && r.g_min > 0);
}

TEST(GsipLoop, LowerProblemAtFeasiblePoint) {
  // At (0.5, 0) U(x) = {0} and g = 0.
  LowerResult r = check_feasibility(vec({0.5, 0.0}), corpus_problem("ex3.1"));
  ASSERT_FALSE(r.u_empty);
  EXPECT_NEAR(r.g_min, 0.0, 1e-5);
  EXPECT_NEAR(r.u_hat[0][0], 0.0, 1e-2);
}

// Constant-u cuts are valid for SIPs but may cut off the GSIP minimizer.
TEST(GsipLoop, ConstantCutExcludesFeasiblePoint) {
  const GsipProblem& P = corpus_problem("ex3.1");
  VectorXd x0 = vec({1.0, 0.4350});
  LowerResult lower = check_feasibility(x0, P);
  ASSERT_FALSE(lower.u_empty);
  // Hand oracle: the minimizer of u^5 over U(x0) sits at u^5 = 1 - 4 x1^2 - x2^2.
  double u5 = 1 - 4 - 0.4350 * 0.4350;
  EXPECT_NEAR(std::pow(lower.u_hat[0][0], 5), u5, 1e-4);
  Pop cut = classical_exchange_step(P, x0, lower.u_hat[0]);
  ASSERT_EQ(cut.ineq.size(), P.c_in.size() + 1);
  VectorXd x_star = vec({0.5, 0.0});
  EXPECT_LT(cut.ineq.back().eval(x_star), -3.0);
  EXPECT_NEAR(cut.ineq.back().eval(x_star), u5, 1e-3);
}

TEST(GsipLoop, SubstitutedDemoConverges) {
  const CorpusEntry* e = find_instance("ex6.3-case1");
  GsipResult r = solve_gsip(e->file.with_case(0));
  ASSERT_EQ(r.status, GsipStatus::Optimal) << r.message;
  EXPECT_LE(r.loops, 4);
  EXPECT_NEAR(r.f, -0.5, 1e-3);
  EXPECT_LT((r.x - vec({0.5, 0.0})).lpNorm<Eigen::Infinity>(), 1e-3);
  // The extension cuts keep every upper bound below f*.
  for (const auto& t : r.trace) EXPECT_LE(t.f_k, r.f + 1e-6);
  EXPECT_TRUE(props::monotone_bounds(r.trace));
}

TEST(GsipLoop, InfeasibleGsipIsCertified) {
  GsipResult r = solve_gsip(corpus_problem("ex6.4"));
  EXPECT_EQ(r.status, GsipStatus::Infeasible);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.loops, 4);
}

TEST(GsipLoop, BallSolutionIsFeasibleBySampling) {
  const GsipProblem& P = corpus_problem("ex6.5");
  GsipResult r = solve_gsip(P);
  ASSERT_EQ(r.status, GsipStatus::Optimal) << r.message;
  VectorXd center = VectorXd::Zero(5);
  center[0] = r.x[0];
  center[1] = r.x[1];
  double radius = std::sqrt(3.0) * r.x[2];
  EXPECT_GE(sampled_min_over_ball(P, r.x, center, radius, 200000), -1e-4);
  for (const auto& c : P.c_in) EXPECT_GE(c.eval(r.x), -1e-6);
  for (const auto& t : r.trace)
    for (const auto& ext : t.extensions)
      if (!std::isnan(ext.validity)) EXPECT_GE(ext.validity, -1e-6);
  EXPECT_TRUE(props::monotone_bounds(r.trace));
}

// For an SIP, the constant extension and the plain exchange cut coincide.
TEST(GsipLoop, ExchangeOnlyMatchesOnSip) {
  const GsipProblem& P = corpus_problem("appA-watson1");
  GsipOptions o;
  GsipResult a = solve_gsip(P, o);
  o.exchange_only = true;
  GsipResult b = solve_gsip(P, o);
  ASSERT_EQ(a.status, GsipStatus::Optimal);
  ASSERT_EQ(b.status, GsipStatus::Optimal);
  EXPECT_NEAR(a.f, b.f, 1e-6);
  EXPECT_EQ(a.loops, b.loops);
}

TEST(GsipLoop, ValidateRejectsBadDimensions) {
  GsipProblem P = corpus_problem("ex3.1");
  P.g.push_back(Polynomial::variable(2, 0));
  EXPECT_THROW(P.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace gsip
