#include "gsip/moment.hpp"
#include "gsip/popsolve.hpp"

#include <gtest/gtest.h>

#include <random>

namespace gsip {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd monomials_at(const VectorXd& x, int d) {
  auto basis = monomial_basis(int(x.size()), d);
  VectorXd v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v[i] = Polynomial::monomial(basis[i]).eval(x);
  return v;
}

struct Measure {
  std::vector<VectorXd> pts;
  std::vector<double> w;
};

Measure random_measure(std::mt19937& gen, int n, int atoms) {
  std::uniform_real_distribution<double> U(-1, 1), W(0.2, 1);
  Measure m;
  for (int a = 0; a < atoms; ++a) {
    VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = U(gen);
    m.pts.push_back(p);
    m.w.push_back(W(gen));
  }
  return m;
}

TEST(Moment, BasisOrderIsGraded) {
  auto b = monomial_basis(2, 2);
  std::vector<Exponent> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(b, expect);
  EXPECT_EQ(basis_size(3, 4), 35u);
}

// M_d[y] = sum_j w_j v(x_j) v(x_j)' and L_p[y] = sum_j w_j p(x_j) v v' for atomic y.
TEST(Moment, MomentAndLocalizingIdentities) {
  std::mt19937 gen(11);
  for (int n = 1; n <= 3; ++n) {
    Measure m = random_measure(gen, n, 3);
    const int k = 3;
    Tms y = Tms::from_atoms(m.pts, m.w, k);
    Polynomial p(n);
    p.add_term(Exponent(n, 0), 0.7);
    Exponent e(n, 0);
    e[0] = 2;
    p.add_term(e, -1.3);
    e.assign(n, 0);
    e[n - 1] = 1;
    p.add_term(e, 0.4);

    for (int d = 0; d <= k; ++d) {
      MatrixXd ref = MatrixXd::Zero(basis_size(n, d), basis_size(n, d));
      for (std::size_t j = 0; j < m.pts.size(); ++j) {
        VectorXd v = monomials_at(m.pts[j], d);
        ref += m.w[j] * v * v.transpose();
      }
      EXPECT_LT((moment_matrix(y, d) - ref).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n << " d=" << d;
    }
    int t = localizing_order(p, k);
    EXPECT_EQ(t, k - 1);
    MatrixXd ref = MatrixXd::Zero(basis_size(n, t), basis_size(n, t));
    double pint = 0;
    for (std::size_t j = 0; j < m.pts.size(); ++j) {
      VectorXd v = monomials_at(m.pts[j], t);
      ref += m.w[j] * p.eval(m.pts[j]) * v * v.transpose();
      pint += m.w[j] * p.eval(m.pts[j]);
    }
    EXPECT_LT((localizing_matrix(p, y, k) - ref).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(y.apply(p), pint, 1e-12);
  }
}

TEST(Moment, LocalizingOrderUsesCeilingOfHalfDegree) {
  Polynomial cubic = Polynomial::monomial({3});
  EXPECT_EQ(localizing_order(cubic, 3), 1);
  EXPECT_EQ(localizing_order(Polynomial::monomial({2}), 3), 2);
  EXPECT_EQ(localizing_order(Polynomial::constant(1, 2.0), 3), 3);
}

// Flat truncation of a synthetic r-atomic measure and recovery of its atoms.
TEST(Moment, ExtractionRecoversAtoms) {
  std::mt19937 gen(5);
  int trials = 0;
  for (int n = 1; n <= 3; ++n)
    for (int r = 1; r <= 3; ++r) {
      if (n == 1 && r == 3) continue;
      Measure m = random_measure(gen, n, r);
      const int k = 4;
      Tms y = Tms::from_atoms(m.pts, m.w, k);
      FlatResult flat = check_flat_truncation(y, 1, k, 1e-8);
      ASSERT_TRUE(flat.flat) << "n=" << n << " r=" << r;
      EXPECT_EQ(flat.rank, r);
      auto got = extract_minimizers(y, flat.t, flat.rank);
      ASSERT_EQ(int(got.size()), r);
      for (const auto& p : m.pts) {
        double best = 1e9;
        for (const auto& g : got) best = std::min(best, (g - p).lpNorm<Eigen::Infinity>());
        EXPECT_LT(best, 1e-5) << "n=" << n << " r=" << r;
      }
      ++trials;
    }
  EXPECT_EQ(trials, 8);
}

TEST(Moment, RankDetectsDiffuseMeasure) {
  // Uniform moments on [0, 1] are never flat.
  Tms y;
  y.nvars = 1;
  y.order = 3;
  y.values.resize(7);
  for (int i = 0; i <= 6; ++i) y.values[i] = 1.0 / (i + 1);
  EXPECT_FALSE(check_flat_truncation(y, 1, 3, 1e-6).flat);
}

// x >= 1 and x <= 0: the relaxation itself is infeasible with a checked ray.
TEST(Moment, InfeasibleIntervalIsCertified) {
  Pop pop;
  pop.nvars = 1;
  Polynomial x = Polynomial::variable(1, 0);
  pop.objective = x;
  pop.ineq = {x - 1.0, -x};
  PopResult r = minimize(pop);
  EXPECT_EQ(r.status, PopStatus::Infeasible);
  EXPECT_TRUE(r.certified);
}

// min x1 + x2 over the unit disk: the order-1 relaxation is exact.
TEST(Moment, RelaxationValueOnDisk) {
  Pop pop;
  pop.nvars = 2;
  Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  pop.objective = x1 + x2;
  pop.ineq = {1.0 - x1 * x1 - x2 * x2};
  MomentRelaxation rel = build_moment_relaxation(pop, 1);
  SdpSolution s = solve_sdp(rel.sdp);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(rel.value(s), -std::sqrt(2.0), 1e-6);
  Tms y = rel.tms(s);
  EXPECT_NEAR(y.first_moments()[0], -std::sqrt(0.5), 1e-5);
}

}  // namespace
}  // namespace gsip
