#include "gsip/polynomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

namespace gsip {
namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

Polynomial random_poly(std::mt19937& rng, int nvars, int degree, int nterms) {
  std::uniform_int_distribution<int> pick(0, int(basis_size(nvars, degree)) - 1);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto basis = monomial_basis(nvars, degree);
  Polynomial p(nvars);
  for (int t = 0; t < nterms; ++t) p.add_term(basis[pick(rng)], coef(rng));
  return p;
}

Eigen::VectorXd random_point(std::mt19937& rng, int n, double r = 1.5) {
  std::uniform_real_distribution<double> u(-r, r);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

TEST(MonomialBasis, Univariate) {
  auto b = monomial_basis(1, 2);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], Exponent({0}));
  EXPECT_EQ(b[1], Exponent({1}));
  EXPECT_EQ(b[2], Exponent({2}));
}

TEST(MonomialBasis, GradedOrderTwoVars) {
  auto b = monomial_basis(2, 2);
  ASSERT_EQ(b.size(), 6u);
  std::vector<Exponent> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(b, expect);
}

// Brute-force count over the box {0..d}^n.
std::size_t brute_count(int n, int d) {
  std::size_t count = 0;
  std::vector<int> e(n, 0);
  while (true) {
    int s = 0;
    for (int v : e) s += v;
    if (s <= d) ++count;
    int i = 0;
    while (i < n && ++e[i] > d) e[i++] = 0;
    if (i == n) break;
  }
  return count;
}

TEST(MonomialBasis, CountMatchesBruteForce) {
  EXPECT_EQ(monomial_basis(3, 4).size(), 35u);
  EXPECT_EQ(brute_count(3, 4), 35u);
}

TEST(MonomialBasis, StrictlyIncreasingWithBinomialSize) {
  GradedLess less;
  for (int n = 1; n <= 6; ++n) {
    for (int d = 0; d <= 8; ++d) {
      auto b = monomial_basis(n, d);
      ASSERT_EQ(b.size(), brute_count(n, d)) << n << " " << d;
      ASSERT_EQ(b.size(), basis_size(n, d));
      EXPECT_EQ(total_degree(b.front()), 0);
      for (std::size_t i = 1; i < b.size(); ++i) ASSERT_TRUE(less(b[i - 1], b[i]));
    }
  }
}

TEST(Eval, HandArithmetic) {
  Polynomial p = var(2, 0).pow(2) + 2.0 * var(2, 1);
  EXPECT_DOUBLE_EQ(p.eval(Eigen::Vector2d(3, 1)), 11.0);
  EXPECT_DOUBLE_EQ(Polynomial(2).eval(Eigen::Vector2d(0.3, -7)), 0.0);
}

TEST(Eval, DimensionMismatchThrows) {
  Polynomial p = var(2, 0);
  EXPECT_THROW(p.eval(Eigen::Vector3d(1, 2, 3)), std::invalid_argument);
}

TEST(Eval, ExchangeExampleConstraintAtOptimum) {
  // g = u^5 - 3 x2^2 over (x1, x2, u)
  Polynomial g = var(3, 2).pow(5) - 3.0 * var(3, 1).pow(2);
  EXPECT_DOUBLE_EQ(g.eval(Eigen::Vector3d(0.5, 0.0, 0.0)), 0.0);
}

TEST(Eval, MonomialsMatchProducts) {
  std::mt19937 rng(11);
  auto basis = monomial_basis(3, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x = random_point(rng, 3);
    for (const auto& a : basis) {
      double prod = 1.0;
      for (int i = 0; i < 3; ++i) prod *= std::pow(x[i], a[i]);
      ASSERT_TRUE(rel_close(Polynomial::monomial(a).eval(x), prod, 1e-12));
    }
  }
}

TEST(Degree, ZeroPolynomialSentinel) {
  EXPECT_EQ(Polynomial(3).degree(), -1);
  EXPECT_EQ(Polynomial::constant(3, 2.0).degree(), 0);
  Polynomial p = var(2, 0) * var(2, 1).pow(3) + 1.0;
  EXPECT_EQ(p.degree(), 4);
  Polynomial q = p - p;
  EXPECT_TRUE(q.is_zero());
}

TEST(Substitute, IdentityAndConstant) {
  // p(x1, u1) = u1, q = x1 + 1
  Polynomial p = var(2, 1);
  Polynomial q = var(1, 0) + 1.0;
  EXPECT_EQ(substitute(p, 1, {q}), q);
  // p(x1, x2, u) = u^5 - 3 x2^2, q = 0
  Polynomial g = var(3, 2).pow(5) - 3.0 * var(3, 1).pow(2);
  Polynomial r = substitute(g, 2, {Polynomial(2)});
  EXPECT_EQ(r, -3.0 * var(2, 1).pow(2));
}

TEST(Substitute, LengthMismatchThrows) {
  Polynomial p = var(3, 2);
  EXPECT_THROW(substitute(p, 1, {Polynomial(1)}), std::invalid_argument);
}

TEST(Substitute, CommutesWithEvaluation) {
  std::mt19937 rng(7);
  const int nx = 2, nu = 2;
  for (int trial = 0; trial < 100; ++trial) {
    Polynomial p = random_poly(rng, nx + nu, 4, 8);
    PolyVector q = {random_poly(rng, nx, 2, 4), random_poly(rng, nx, 3, 4)};
    Polynomial s = substitute(p, nx, q);
    Eigen::VectorXd x = random_point(rng, nx);
    Eigen::VectorXd xu(nx + nu);
    xu << x, q[0].eval(x), q[1].eval(x);
    ASSERT_TRUE(rel_close(s.eval(x), p.eval(xu), 1e-10)) << trial;
  }
}

TEST(Gradient, UBlock) {
  // variables (x1, u1, u2): u1^2 + x1 u2
  Polynomial p = var(3, 1).pow(2) + var(3, 0) * var(3, 2);
  PolyVector g = gradient(p, Block::U, 1);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], 2.0 * var(3, 1));
  EXPECT_EQ(g[1], var(3, 0));
  PolyVector z = gradient(var(3, 0).pow(3), Block::U, 1);
  for (const auto& gi : z) EXPECT_TRUE(gi.is_zero());
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937 rng(3);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial p = random_poly(rng, 3, 4, 10);
    PolyVector g = gradient(p, Block::X, 3);
    Eigen::VectorXd x = random_point(rng, 3);
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
      double an = g[i].eval(x);
      if (std::abs(an) > 1e-3) EXPECT_TRUE(rel_close(fd, an, 1e-5)) << fd << " vs " << an;
    }
  }
}

TEST(Taylor, KnownExpansions) {
  Polynomial s7 = taylor_poly(TaylorKind::Sin, 7);
  Polynomial u = var(1, 0);
  Polynomial expect = u - u.pow(3) * (1.0 / 6) + u.pow(5) * (1.0 / 120) - u.pow(7) * (1.0 / 5040);
  EXPECT_LT((s7 - expect).max_abs_coeff(), 1e-15);
  EXPECT_EQ(taylor_poly(TaylorKind::Exp, 0), Polynomial::constant(1, 1.0));
  Polynomial c4 = taylor_poly(TaylorKind::Cos, 4);
  Polynomial expect_c = Polynomial::constant(1, 1.0) - u.pow(2) * 0.5 + u.pow(4) * (1.0 / 24);
  EXPECT_LT((c4 - expect_c).max_abs_coeff(), 1e-15);
  EXPECT_EQ(taylor_poly(TaylorKind::Sin, 11).degree(), 11);
}

TEST(RingOps, EvaluationHomomorphism) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Polynomial a = random_poly(rng, 3, 3, 6);
    Polynomial b = random_poly(rng, 3, 3, 6);
    Eigen::VectorXd x = random_point(rng, 3);
    double va = a.eval(x), vb = b.eval(x);
    ASSERT_TRUE(rel_close((a * b).eval(x), va * vb, 1e-11));
    ASSERT_TRUE(rel_close((a + b).eval(x), va + vb, 1e-12));
    ASSERT_TRUE(rel_close((a * 2.5).eval(x), 2.5 * va, 1e-12));
    ASSERT_TRUE(rel_close(a.pow(3).eval(x), va * va * va, 1e-10));
  }
}

TEST(RingOps, ComposeWithAffine) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p = random_poly(rng, 2, 4, 6);
    std::vector<Polynomial> aff = {2.0 * var(2, 0) - var(2, 1) + 0.5, var(2, 1) * 3.0 - 1.0};
    Polynomial c = p.compose(aff);
    Eigen::VectorXd x = random_point(rng, 2);
    Eigen::VectorXd y(2);
    y << aff[0].eval(x), aff[1].eval(x);
    ASSERT_TRUE(rel_close(c.eval(x), p.eval(y), 1e-10));
  }
}

TEST(RingOps, EmbedReindexes) {
  Polynomial p = var(2, 0) * var(2, 1).pow(2);
  Polynomial q = p.embed(4, {3, 1});
  Eigen::Vector4d x(9, 2, 9, 5);
  EXPECT_DOUBLE_EQ(q.eval(x), 5.0 * 4.0);
}

TEST(PolyMatrixOps, ProductEvaluates) {
  PolyMatrix A(2, 2, 1), B(2, 1, 1);
  Polynomial t = var(1, 0);
  A(0, 0) = t;
  A(0, 1) = Polynomial::constant(1, 1);
  A(1, 1) = t * t;
  B(0, 0) = Polynomial::constant(1, 2);
  B(1, 0) = t;
  PolyMatrix C = A * B;
  Eigen::VectorXd x(1);
  x << 3;
  EXPECT_DOUBLE_EQ(C.eval(x)(0, 0), 9.0);
  EXPECT_DOUBLE_EQ(C.eval(x)(1, 0), 27.0);
}

}  // namespace
}  // namespace gsip
