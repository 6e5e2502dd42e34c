#include "properties.hpp"

#include "gsip/extensions.hpp"
#include "gsip/moment.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace gsip::props {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kBox = 2.0;

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

  Polynomial poly(int nx, int deg) {
    Polynomial p(nx);
    for (const auto& e : monomial_basis(nx, deg)) p.add_term(e, uniform(-1, 1));
    return p;
  }
  // 1 + s(x)^2 > 0 everywhere.
  Polynomial positive(int nx) {
    Polynomial s = poly(nx, 1);
    return s * s + 1.0;
  }
  VectorXd point(int n, double r) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(-r, r);
    return v;
  }
};

double box_violation(const PolyVector& l, const PolyVector& w, const VectorXd& x, const VectorXd& u) {
  double v = 0;
  for (Eigen::Index j = 0; j < u.size(); ++j) v = std::max({v, l[j].eval(x) - u[j], u[j] - w[j].eval(x)});
  return v;
}

double simplex_violation(const PolyVector& l, const Polynomial& w, const VectorXd& x, const VectorXd& u) {
  double v = u.sum() - w.eval(x);
  for (Eigen::Index j = 0; j < u.size(); ++j) v = std::max(v, l[j].eval(x) - u[j]);
  return std::max(v, 0.0);
}

double ball_violation(const PolyVector& a, const Polynomial& lo, const Polynomial& hi, const VectorXd& x,
                      const VectorXd& u) {
  double r = (u - eval(a, x)).norm();
  return std::max({0.0, lo.eval(x) - r, r - hi.eval(x)});
}

// u - a = D'c with |c| <= 1  <=>  (u - a)' (D'D)^{-1} (u - a) <= 1.
double ellipsoid_violation(const PolyVector& a, const PolyMatrix& D, const VectorXd& x, const VectorXd& u) {
  MatrixXd Dx = D.eval(x);
  MatrixXd P = Dx.transpose() * Dx;
  VectorXd d = u - eval(a, x);
  return std::max(0.0, d.dot(P.ldlt().solve(d)) - 1.0);
}

void record(ExtensionTally& t, const Extension& e, const VectorXd& x_hat, const VectorXd& u_hat, Rng& rng, int nx,
            int samples, const std::function<double(const VectorXd&, const VectorXd&)>& violation) {
  ++t.instances;
  double anchor = (eval(e.q, x_hat) - u_hat).lpNorm<Eigen::Infinity>();
  t.worst_anchor = std::max(t.worst_anchor, anchor);
  if (anchor > 1e-9) ++t.violations;
  for (int s = 0; s < samples; ++s) {
    VectorXd x = rng.point(nx, kBox);
    double v = violation(x, eval(e.q, x));
    t.worst_violation = std::max(t.worst_violation, v);
    if (v > 1e-6) ++t.violations;
  }
}

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

double box_grid_min(const Pop& pop, const VectorXd& lo, const VectorXd& hi, int per_axis) {
  const int n = pop.nvars;
  double best = INFINITY;
  std::vector<int> idx(n, 0);
  VectorXd x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
    bool ok = true;
    for (const auto& g : pop.ineq) ok = ok && g.eval(x) >= 0;
    if (ok) best = std::min(best, pop.objective.eval(x));
    int i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) break;
  }
  return best;
}

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

}  // namespace

ExtensionTally extension_property(int instances, unsigned seed, int samples) {
  Rng rng(seed);
  ExtensionTally t;
  for (int inst = 0; inst < instances; ++inst) {
    const int nx = rng.integer(1, 3), p = rng.integer(1, 3), deg = rng.integer(1, 2);
    VectorXd x_hat = rng.point(nx, kBox);
    switch (inst % 4) {
      case 0: {
        PolyVector l, w;
        for (int j = 0; j < p; ++j) {
          l.push_back(rng.poly(nx, deg));
          w.push_back(l.back() + rng.positive(nx));
        }
        VectorXd u(p);
        for (int j = 0; j < p; ++j) {
          double lo = l[j].eval(x_hat), hi = w[j].eval(x_hat);
          // Every fifth anchor on a face.
          u[j] = inst % 5 == 0 ? hi : rng.uniform(lo, hi);
        }
        Extension e = box_extension(l, w, x_hat, u);
        record(t, e, x_hat, u, rng, nx, samples,
               [&](const VectorXd& x, const VectorXd& q) { return box_violation(l, w, x, q); });
        break;
      }
      case 1: {
        PolyVector l;
        Polynomial w = rng.positive(nx);
        for (int j = 0; j < p; ++j) {
          l.push_back(rng.poly(nx, deg));
          w += l.back();
        }
        VectorXd lo(p);
        for (int j = 0; j < p; ++j) lo[j] = l[j].eval(x_hat);
        double room = w.eval(x_hat) - lo.sum();
        VectorXd wts(p);
        for (int j = 0; j < p; ++j) wts[j] = rng.uniform(0, 1);
        double fill = inst % 5 == 1 ? 1.0 : rng.uniform(0, 1);
        VectorXd u = lo + room * fill * wts / wts.sum();
        Extension e = simplex_extension(l, w, x_hat, u);
        record(t, e, x_hat, u, rng, nx, samples,
               [&](const VectorXd& x, const VectorXd& q) { return simplex_violation(l, w, x, q); });
        break;
      }
      case 2: {
        PolyVector a;
        for (int j = 0; j < p; ++j) a.push_back(rng.poly(nx, deg));
        Polynomial s = rng.poly(nx, 1);
        Polynomial lo = inst % 3 == 0 ? Polynomial(nx) : s * s;
        Polynomial hi = lo + rng.positive(nx);
        VectorXd dir = rng.point(p, 1.0).normalized();
        double rl = lo.is_zero() ? 0.0 : lo.eval(x_hat), rh = hi.eval(x_hat);
        VectorXd u = eval(a, x_hat) + rng.uniform(rl, rh) * dir;
        Extension e = ball_extension(a, lo, hi, x_hat, u);
        record(t, e, x_hat, u, rng, nx, samples,
               [&](const VectorXd& x, const VectorXd& q) { return ball_violation(a, lo, hi, x, q); });
        break;
      }
      default: {
        PolyVector a;
        for (int j = 0; j < p; ++j) a.push_back(rng.poly(nx, deg));
        // Triangular D with positive diagonal stays invertible on X.
        PolyMatrix D(p, p, nx);
        for (int i = 0; i < p; ++i) {
          D(i, i) = rng.positive(nx);
          for (int k = 0; k < i; ++k) D(i, k) = rng.poly(nx, 1) * 0.5;
        }
        VectorXd c = rng.point(p, 1.0);
        if (c.norm() > 1) c /= c.norm();
        if (inst % 5 == 3) c.normalize();
        VectorXd u = eval(a, x_hat) + D.eval(x_hat).transpose() * c;
        Extension e = ellipsoid_extension(a, D, x_hat, u);
        record(t, e, x_hat, u, rng, nx, samples,
               [&](const VectorXd& x, const VectorXd& q) { return ellipsoid_violation(a, D, x, q); });
        break;
      }
    }
  }
  return t;
}

std::vector<GridCase> grid_cases() {
  std::vector<GridCase> out;
  {
    GridCase c{"quartic on [-2, 2]", {}, 0};
    c.pop.nvars = 1;
    Polynomial x = var(1, 0);
    c.pop.objective = x.pow(4) - 3.0 * x * x + x;
    c.pop.ineq = {2.0 - x, x + 2.0};
    c.oracle = box_grid_min(c.pop, VectorXd::Constant(1, -2), VectorXd::Constant(1, 2), 400001);
    out.push_back(std::move(c));
  }
  {
    GridCase c{"six-hump camel", {}, 0};
    c.pop.nvars = 2;
    Polynomial x = var(2, 0), y = var(2, 1);
    c.pop.objective = 4.0 * x * x - 2.1 * x.pow(4) + (1.0 / 3.0) * x.pow(6) + x * y - 4.0 * y * y + 4.0 * y.pow(4);
    c.pop.ineq = {4.0 - x * x, 1.0 - y * y};
    VectorXd lo(2), hi(2);
    lo << -2, -1;
    hi << 2, 1;
    c.oracle = box_grid_min(c.pop, lo, hi, 2001);
    out.push_back(std::move(c));
  }
  {
    GridCase c{"indefinite quadratic on the disk", {}, 0};
    c.pop.nvars = 2;
    Polynomial x = var(2, 0), y = var(2, 1);
    c.pop.objective = x * x - y * y + x * y + 0.3 * x;
    c.pop.ineq = {1.0 - x * x - y * y};
    c.oracle = box_grid_min(c.pop, VectorXd::Constant(2, -1), VectorXd::Constant(2, 1), 2001);
    out.push_back(std::move(c));
  }
  {
    // Two quartic walls; the minimizer sits on their intersection.
    GridCase c{"quartic walls", {}, 0};
    c.pop.nvars = 2;
    Polynomial x = var(2, 0), y = var(2, 1);
    c.pop.objective = -x - y;
    c.pop.ineq = {2.0 * x.pow(4) - 8.0 * x.pow(3) + 8.0 * x * x + 2.0 - y,
                  4.0 * x.pow(4) - 32.0 * x.pow(3) + 88.0 * x * x - 96.0 * x + 36.0 - y,
                  x, 3.0 - x, y, 4.0 - y};
    VectorXd lo(2), hi(2);
    lo << 0, 0;
    hi << 3, 4;
    c.oracle = box_grid_min(c.pop, lo, hi, 3001);
    out.push_back(std::move(c));
  }
  {
    // The grid runs over spherical angles.
    GridCase c{"cubic on the sphere", {}, 0};
    c.pop.nvars = 3;
    Polynomial x = var(3, 0), y = var(3, 1), z = var(3, 2);
    c.pop.objective = x.pow(3) + y.pow(3) + z.pow(3) + x * y;
    c.pop.eq = {x * x + y * y + z * z - 1.0};
    double best = INFINITY;
    const int N = 1500;
    VectorXd p(3);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j < 2 * N; ++j) {
        double th = M_PI * i / N, ph = M_PI * j / N;
        p << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        best = std::min(best, c.pop.objective.eval(p));
      }
    c.oracle = best;
    out.push_back(std::move(c));
  }
  return out;
}

GridOutcome check_grid_case(const GridCase& c, double tol) {
  GridOutcome o;
  o.name = c.name;
  o.oracle = c.oracle;
  PopResult r = minimize(c.pop);
  o.status = r.status;
  o.value = r.value;
  o.ok = r.status == PopStatus::Optimal && std::abs(r.value - c.oracle) <= tol && !r.minimizers.empty();
  for (const auto& x : r.minimizers) {
    o.worst_point_gap = std::max(o.worst_point_gap, std::abs(c.pop.objective.eval(x) - c.oracle));
    o.ok = o.ok && check_membership(x, c.pop, 1e-5).ok;
  }
  o.ok = o.ok && o.worst_point_gap <= tol;

  const double slack = 1e-7 * std::max(1.0, std::abs(c.oracle));
  o.orders_monotone = true;
  for (int k = c.pop.d0(); k <= c.pop.d0() + 2; ++k) {
    MomentRelaxation rel = build_moment_relaxation(c.pop, k);
    SdpSolution s = solve_sdp(rel.sdp);
    if (s.status != SdpStatus::Optimal) {
      o.orders_monotone = false;
      break;
    }
    double v = rel.value(s);
    if (v > c.oracle + slack || (!o.order_values.empty() && v < o.order_values.back() - slack))
      o.orders_monotone = false;
    o.order_values.push_back(v);
  }
  o.ok = o.ok && o.orders_monotone;
  return o;
}

double moment_identity_error(unsigned seed) {
  std::mt19937 gen(seed);
  double err = 0;
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
      err = std::max(err, (moment_matrix(y, d) - ref).cwiseAbs().maxCoeff());
    }
    int t = localizing_order(p, k);
    MatrixXd ref = MatrixXd::Zero(basis_size(n, t), basis_size(n, t));
    for (std::size_t j = 0; j < m.pts.size(); ++j) {
      VectorXd v = monomials_at(m.pts[j], t);
      ref += m.w[j] * p.eval(m.pts[j]) * v * v.transpose();
    }
    err = std::max(err, (localizing_matrix(p, y, k) - ref).cwiseAbs().maxCoeff());
  }
  return err;
}

double extraction_error(unsigned seed) {
  std::mt19937 gen(seed);
  double err = 0;
  for (int n = 1; n <= 3; ++n)
    for (int r = 1; r <= 3; ++r) {
      if (n == 1 && r == 3) continue;  // needs a higher order than used here
      Measure m = random_measure(gen, n, r);
      const int k = 4;
      Tms y = Tms::from_atoms(m.pts, m.w, k);
      FlatResult flat = check_flat_truncation(y, 1, k, 1e-8);
      if (!flat.flat || flat.rank != r) return INFINITY;
      auto got = extract_minimizers(y, flat.t, flat.rank);
      if (int(got.size()) != r) return INFINITY;
      for (const auto& p : m.pts) {
        double best = INFINITY;
        for (const auto& g : got) best = std::min(best, (g - p).lpNorm<Eigen::Infinity>());
        err = std::max(err, best);
      }
    }
  return err;
}

bool monotone_bounds(const std::vector<IterationRecord>& trace, double tol) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    double prev = trace[i - 1].bound, cur = trace[i].bound;
    if (cur < prev - tol * std::max(1.0, std::abs(prev))) return false;
  }
  return true;
}

}  // namespace gsip::props
