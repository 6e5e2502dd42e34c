#include "gsip/convex_kkt.hpp"

#include <cmath>
#include <stdexcept>

namespace gsip {

std::string to_string(ConvexGsip::Sign s) {
  switch (s) {
    case ConvexGsip::Sign::Positive: return "positive";
    case ConvexGsip::Sign::Negative: return "negative";
    case ConvexGsip::Sign::Unknown: return "unknown";
  }
  return "unknown";
}

Polynomial ConvexGsip::denominator(int j) const {
  const int nv = base.n + base.p;
  if (g_den.empty() || g_den[j].is_zero()) return Polynomial::constant(nv, 1.0);
  return g_den[j];
}

void ConvexGsip::validate() const {
  base.validate();
  if (!base.h_eq.empty()) throw std::invalid_argument("convex gsip: U(x) must be given by inequalities only");
  if (!g_den.empty() && int(g_den.size()) != base.s())
    throw std::invalid_argument("convex gsip: one denominator per g_j");
  for (const auto& d : g_den)
    if (!d.is_zero() && d.nvars() != base.n + base.p)
      throw std::invalid_argument("convex gsip: denominators must be over (x, u)");
  if (has_lme) {
    if (T.rows != m() || T.cols != base.p + m()) throw std::invalid_argument("convex gsip: T must be m x (p + m)");
    if (phi.is_zero()) throw std::invalid_argument("convex gsip: phi is identically zero");
  }
}

HEta assemble_H_eta(const PolyVector& h, const Polynomial& g, int n) {
  const int nv = g.nvars();
  const int p = nv - n;
  const int m = int(h.size());
  HEta out;
  out.H = PolyMatrix(p + m, m, nv);
  for (int i = 0; i < m; ++i) {
    PolyVector gh = gradient(h[i], Block::U, n);
    for (int k = 0; k < p; ++k) out.H(k, i) = gh[k];
    out.H(p + i, i) = h[i];
  }
  out.eta = gradient(g, Block::U, n);
  for (int i = 0; i < m; ++i) out.eta.push_back(Polynomial(nv));
  return out;
}

double lme_residual(const PolyMatrix& T, const Polynomial& phi, const PolyMatrix& H) {
  PolyMatrix R = T * H;
  double worst = 0.0;
  for (int i = 0; i < R.rows; ++i)
    for (int j = 0; j < R.cols; ++j) {
      Polynomial e = R(i, j);
      if (i == j) e -= phi;
      worst = std::max(worst, e.max_abs_coeff());
    }
  return worst;
}

bool lme_from_gradient(const PolyVector& h, int n, int p, PolyMatrix& T, Polynomial& phi) {
  const int m = int(h.size());
  if (m != p || m == 0) return false;
  const int nv = n + p;
  Eigen::MatrixXd G(p, m);
  for (int i = 0; i < m; ++i) {
    PolyVector gh = gradient(h[i], Block::U, n);
    for (int k = 0; k < p; ++k) {
      if (gh[k].degree() > 0) return false;
      G(k, i) = gh[k].is_zero() ? 0.0 : gh[k].coeff(Exponent(nv, 0));
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) return false;
  Eigen::MatrixXd Gi = lu.inverse();
  T = PolyMatrix(m, p + m, nv);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < p; ++k) T(i, k) = Polynomial::constant(nv, Gi(i, k));
  phi = Polynomial::constant(nv, 1.0);
  return true;
}

Eigen::VectorXd KktPop::lambda_of(const Eigen::VectorXd& v, int j) const {
  if (explicit_multipliers) return v.segment(n + s * p + j * m, m);
  return Eigen::VectorXd();
}

namespace {

struct Pieces {
  // Cleared gradient of g_j: D^2 grad g = D grad N - N grad D, a polynomial.
  PolyVector grad;
  Polynomial num, den;
};

Pieces cleared_gradient(const ConvexGsip& prob, int j) {
  Pieces pc;
  pc.num = prob.base.g[j];
  pc.den = prob.denominator(j);
  PolyVector gn = gradient(pc.num, Block::U, prob.base.n);
  if (pc.den.degree() <= 0) {
    double d = pc.den.coeff(Exponent(prob.base.n + prob.base.p, 0));
    for (auto& q : gn) q = q * (1.0 / d);
    pc.grad = gn;
    pc.num = pc.num * (1.0 / d);
    pc.den = Polynomial::constant(pc.num.nvars(), 1.0);
    return pc;
  }
  PolyVector gd = gradient(pc.den, Block::U, prob.base.n);
  for (int k = 0; k < prob.base.p; ++k) pc.grad.push_back(pc.den * gn[k] - pc.num * gd[k]);
  return pc;
}

KktPop frame(const ConvexGsip& prob, bool explicit_multipliers) {
  prob.validate();
  KktPop kp;
  kp.n = prob.base.n;
  kp.s = prob.base.s();
  kp.p = prob.base.p;
  kp.m = prob.m();
  kp.explicit_multipliers = explicit_multipliers;
  const int total = kp.n + kp.s * kp.p + (explicit_multipliers ? kp.s * kp.m : 0);
  kp.pop.nvars = total;
  for (int i = 0; i < kp.n; ++i) kp.names.push_back("x" + std::to_string(i + 1));
  for (int j = 0; j < kp.s; ++j)
    for (int k = 0; k < kp.p; ++k) kp.names.push_back("z" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
  if (explicit_multipliers)
    for (int j = 0; j < kp.s; ++j)
      for (int i = 0; i < kp.m; ++i)
        kp.names.push_back("l" + std::to_string(j + 1) + "_" + std::to_string(i + 1));
  std::vector<int> xmap(kp.n);
  for (int i = 0; i < kp.n; ++i) xmap[i] = i;
  kp.pop.objective = prob.base.f.embed(total, xmap);
  for (const auto& c : prob.base.c_eq) kp.pop.eq.push_back(c.embed(total, xmap));
  for (const auto& c : prob.base.c_in) kp.pop.ineq.push_back(c.embed(total, xmap));
  return kp;
}

// Rows that cancel identically carry no information and only enlarge the SDP.
void push_nonzero(PolyVector& rows, const Polynomial& r) {
  if (!r.is_zero()) rows.push_back(r);
}

std::vector<int> xz_map(const KktPop& kp, int j) {
  std::vector<int> map(kp.n + kp.p);
  for (int i = 0; i < kp.n; ++i) map[i] = i;
  for (int k = 0; k < kp.p; ++k) map[kp.n + k] = kp.z_index(j, k);
  return map;
}

// g_j(x, z_j) >= 0 as N >= 0 (D > 0 is attested), and h(x, z_j) >= 0.
void add_membership(const ConvexGsip& prob, KktPop& kp, int j, const Pieces& pc) {
  auto map = xz_map(kp, j);
  const int total = kp.pop.nvars;
  kp.pop.ineq.push_back(pc.num.embed(total, map));
  for (const auto& h : prob.base.h_in) kp.pop.ineq.push_back(h.embed(total, map));
}

}  // namespace

KktPop build_kkt_pop(const ConvexGsip& prob) {
  KktPop kp = frame(prob, true);
  const int total = kp.pop.nvars;
  for (int j = 0; j < kp.s; ++j) {
    auto map = xz_map(kp, j);
    Pieces pc = cleared_gradient(prob, j);
    HEta he = assemble_H_eta(prob.base.h_in, prob.base.g[j], kp.n);
    // Stationarity: grad g - sum_i lambda_i grad h_i = 0.
    for (int k = 0; k < kp.p; ++k) {
      Polynomial row = pc.grad[k].embed(total, map);
      for (int i = 0; i < kp.m; ++i)
        row -= Polynomial::variable(total, kp.lambda_index(j, i)) * he.H(k, i).embed(total, map);
      push_nonzero(kp.pop.eq, row);
    }
    // Complementarity and sign.
    for (int i = 0; i < kp.m; ++i) {
      Polynomial lam = Polynomial::variable(total, kp.lambda_index(j, i));
      push_nonzero(kp.pop.eq, lam * prob.base.h_in[i].embed(total, map));
      kp.pop.ineq.push_back(lam);
    }
    add_membership(prob, kp, j, pc);
  }
  return kp;
}

KktPop build_lme_pop(const ConvexGsip& prob) {
  if (!prob.has_lme) throw std::invalid_argument("lme: no (T, phi) supplied");
  prob.validate();
  HEta he0 = assemble_H_eta(prob.base.h_in, prob.base.g[0], prob.base.n);
  double res = lme_residual(prob.T, prob.phi, he0.H);
  if (res > 1e-10) throw std::invalid_argument("lme: T H - phi I has residual " + std::to_string(res));
  KktPop kp = frame(prob, false);
  const int total = kp.pop.nvars;
  for (int j = 0; j < kp.s; ++j) {
    auto map = xz_map(kp, j);
    Pieces pc = cleared_gradient(prob, j);
    // P = T (grad; 0) so that the multiplier is P / (phi D^2).
    PolyVector P(kp.m, Polynomial(kp.n + kp.p));
    for (int i = 0; i < kp.m; ++i)
      for (int k = 0; k < kp.p; ++k) P[i] += prob.T(i, k) * pc.grad[k];
    for (int k = 0; k < kp.p; ++k) {
      Polynomial row = prob.phi * pc.grad[k];
      for (int i = 0; i < kp.m; ++i) row -= P[i] * he0.H(k, i);
      push_nonzero(kp.pop.eq, row.pruned(1e-13).embed(total, map));
    }
    for (int i = 0; i < kp.m; ++i) {
      push_nonzero(kp.pop.eq, (P[i] * prob.base.h_in[i]).pruned(1e-13).embed(total, map));
      Polynomial sign;
      switch (prob.phi_sign) {
        case ConvexGsip::Sign::Positive: sign = P[i]; break;
        case ConvexGsip::Sign::Negative: sign = -P[i]; break;
        case ConvexGsip::Sign::Unknown: sign = P[i] * prob.phi; break;
      }
      push_nonzero(kp.pop.ineq, sign.pruned(1e-13).embed(total, map));
    }
    add_membership(prob, kp, j, pc);
  }
  return kp;
}

ConvexResult solve_convex(const ConvexGsip& prob, bool use_lme, const PopOptions& opts) {
  ConvexResult out;
  out.kkt = use_lme ? build_lme_pop(prob) : build_kkt_pop(prob);
  PopResult r = minimize(out.kkt.pop, opts);
  out.status = r.status;
  out.order = r.order_used;
  out.bound = r.value;
  if (r.status != PopStatus::Optimal) return out;
  const Eigen::VectorXd& v = r.minimizers[0];
  const auto& kp = out.kkt;
  out.x = kp.x_of(v);
  out.f = prob.base.f.eval(out.x);
  for (int j = 0; j < kp.s; ++j) {
    out.z.push_back(kp.z_of(v, j));
    Eigen::VectorXd xz(kp.n + kp.p);
    xz << out.x, out.z.back();
    out.g.push_back(prob.base.g[j].eval(xz) / prob.denominator(j).eval(xz));
    if (kp.explicit_multipliers) {
      out.lambda.push_back(kp.lambda_of(v, j));
    } else {
      Pieces pc = cleared_gradient(prob, j);
      Eigen::VectorXd lam(kp.m);
      double scale = prob.phi.eval(xz) * std::pow(pc.den.eval(xz), 2);
      for (int i = 0; i < kp.m; ++i) {
        double Pi = 0.0;
        for (int k = 0; k < kp.p; ++k) Pi += prob.T(i, k).eval(xz) * pc.grad[k].eval(xz);
        lam[i] = Pi / scale;
      }
      out.lambda.push_back(lam);
    }
  }
  return out;
}

}  // namespace gsip
