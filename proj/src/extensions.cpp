#include "gsip/extensions.hpp"

#include "gsip/moment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gsip {

namespace {

constexpr double kAnchorTol = 1e-6;

Exponent add(const Exponent& a, const Exponent& b) {
  Exponent c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

int ceil_half(int d) { return d <= 0 ? 0 : (d + 1) / 2; }

int nx_of(const PolyVector& v) { return v.empty() ? 0 : v[0].nvars(); }

}  // namespace

std::string to_string(ExtensionRule::Kind k) {
  switch (k) {
    case ExtensionRule::Kind::Auto: return "auto";
    case ExtensionRule::Kind::Constant: return "constant";
    case ExtensionRule::Kind::Box: return "box";
    case ExtensionRule::Kind::Simplex: return "simplex";
    case ExtensionRule::Kind::Ball: return "ball";
    case ExtensionRule::Kind::Ellipsoid: return "ellipsoid";
    case ExtensionRule::Kind::Numeric: return "numeric";
  }
  return "unknown";
}

Extension constant_extension(int nx, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat) {
  Extension e;
  e.rule = "constant";
  e.x_hat = x_hat;
  e.u_hat = u_hat;
  for (Eigen::Index j = 0; j < u_hat.size(); ++j) e.q.push_back(Polynomial::constant(nx, u_hat[j]));
  return e;
}

Extension box_extension(const PolyVector& l, const PolyVector& w, const Eigen::VectorXd& x_hat,
                        const Eigen::VectorXd& u_hat) {
  const int p = int(u_hat.size());
  if (int(l.size()) != p || int(w.size()) != p) throw ExtensionError("box extension: dimension mismatch");
  const int nx = nx_of(l);
  Extension e;
  e.rule = "box";
  e.x_hat = x_hat;
  e.u_hat = u_hat;
  for (int j = 0; j < p; ++j) {
    double lo = l[j].eval(x_hat), hi = w[j].eval(x_hat);
    double u = u_hat[j];
    if (u < lo - kAnchorTol || u > hi + kAnchorTol || lo > hi + kAnchorTol)
      throw ExtensionError("box extension: anchor outside box");
    u = std::clamp(u, std::min(lo, hi), std::max(lo, hi));
    e.u_hat[j] = u;
    double sigma = (hi - lo > 1e-12) ? (hi - u) / (hi - lo) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    Polynomial q = l[j] * sigma + w[j] * (1.0 - sigma);
    if (q.nvars() != nx) throw ExtensionError("box extension: bounds differ in nvars");
    e.q.push_back(q.pruned(1e-15));
    e.degree = std::max(e.degree, e.q.back().degree());
  }
  return e;
}

Extension simplex_extension(const PolyVector& l, const Polynomial& w, const Eigen::VectorXd& x_hat,
                            const Eigen::VectorXd& u_hat) {
  const int p = int(u_hat.size());
  if (int(l.size()) != p) throw ExtensionError("simplex extension: dimension mismatch");
  Extension e;
  e.rule = "simplex";
  e.x_hat = x_hat;
  Eigen::VectorXd lo(p);
  for (int j = 0; j < p; ++j) lo[j] = l[j].eval(x_hat);
  double budget = w.eval(x_hat);
  Eigen::VectorXd u = u_hat;
  for (int j = 0; j < p; ++j) {
    if (u[j] < lo[j] - kAnchorTol) throw ExtensionError("simplex extension: anchor below lower bound");
    u[j] = std::max(u[j], lo[j]);
  }
  double room = budget - lo.sum();
  if (u.sum() > budget + kAnchorTol || room < -kAnchorTol) throw ExtensionError("simplex extension: anchor outside simplex");
  if (u.sum() > budget && u.sum() - lo.sum() > 0) {
    // Pull the excess back proportionally so the anchor sits on the face.
    double scale = std::max(room, 0.0) / (u.sum() - lo.sum());
    u = lo + scale * (u - lo);
  }
  e.u_hat = u;
  Polynomial slack = w;
  for (const auto& lj : l) slack -= lj;
  for (int j = 0; j < p; ++j) {
    double mu = room > 1e-12 ? (u[j] - lo[j]) / room : 0.0;
    e.q.push_back((slack * mu + l[j]).pruned(1e-15));
    e.degree = std::max(e.degree, e.q.back().degree());
  }
  return e;
}

Extension ball_extension(const PolyVector& a, const Polynomial& l, const Polynomial& w, const Eigen::VectorXd& x_hat,
                         const Eigen::VectorXd& u_hat) {
  const int p = int(u_hat.size());
  if (int(a.size()) != p) throw ExtensionError("ball extension: dimension mismatch");
  Extension e;
  e.rule = "ball";
  e.x_hat = x_hat;
  Eigen::VectorXd ah = eval(a, x_hat);
  Eigen::VectorXd d = u_hat - ah;
  double r = d.norm();
  double lo = l.is_zero() ? 0.0 : l.eval(x_hat);
  double hi = w.eval(x_hat);
  if (r < lo - kAnchorTol || r > hi + kAnchorTol) throw ExtensionError("ball extension: anchor outside annulus");
  double rc = std::clamp(r, std::min(lo, hi), std::max(lo, hi));
  Eigen::VectorXd v = r > 1e-12 ? Eigen::VectorXd(d / r) : Eigen::VectorXd(Eigen::VectorXd::Ones(p) / std::sqrt(p));
  double mu2 = hi - lo > 1e-12 ? (rc - lo) / (hi - lo) : 1.0;
  mu2 = std::clamp(mu2, 0.0, 1.0);
  double mu1 = 1.0 - mu2;
  const int nx = a[0].nvars();
  Polynomial lpoly = l.is_zero() ? Polynomial(nx) : l;
  Polynomial qt = lpoly * mu1 + w * mu2;
  e.u_hat = ah + rc * v;
  for (int j = 0; j < p; ++j) {
    e.q.push_back((a[j] + qt * v[j]).pruned(1e-15));
    e.degree = std::max(e.degree, e.q.back().degree());
  }
  return e;
}

Extension ellipsoid_extension(const PolyVector& a, const PolyMatrix& D, const Eigen::VectorXd& x_hat,
                              const Eigen::VectorXd& u_hat) {
  const int p = int(u_hat.size());
  if (int(a.size()) != p || D.rows != p || D.cols != p) throw ExtensionError("ellipsoid extension: dimension mismatch");
  Eigen::MatrixXd Dh = D.eval(x_hat);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Dh);
  double smin = svd.singularValues().minCoeff(), smax = svd.singularValues().maxCoeff();
  if (!(smin > 0) || smax / smin > 1e10) throw ExtensionError("ellipsoid extension: singular D at anchor");
  Eigen::VectorXd ah = eval(a, x_hat);
  // c = D(x_hat)^{-T} (u_hat - a(x_hat)); membership is |c| <= 1.
  Eigen::VectorXd c = Dh.transpose().fullPivLu().solve(u_hat - ah);
  double nc = c.norm();
  if (nc > 1.0 + kAnchorTol) throw ExtensionError("ellipsoid extension: anchor outside ellipsoid");
  if (nc > 1.0) c /= nc;
  Extension e;
  e.rule = "ellipsoid";
  e.x_hat = x_hat;
  e.u_hat = ah + Dh.transpose() * c;
  for (int i = 0; i < p; ++i) {
    Polynomial q = a[i];
    for (int k = 0; k < p; ++k) q += D(k, i) * c[k];
    e.q.push_back(q.pruned(1e-15));
    e.degree = std::max(e.degree, e.q.back().degree());
  }
  return e;
}

namespace {

// One attempt of the conic system at fixed degree of q and SOS order.
bool try_numeric(const NumericSystem& sys, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat, int dq,
                 int extra, const SdpOptions& sdp_opts, PolyVector& q_out) {
  const int nx = sys.nx;
  const int p = int(u_hat.size());
  auto qbasis = monomial_basis(nx, dq);
  const int nq = int(qbasis.size());

  SdpProblem sdp;
  // Free variables: phi coefficients first.
  for (int j = 0; j < p; ++j)
    for (int b = 0; b < nq; ++b) sdp.free_vars.push_back({{}, 0.0});
  auto phi_index = [&](int j, int b) { return j * nq + b; };

  // Interpolation rows.
  for (int j = 0; j < p; ++j) {
    SdpProblem::Constraint con;
    con.rhs = u_hat[j];
    int row = sdp.num_constraints();
    sdp.constraints.push_back(con);
    for (int b = 0; b < nq; ++b) {
      double v = Polynomial::monomial(qbasis[b]).eval(x_hat);
      if (v != 0.0) sdp.free_vars[phi_index(j, b)].coeffs.push_back({row, v});
    }
  }

  int cdeg = 0;
  for (const auto& c : sys.c_in) cdeg = std::max(cdeg, c.degree());
  for (const auto& c : sys.c_eq) cdeg = std::max(cdeg, c.degree());

  auto add_certificate = [&](const Polynomial& h, bool inequality) {
    // h = h0(x) + sum_j h1_j(x) u_j; split by u-degree.
    Polynomial h0(nx);
    PolyVector h1(p, Polynomial(nx));
    for (const auto& [e, c] : h.terms()) {
      Exponent ex(e.begin(), e.begin() + nx);
      int which = -1;
      for (int j = 0; j < p; ++j)
        if (e[nx + j] == 1) which = j;
      if (which < 0)
        h0.add_term(ex, c);
      else
        h1[which].add_term(ex, c);
    }
    int dh = h0.degree();
    for (const auto& hj : h1)
      if (!hj.is_zero()) dh = std::max(dh, hj.degree() + dq);
    int t = std::max(ceil_half(dh), ceil_half(cdeg)) + extra;
    t = std::max(t, 1);
    MonomialIndex idx(nx, 2 * t);
    const int N = int(idx.size());
    int row0 = sdp.num_constraints();
    for (int a = 0; a < N; ++a) {
      SdpProblem::Constraint con;
      con.rhs = h0.coeff(idx.basis()[a]);
      sdp.constraints.push_back(con);
    }
    // -sum_j h1_j phi_j
    for (int j = 0; j < p; ++j) {
      if (h1[j].is_zero()) continue;
      for (int b = 0; b < nq; ++b)
        for (const auto& [e, c] : h1[j].terms()) {
          int a = idx.find(add(e, qbasis[b]));
          if (a < 0) continue;
          sdp.free_vars[phi_index(j, b)].coeffs.push_back({row0 + a, -c});
        }
    }
    // Ideal multipliers: + c_k * lambda_k.
    for (const auto& ck : sys.c_eq) {
      auto mb = monomial_basis(nx, 2 * t - ck.degree());
      for (const auto& g : mb) {
        SdpProblem::FreeVar fv;
        for (const auto& [e, c] : ck.terms()) fv.coeffs.push_back({row0 + idx.at(add(e, g)), c});
        sdp.free_vars.push_back(std::move(fv));
      }
    }
    if (!inequality) return;
    // Gram blocks: sigma_0 and sigma_l * c_l.
    std::vector<Polynomial> mults = {Polynomial::constant(nx, 1.0)};
    for (const auto& c : sys.c_in) mults.push_back(c);
    for (const auto& m : mults) {
      int s = t - ceil_half(m.degree());
      if (s < 0) continue;
      auto rows = monomial_basis(nx, s);
      int blk = sdp.add_block(int(rows.size()));
      std::map<int, SparseSym> parts;
      for (int r = 0; r < int(rows.size()); ++r)
        for (int c = r; c < int(rows.size()); ++c) {
          Exponent rc = add(rows[r], rows[c]);
          for (const auto& [e, coef] : m.terms()) parts[row0 + idx.at(add(rc, e))].push_back({r, c, coef});
        }
      for (auto& [row, sp] : parts) sdp.constraints[row].parts.push_back({blk, std::move(sp)});
    }
  };

  for (const auto& h : sys.h_eq) add_certificate(h, false);
  for (const auto& h : sys.h_in) add_certificate(h, true);
  if (sdp.blocks.empty()) {
    // Pure linear system: keep the solver happy with a dummy 1x1 block.
    int blk = sdp.add_block(1);
    SdpProblem::Constraint con;
    con.parts.push_back({blk, {{0, 0, 1.0}}});
    con.rhs = 1.0;
    sdp.constraints.push_back(con);
  }

  FeasibilityResult fr = feasibility_sdp(sdp, FeasibilitySide::Primal, sdp_opts);
  if (!fr.feasible) return false;
  q_out.clear();
  for (int j = 0; j < p; ++j) {
    Polynomial q(nx);
    for (int b = 0; b < nq; ++b) q.add_term(qbasis[b], fr.solution.w[phi_index(j, b)]);
    q_out.push_back(q.pruned(1e-12));
  }
  return true;
}

}  // namespace

Extension numeric_extension(const NumericSystem& sys, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat,
                            const NumericOptions& opts) {
  const int nx = sys.nx;
  const int p = int(u_hat.size());
  for (const auto* set : {&sys.h_eq, &sys.h_in})
    for (const auto& h : *set) {
      if (h.nvars() != nx + p) throw ExtensionError("numeric extension: h must be over (x, u)");
      if (!h.is_affine_in(nx, p)) throw ExtensionError("numeric extension: h must be affine in u");
    }
  // SIP specialization: constants already satisfy the system.
  bool x_free = true;
  for (const auto* set : {&sys.h_eq, &sys.h_in})
    for (const auto& h : *set)
      for (const auto& [e, c] : h.terms())
        for (int i = 0; i < nx; ++i)
          if (e[i] != 0) x_free = false;
  if (x_free) {
    Extension e = constant_extension(nx, x_hat, u_hat);
    e.rule = "numeric";
    return e;
  }
  for (int dq = std::max(opts.degree, 0); dq <= std::max(opts.max_degree, opts.degree); ++dq) {
    for (int extra = 0; extra <= 1; ++extra) {
      PolyVector q;
      if (try_numeric(sys, x_hat, u_hat, dq, extra, opts.sdp, q)) {
        Extension e;
        e.rule = "numeric";
        e.x_hat = x_hat;
        e.u_hat = u_hat;
        e.q = q;
        e.degree = dq;
        return e;
      }
    }
  }
  throw ExtensionError("numeric extension: extension_not_found up to degree " + std::to_string(opts.max_degree));
}

double shape_margin(const ExtensionRule& rule, const PolyVector& q, const Eigen::VectorXd& x) {
  Eigen::VectorXd u = eval(q, x);
  const int p = int(u.size());
  double m = std::numeric_limits<double>::infinity();
  switch (rule.kind) {
    case ExtensionRule::Kind::Box:
      for (int j = 0; j < p; ++j) m = std::min({m, u[j] - rule.l[j].eval(x), rule.w[j].eval(x) - u[j]});
      break;
    case ExtensionRule::Kind::Simplex:
      for (int j = 0; j < p; ++j) m = std::min(m, u[j] - rule.l[j].eval(x));
      m = std::min(m, rule.budget.eval(x) - u.sum());
      break;
    case ExtensionRule::Kind::Ball: {
      double r = (u - eval(rule.center, x)).norm();
      double lo = rule.inner.is_zero() ? 0.0 : rule.inner.eval(x);
      m = std::min(r - lo, rule.outer.eval(x) - r);
      break;
    }
    case ExtensionRule::Kind::Ellipsoid: {
      Eigen::MatrixXd D = rule.shape.eval(x);
      Eigen::VectorXd c = D.transpose().fullPivLu().solve(u - eval(rule.center, x));
      m = 1.0 - c.squaredNorm();
      break;
    }
    default:
      throw ExtensionError("shape_margin: rule has no shape data");
  }
  return m;
}

double system_margin(const PolyVector& h_eq, const PolyVector& h_in, int nx, const PolyVector& q,
                     const Eigen::VectorXd& x) {
  Eigen::VectorXd xu(nx + int(q.size()));
  xu << x, eval(q, x);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& h : h_in) m = std::min(m, h.eval(xu));
  for (const auto& h : h_eq) m = std::min(m, -std::abs(h.eval(xu)));
  return m;
}

std::vector<Eigen::VectorXd> halton_points(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count, int skip) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const int n = int(lo.size());
  if (n > 20) throw std::invalid_argument("halton_points: at most 20 dimensions");
  std::vector<Eigen::VectorXd> pts;
  for (int k = skip; k < skip + count; ++k) {
    Eigen::VectorXd x(n);
    for (int d = 0; d < n; ++d) {
      double f = 1.0, r = 0.0;
      int i = k;
      while (i > 0) {
        f /= primes[d];
        r += f * (i % primes[d]);
        i /= primes[d];
      }
      x[d] = lo[d] + r * (hi[d] - lo[d]);
    }
    pts.push_back(x);
  }
  return pts;
}

ExtensionRule detect_rule(const PolyVector& h_eq, const PolyVector& h_in, int nx) {
  ExtensionRule rule;
  const int nv = h_in.empty() ? (h_eq.empty() ? 0 : h_eq[0].nvars()) : h_in[0].nvars();
  const int p = nv - nx;
  // Constant U: no x in any h.
  bool x_free = true;
  for (const auto* set : {&h_eq, &h_in})
    for (const auto& h : *set)
      for (const auto& [e, c] : h.terms())
        for (int i = 0; i < nx; ++i)
          if (e[i] != 0) x_free = false;
  if (x_free) {
    rule.kind = ExtensionRule::Kind::Constant;
    return rule;
  }
  if (!h_eq.empty() || p <= 0) return rule;

  // Split each h into r(x) + sum_j c_j u_j with constant c_j.
  struct Lin {
    Polynomial r;
    Eigen::VectorXd c;
    bool ok = true;
  };
  std::vector<Lin> lins;
  std::vector<int> var_map(nx);
  for (int i = 0; i < nx; ++i) var_map[i] = i;
  for (const auto& h : h_in) {
    Lin L{Polynomial(nx), Eigen::VectorXd::Zero(p)};
    for (const auto& [e, c] : h.terms()) {
      int du = 0, which = -1;
      for (int j = 0; j < p; ++j)
        if (e[nx + j] > 0) {
          du += e[nx + j];
          which = j;
        }
      int dx = 0;
      for (int i = 0; i < nx; ++i) dx += e[i];
      if (du == 0) {
        L.r.add_term(Exponent(e.begin(), e.begin() + nx), c);
      } else if (du == 1 && dx == 0) {
        L.c[which] += c;
      } else {
        L.ok = false;
      }
    }
    if (!L.ok) return rule;
    lins.push_back(L);
  }
  // Box: every row bounds a single coordinate, each coordinate has one lower and one upper bound.
  std::vector<int> nlo(p, 0), nhi(p, 0);
  PolyVector lo(p, Polynomial(nx)), hi(p, Polynomial(nx));
  std::vector<const Lin*> multi;
  for (const auto& L : lins) {
    int nz = 0, j = -1;
    for (int k = 0; k < p; ++k)
      if (L.c[k] != 0.0) {
        ++nz;
        j = k;
      }
    if (nz == 1) {
      double cj = L.c[j];
      if (cj > 0) {
        ++nlo[j];
        lo[j] = L.r * (-1.0 / cj);
      } else {
        ++nhi[j];
        hi[j] = L.r * (1.0 / -cj);
      }
    } else if (nz > 1) {
      multi.push_back(&L);
    } else {
      return rule;
    }
  }
  bool all_lo = std::all_of(nlo.begin(), nlo.end(), [](int v) { return v == 1; });
  bool all_hi = std::all_of(nhi.begin(), nhi.end(), [](int v) { return v == 1; });
  if (multi.empty() && all_lo && all_hi) {
    rule.kind = ExtensionRule::Kind::Box;
    rule.l = lo;
    rule.w = hi;
    return rule;
  }
  // Simplex: lower bounds on every coordinate plus one row budget - c e'u >= 0.
  bool no_hi = std::all_of(nhi.begin(), nhi.end(), [](int v) { return v == 0; });
  if (all_lo && no_hi && multi.size() == 1) {
    const Lin& L = *multi[0];
    double c0 = L.c[0];
    bool uniform = c0 < 0;
    for (int k = 0; k < p; ++k)
      if (std::abs(L.c[k] - c0) > 1e-14 * std::abs(c0)) uniform = false;
    if (uniform) {
      rule.kind = ExtensionRule::Kind::Simplex;
      rule.l = lo;
      rule.budget = L.r * (1.0 / -c0);
      return rule;
    }
  }
  return rule;
}

}  // namespace gsip
