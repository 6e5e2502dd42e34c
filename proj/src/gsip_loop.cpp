#include "gsip/gsip_loop.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gsip {

std::string to_string(GsipStatus s) {
  switch (s) {
    case GsipStatus::Optimal: return "optimal";
    case GsipStatus::Infeasible: return "infeasible";
    case GsipStatus::LoopCap: return "loop_cap";
    case GsipStatus::ExtensionFailure: return "extension_failure";
    case GsipStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void GsipProblem::validate() const {
  if (n <= 0 || p <= 0) throw std::invalid_argument("gsip: need n > 0 and p > 0");
  if (f.nvars() != n) throw std::invalid_argument("gsip: objective must be over x");
  for (const auto* v : {&c_eq, &c_in})
    for (const auto& c : *v)
      if (c.nvars() != n) throw std::invalid_argument("gsip: X constraints must be over x");
  for (const auto* v : {&h_eq, &h_in, &g})
    for (const auto& h : *v)
      if (h.nvars() != n + p) throw std::invalid_argument("gsip: U and g must be over (x, u)");
  if (g.empty()) throw std::invalid_argument("gsip: no infinity constraint");
}

Pop GsipProblem::upper_pop() const {
  Pop pop;
  pop.nvars = n;
  pop.objective = f;
  pop.eq = c_eq;
  pop.ineq = c_in;
  return pop;
}

NumericSystem GsipProblem::numeric_system() const {
  NumericSystem sys;
  sys.nx = n;
  sys.c_eq = c_eq;
  sys.c_in = c_in;
  sys.h_eq = h_eq;
  sys.h_in = h_in;
  return sys;
}

Polynomial fix_x(const Polynomial& poly, int n, int np, const Eigen::VectorXd& x) {
  std::vector<Polynomial> repl;
  repl.reserve(n + np);
  for (int i = 0; i < n; ++i) repl.push_back(Polynomial::constant(np, x[i]));
  for (int j = 0; j < np; ++j) repl.push_back(Polynomial::variable(np, j));
  return poly.compose(repl);
}

namespace {

Eigen::VectorXd join(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  Eigen::VectorXd xu(x.size() + u.size());
  xu << x, u;
  return xu;
}

// A point of U(x_hat) with g_j < 0 when (Q_kj) looks unbounded.
bool find_violation(const Pop& lower, PopOptions opts, Eigen::VectorXd& u) {
  Pop aux = lower;
  Polynomial norm2(lower.nvars);
  for (int i = 0; i < lower.nvars; ++i) norm2 += Polynomial::variable(lower.nvars, i).pow(2);
  aux.objective = norm2;
  aux.ineq.push_back(-1.0 - lower.objective);
  PopResult r = minimize(aux, opts);
  if (r.status == PopStatus::Optimal) {
    u = r.minimizers[0];
    return true;
  }
  if (r.has_candidate) {
    u = r.candidate;
    return true;
  }
  return false;
}

}  // namespace

LowerResult check_feasibility(const Eigen::VectorXd& x_hat, const GsipProblem& prob, const PopOptions& opts,
                              double eps) {
  const int n = prob.n, np = prob.p, s = prob.s();
  LowerResult out;
  out.g_hat.assign(s, std::numeric_limits<double>::infinity());
  out.u_hat.assign(s, Eigen::VectorXd());
  out.approximate.assign(s, false);
  Pop lower;
  lower.nvars = np;
  for (const auto& h : prob.h_eq) lower.eq.push_back(fix_x(h, n, np, x_hat));
  for (const auto& h : prob.h_in) lower.ineq.push_back(fix_x(h, n, np, x_hat));

  for (int j = 0; j < s; ++j) {
    lower.objective = fix_x(prob.g[j], n, np, x_hat);
    auto g_at = [&](const Eigen::VectorXd& u) { return prob.g[j].eval(join(x_hat, u)); };
    PopResult r = minimize(lower, opts);
    switch (r.status) {
      case PopStatus::Optimal: {
        // Several atoms may attain the bound; keep the most violating one.
        Eigen::VectorXd best = r.minimizers[0];
        for (const auto& u : r.minimizers)
          if (g_at(u) < g_at(best)) best = u;
        out.u_hat[j] = best;
        out.g_hat[j] = g_at(best);
        break;
      }
      case PopStatus::Infeasible:
        // U(x_hat) is empty, so every constraint holds vacuously.
        out.u_empty = true;
        for (int i = 0; i < s; ++i) {
          out.g_hat[i] = std::numeric_limits<double>::infinity();
          out.u_hat[i] = Eigen::VectorXd();
        }
        out.g_min = std::numeric_limits<double>::infinity();
        return out;
      case PopStatus::UnboundedSuspected: {
        Eigen::VectorXd u;
        if (find_violation(lower, opts, u)) {
          out.u_hat[j] = u;
          out.g_hat[j] = g_at(u);
        } else {
          out.g_hat[j] = -std::numeric_limits<double>::infinity();
        }
        break;
      }
      case PopStatus::OrderCapReached:
      case PopStatus::NumericalFailure: {
        if (r.has_candidate && g_at(r.candidate) < -eps) {
          out.u_hat[j] = r.candidate;
          out.g_hat[j] = g_at(r.candidate);
          break;
        }
        out.approximate[j] = true;
        if (r.status == PopStatus::OrderCapReached) {
          out.g_hat[j] = r.value;
          out.u_hat[j] = r.has_candidate ? r.candidate : r.moments.first_moments();
        } else {
          out.g_hat[j] = -std::numeric_limits<double>::infinity();
        }
        break;
      }
    }
  }
  for (double v : out.g_hat) out.g_min = std::min(out.g_min, v);
  return out;
}

Extension build_extension(const GsipProblem& prob, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat,
                          const NumericOptions& opts) {
  ExtensionRule rule = prob.extension;
  if (rule.kind == ExtensionRule::Kind::Auto) {
    ExtensionRule detected = detect_rule(prob.h_eq, prob.h_in, prob.n);
    if (detected.kind != ExtensionRule::Kind::Auto) {
      rule = detected;
    } else {
      for (const auto* v : {&prob.h_eq, &prob.h_in})
        for (const auto& h : *v)
          if (!h.is_affine_in(prob.n, prob.p))
            throw ExtensionError("no extension rule applies: U(x) is not affine in u and has no shape hint");
      rule.kind = ExtensionRule::Kind::Numeric;
    }
  }
  switch (rule.kind) {
    case ExtensionRule::Kind::Constant: return constant_extension(prob.n, x_hat, u_hat);
    case ExtensionRule::Kind::Box: return box_extension(rule.l, rule.w, x_hat, u_hat);
    case ExtensionRule::Kind::Simplex: return simplex_extension(rule.l, rule.budget, x_hat, u_hat);
    case ExtensionRule::Kind::Ball: return ball_extension(rule.center, rule.inner, rule.outer, x_hat, u_hat);
    case ExtensionRule::Kind::Ellipsoid: return ellipsoid_extension(rule.center, rule.shape, x_hat, u_hat);
    case ExtensionRule::Kind::Numeric: {
      NumericOptions no = opts;
      if (prob.extension.kind == ExtensionRule::Kind::Numeric) {
        no.degree = rule.degree;
        no.max_degree = rule.max_degree;
      }
      return numeric_extension(prob.numeric_system(), x_hat, u_hat, no);
    }
    case ExtensionRule::Kind::Auto: break;
  }
  throw ExtensionError("no extension rule applies");
}

Pop classical_exchange_step(const GsipProblem& prob, const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u_hat) {
  Pop pop = prob.upper_pop();
  Extension e = constant_extension(prob.n, x_hat, u_hat);
  for (const auto& g : prob.g) pop.ineq.push_back(substitute(g, prob.n, e.q));
  return pop;
}

namespace {

double sampled_validity(const GsipProblem& prob, const Pop& x_set, const PolyVector& q, const GsipOptions& opts) {
  double worst = std::numeric_limits<double>::infinity();
  int used = 0;
  for (const auto& x : halton_points(opts.sample_lo, opts.sample_hi, 20 * opts.validity_samples)) {
    if (!check_membership(x, x_set, 1e-9).ok) continue;
    worst = std::min(worst, system_margin(prob.h_eq, prob.h_in, prob.n, q, x));
    if (++used >= opts.validity_samples) break;
  }
  return used ? worst : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

GsipResult solve_gsip(const GsipProblem& prob, const GsipOptions& opts) {
  using clock = std::chrono::steady_clock;
  prob.validate();
  GsipResult res;
  const Pop x_set = prob.upper_pop();
  Pop current = x_set;
  const bool sample = opts.validity_samples > 0 && opts.sample_lo.size() == prob.n && opts.sample_hi.size() == prob.n;

  for (int k = 0; k < opts.max_loops; ++k) {
    auto t0 = clock::now();
    IterationRecord rec;
    rec.k = k;
    res.loops = k + 1;
    PopResult up = minimize(current, opts.upper);
    if (up.status == PopStatus::Infeasible) {
      res.status = GsipStatus::Infeasible;
      res.certified = up.certified;
      res.message = "relaxation of the upper problem is infeasible at loop " + std::to_string(k);
      return res;
    }
    if (up.status == PopStatus::Optimal) {
      rec.x_hat = up.minimizers[0];
      rec.minimizers = up.minimizers;
    } else if (up.has_candidate) {
      rec.x_hat = up.candidate;
      rec.upper_certified = false;
    } else {
      res.status = GsipStatus::NumericalFailure;
      res.message = "upper problem: " + to_string(up.status) + " at loop " + std::to_string(k);
      return res;
    }
    rec.f_k = prob.f.eval(rec.x_hat);
    rec.bound = up.value;
    rec.lower = check_feasibility(rec.x_hat, prob, opts.lower, opts.eps);
    for (int j = 0; j < prob.s(); ++j)
      if (rec.lower.g_hat[j] < 0) rec.labels.push_back(j);

    res.x = rec.x_hat;
    res.f = rec.f_k;
    res.g_min = rec.lower.g_min;
    if (rec.lower.g_min >= -opts.eps) {
      rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
      res.trace.push_back(std::move(rec));
      res.status = GsipStatus::Optimal;
      return res;
    }
    for (int j : rec.labels) {
      const Eigen::VectorXd& u = rec.lower.u_hat[j];
      if (u.size() != prob.p) {
        res.status = GsipStatus::ExtensionFailure;
        res.message = "lower problem " + std::to_string(j) + " gave no violating point";
        res.trace.push_back(std::move(rec));
        return res;
      }
      Extension ext;
      try {
        ext = opts.exchange_only ? constant_extension(prob.n, rec.x_hat, u)
                                 : build_extension(prob, rec.x_hat, u, opts.numeric);
      } catch (const ExtensionError& e) {
        res.status = GsipStatus::ExtensionFailure;
        res.message = e.what();
        res.trace.push_back(std::move(rec));
        return res;
      }
      if (sample) ext.validity = sampled_validity(prob, x_set, ext.q, opts);
      Polynomial cut = substitute(prob.g[j], prob.n, ext.q).pruned(1e-13);
      current.ineq.push_back(cut);
      res.cuts.push_back(cut);
      rec.extensions.push_back(std::move(ext));
    }
    rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    res.trace.push_back(std::move(rec));
  }
  res.status = GsipStatus::LoopCap;
  res.message = "loop cap reached";
  return res;
}

}  // namespace gsip
