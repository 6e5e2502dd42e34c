#include "gsip/popsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gsip {

std::string to_string(PopStatus s) {
  switch (s) {
    case PopStatus::Optimal: return "optimal";
    case PopStatus::Infeasible: return "infeasible";
    case PopStatus::UnboundedSuspected: return "unbounded_suspected";
    case PopStatus::OrderCapReached: return "order_cap_reached";
    case PopStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

Membership check_membership(const Eigen::VectorXd& x, const Pop& pop, double feas_tol) {
  if (x.size() != pop.nvars) throw std::invalid_argument("check_membership: dimension mismatch");
  Membership m;
  for (const auto& p : pop.eq) {
    double v = std::abs(p.eval(x)) / std::max(1.0, p.max_abs_coeff());
    m.worst_violation = std::max(m.worst_violation, v);
  }
  for (const auto& p : pop.ineq) {
    double v = -p.eval(x) / std::max(1.0, p.max_abs_coeff());
    m.worst_violation = std::max(m.worst_violation, v);
  }
  m.ok = m.worst_violation <= feas_tol;
  return m;
}

namespace {

// Gauss-Newton correction of an extracted point onto its violated constraints: equalities and
// negative inequalities are driven to zero with minimum-norm steps. SDP moments are accurate
// to roughly the solver tolerance, which can leave active constraints slightly violated.
Eigen::VectorXd polish(const Eigen::VectorXd& x0, const Pop& pop, double feas_tol) {
  Eigen::VectorXd x = x0;
  for (int it = 0; it < 8; ++it) {
    std::vector<const Polynomial*> rows;
    for (const auto& p : pop.eq) rows.push_back(&p);
    for (const auto& p : pop.ineq)
      if (p.eval(x) < 0) rows.push_back(&p);
    if (rows.empty() || check_membership(x, pop, 0.01 * feas_tol).ok) break;
    Eigen::MatrixXd J(rows.size(), pop.nvars);
    Eigen::VectorXd r(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      r[i] = rows[i]->eval(x);
      for (int v = 0; v < pop.nvars; ++v) J(i, v) = rows[i]->derivative(v).eval(x);
    }
    Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(r);
    if (!step.allFinite()) break;
    x -= step;
  }
  return x;
}

}  // namespace

PopResult minimize(const Pop& pop, const PopOptions& opts) {
  pop.validate();
  PopResult res;
  const int d0 = pop.d0();
  const int kmin = std::max(opts.k_min > 0 ? opts.k_min : d0, d0);
  const int kmax = std::max(opts.k_max > 0 ? opts.k_max : d0 + 3, kmin);
  double best_f = std::numeric_limits<double>::infinity();

  auto close_to_value = [&](double f, double value) {
    return f <= value + opts.value_tol * std::max(1.0, std::abs(value));
  };
  auto consider_candidate = [&](Eigen::VectorXd& x) {
    if (!check_membership(x, pop, opts.feas_tol).ok) {
      // Only small corrections; anything larger is a wrong point, not an inaccurate one.
      Eigen::VectorXd y = polish(x, pop, opts.feas_tol);
      if ((y - x).lpNorm<Eigen::Infinity>() > 1e-3 * std::max(1.0, x.lpNorm<Eigen::Infinity>())) return false;
      if (!check_membership(y, pop, opts.feas_tol).ok) return false;
      x = y;
    }
    double f = pop.objective.eval(x);
    if (f < best_f) {
      best_f = f;
      res.has_candidate = true;
      res.candidate = x;
    }
    return true;
  };

  bool solved_any = false;
  bool unbounded_seen = false;
  auto stable_next_order = [&](int k, double value) {
    if (basis_size(pop.nvars, 2 * (k + 1)) > opts.max_moments) return true;
    SdpSolution next = solve_sdp(build_moment_relaxation(pop, k + 1).sdp, opts.sdp);
    res.sdp_iterations += next.iterations;
    if (next.status != SdpStatus::Optimal) return false;
    return std::abs(-next.dual_value - value) <= 1e-4 * std::max(1.0, std::abs(value));
  };
  for (int k = kmin; k <= kmax; ++k) {
    if (basis_size(pop.nvars, 2 * k) > opts.max_moments) break;
    MomentRelaxation rel = build_moment_relaxation(pop, k);
    SdpSolution sol = solve_sdp(rel.sdp, opts.sdp);
    res.sdp_iterations += sol.iterations;
    res.order_used = k;
    if (sol.status == SdpStatus::DualInfeasible) {
      res.status = PopStatus::Infeasible;
      res.certified = sol.certificate_verified;
      return res;
    }
    if (sol.status == SdpStatus::PrimalInfeasible) {
      // Low orders can be unbounded even when the problem is not; try the next one.
      unbounded_seen = true;
      continue;
    }
    if (sol.status != SdpStatus::Optimal) continue;
    solved_any = true;
    const double value = rel.value(sol);
    res.value = value;
    res.bounds.push_back(value);
    res.moments = rel.tms(sol);

    FlatResult fr = check_flat_truncation(res.moments, d0, k, opts.rank_tol);
    res.flat = fr;
    std::vector<Eigen::VectorXd> accepted;
    if (fr.flat) {
      std::vector<Eigen::VectorXd> pts;
      try {
        pts = extract_minimizers(res.moments, fr.t, fr.rank);
      } catch (const std::exception&) {
        pts.clear();
      }
      for (auto& x : pts)
        if (consider_candidate(x) && close_to_value(pop.objective.eval(x), value)) accepted.push_back(x);
    }
    if (accepted.empty()) {
      // A feasible first-moment vector attaining the bound is a global minimizer.
      Eigen::VectorXd xc = res.moments.first_moments();
      if (consider_candidate(xc) && close_to_value(pop.objective.eval(xc), value)) accepted.push_back(xc);
    }
    if (accepted.empty() && opts.refine) {
      // Minimizer set likely not finite: pick the point of the near-optimal set closest
      // to a fixed random target, which is generically unique.
      std::mt19937 rng(20240917u + unsigned(k));
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      Eigen::VectorXd target = res.moments.first_moments();
      Pop aux = pop;
      aux.objective = Polynomial(pop.nvars);
      for (int i = 0; i < pop.nvars; ++i) {
        target[i] += unif(rng);
        Polynomial d = Polynomial::variable(pop.nvars, i) - target[i];
        aux.objective += d * d;
      }
      aux.ineq.push_back(value + 0.5 * opts.value_tol * std::max(1.0, std::abs(value)) - pop.objective);
      PopOptions sub = opts;
      sub.refine = false;
      sub.k_min = k;
      sub.k_max = k + 1;
      PopResult r = minimize(aux, sub);
      res.sdp_iterations += r.sdp_iterations;
      if (r.status == PopStatus::Optimal)
        for (auto x : r.minimizers)
          if (consider_candidate(x) && close_to_value(pop.objective.eval(x), value)) accepted.push_back(x);
    }
    if (!accepted.empty() && unbounded_seen && !stable_next_order(k, value)) {
      // An unbounded lower order followed by a drifting value: the relaxations are only
      // weakly feasible and the reported bound is an artifact of solver tolerances.
      res.status = PopStatus::UnboundedSuspected;
      res.value = -std::numeric_limits<double>::infinity();
      res.minimizers = std::move(accepted);
      return res;
    }
    if (!accepted.empty()) {
      res.status = PopStatus::Optimal;
      res.minimizers = std::move(accepted);
      return res;
    }
  }
  if (solved_any) {
    res.status = PopStatus::OrderCapReached;
  } else if (unbounded_seen) {
    res.status = PopStatus::UnboundedSuspected;
    res.value = -std::numeric_limits<double>::infinity();
  } else {
    res.status = PopStatus::NumericalFailure;
  }
  return res;
}

}  // namespace gsip
