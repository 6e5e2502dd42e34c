#include "gsip/moment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gsip {

void Pop::validate() const {
  if (nvars <= 0) throw std::invalid_argument("pop: nvars must be positive");
  if (objective.nvars() != nvars) throw std::invalid_argument("pop: objective nvars mismatch");
  for (const auto& p : eq)
    if (p.nvars() != nvars) throw std::invalid_argument("pop: equality nvars mismatch");
  for (const auto& p : ineq)
    if (p.nvars() != nvars) throw std::invalid_argument("pop: inequality nvars mismatch");
}

int Pop::max_degree() const {
  int d = objective.degree();
  for (const auto& p : eq) d = std::max(d, p.degree());
  for (const auto& p : ineq) d = std::max(d, p.degree());
  return d;
}

int Pop::d0() const { return std::max(1, (max_degree() + 1) / 2); }

MonomialIndex::MonomialIndex(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  basis_ = monomial_basis(nvars, degree);
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], int(i));
}

int MonomialIndex::find(const Exponent& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? -1 : it->second;
}

int MonomialIndex::at(const Exponent& e) const {
  int i = find(e);
  if (i < 0) throw std::out_of_range("moment index: degree overflow");
  return i;
}

namespace {

Exponent add(const Exponent& a, const Exponent& b) {
  Exponent c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

int ceil_half(int d) { return d <= 0 ? 0 : (d + 1) / 2; }

}  // namespace

Tms Tms::from_atoms(const std::vector<Eigen::VectorXd>& pts, const std::vector<double>& weights, int order) {
  if (pts.empty() || pts.size() != weights.size()) throw std::invalid_argument("from_atoms: bad input");
  Tms y;
  y.nvars = int(pts[0].size());
  y.order = order;
  auto basis = monomial_basis(y.nvars, 2 * order);
  y.values = Eigen::VectorXd::Zero(Eigen::Index(basis.size()));
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t a = 0; a < basis.size(); ++a)
      y.values[Eigen::Index(a)] += weights[j] * Polynomial::monomial(basis[a]).eval(pts[j]);
  return y;
}

double Tms::operator[](const Exponent& e) const {
  // Index lookup via a fresh basis would be wasteful; rank exponents directly.
  static thread_local std::map<std::pair<int, int>, MonomialIndex> cache;
  auto key = std::make_pair(nvars, 2 * order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, MonomialIndex(nvars, 2 * order)).first;
  return values[it->second.at(e)];
}

double Tms::apply(const Polynomial& p) const {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += c * (*this)[e];
  return s;
}

Eigen::VectorXd Tms::first_moments() const {
  Eigen::VectorXd x(nvars);
  for (int i = 0; i < nvars; ++i) x[i] = values[i + 1];
  return x;
}

Eigen::MatrixXd moment_matrix(const Tms& y, int d) {
  if (d > y.order) throw std::out_of_range("moment_matrix: degree overflow");
  return localizing_matrix(Polynomial::constant(y.nvars, 1.0), y, d);
}

int localizing_order(const Polynomial& p, int k) { return k - ceil_half(p.degree()); }

Eigen::MatrixXd localizing_matrix(const Polynomial& p, const Tms& y, int k) {
  if (p.nvars() != y.nvars) throw std::invalid_argument("localizing_matrix: nvars mismatch");
  if (p.degree() > 2 * k || k > y.order) throw std::out_of_range("localizing_matrix: degree overflow");
  int t = localizing_order(p, k);
  auto rows = monomial_basis(y.nvars, t);
  MonomialIndex idx(y.nvars, 2 * y.order);
  const int n = int(rows.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Exponent ab = add(rows[a], rows[b]);
      double s = 0.0;
      for (const auto& [e, c] : p.terms()) s += c * y.values[idx.at(add(ab, e))];
      L(a, b) = s;
      L(b, a) = s;
    }
  return L;
}

Eigen::VectorXd localizing_vector(const Polynomial& p, const Tms& y, int two_k) {
  if (p.nvars() != y.nvars) throw std::invalid_argument("localizing_vector: nvars mismatch");
  if (p.degree() > two_k || two_k > 2 * y.order) throw std::out_of_range("localizing_vector: degree overflow");
  auto rows = monomial_basis(y.nvars, two_k - std::max(p.degree(), 0));
  MonomialIndex idx(y.nvars, 2 * y.order);
  Eigen::VectorXd v(Eigen::Index(rows.size()));
  for (std::size_t g = 0; g < rows.size(); ++g) {
    double s = 0.0;
    for (const auto& [e, c] : p.terms()) s += c * y.values[idx.at(add(rows[g], e))];
    v[Eigen::Index(g)] = s;
  }
  return v;
}

Tms MomentRelaxation::tms(const SdpSolution& sol) const {
  Tms y;
  y.nvars = nvars;
  y.order = order;
  y.values = sol.y;
  return y;
}

MomentRelaxation build_moment_relaxation(const Pop& pop, int k) {
  pop.validate();
  if (2 * k < pop.max_degree()) throw std::invalid_argument("moment relaxation: order too small");
  MomentRelaxation rel;
  rel.order = k;
  rel.nvars = pop.nvars;
  MonomialIndex idx(pop.nvars, 2 * k);
  rel.basis = idx.basis();
  const int N = int(idx.size());
  SdpProblem& sdp = rel.sdp;
  sdp.constraints.resize(N);
  for (int a = 0; a < N; ++a) sdp.constraints[a].rhs = -pop.objective.coeff(rel.basis[a]);

  // C - sum y_a A_a = L_p[y] with C = 0, so A_a = -(coefficient of y_a in L_p).
  auto add_psd_block = [&](const Polynomial& p) {
    int t = localizing_order(p, k);
    if (t < 0) return;
    auto rows = monomial_basis(pop.nvars, t);
    int b = sdp.add_block(int(rows.size()));
    std::vector<SparseSym> parts(N);
    for (int r = 0; r < int(rows.size()); ++r)
      for (int c = r; c < int(rows.size()); ++c) {
        Exponent rc = add(rows[r], rows[c]);
        for (const auto& [e, coef] : p.terms()) parts[idx.at(add(rc, e))].push_back({r, c, -coef});
      }
    for (int a = 0; a < N; ++a)
      if (!parts[a].empty()) sdp.constraints[a].parts.push_back({b, std::move(parts[a])});
  };
  add_psd_block(Polynomial::constant(pop.nvars, 1.0));
  for (const auto& p : pop.ineq) {
    if (p.is_zero()) continue;
    if (p.degree() == 0) {
      if (p.coeff(Exponent(pop.nvars, 0)) >= 0) continue;
    }
    add_psd_block(p);
  }

  // y_0 = 1.
  sdp.free_vars.push_back({{{0, 1.0}}, 1.0});
  // Localizing vectors of the equalities vanish.
  for (const auto& p : pop.eq) {
    if (p.is_zero()) continue;
    auto shifts = monomial_basis(pop.nvars, 2 * k - p.degree());
    for (const auto& g : shifts) {
      SdpProblem::FreeVar fv;
      for (const auto& [e, coef] : p.terms()) fv.coeffs.push_back({idx.at(add(g, e)), coef});
      fv.cost = 0.0;
      sdp.free_vars.push_back(std::move(fv));
    }
  }
  return rel;
}

int numerical_rank(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
  double smax = ev.maxCoeff();
  if (smax <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > rank_tol * smax) ++r;
  return r;
}

FlatResult check_flat_truncation(const Tms& y, int d0, int k, double rank_tol) {
  FlatResult fr;
  if (d0 > k) return fr;
  for (int t = d0; t <= k && t <= y.order; ++t) {
    int r_low = numerical_rank(moment_matrix(y, t - d0), rank_tol);
    int r_t = numerical_rank(moment_matrix(y, t), rank_tol);
    if (r_low == r_t) {
      fr.flat = true;
      fr.t = t;
      fr.rank = r_t;
      return fr;
    }
  }
  return fr;
}

std::vector<Eigen::VectorXd> extract_minimizers(const Tms& y, int t, int r) {
  const int n = y.nvars;
  if (r <= 0) throw std::invalid_argument("extract_minimizers: rank must be positive");
  if (t < 1 || t > y.order) throw std::out_of_range("extract_minimizers: bad truncation degree");
  Eigen::MatrixXd M = moment_matrix(y, t);
  auto rows = monomial_basis(n, t);
  MonomialIndex rindex(n, t);

  // Pivoted Cholesky restricted to monomials of degree <= t-1 so that shifts stay inside M_t.
  const int cand = int(basis_size(n, t - 1));
  std::vector<int> piv;
  Eigen::MatrixXd Lf = Eigen::MatrixXd::Zero(cand, r);
  Eigen::VectorXd diag = M.diagonal().head(cand);
  std::vector<bool> used(cand, false);
  for (int j = 0; j < r; ++j) {
    int best = -1;
    double bv = 0.0;
    for (int i = 0; i < cand; ++i)
      if (!used[i] && diag[i] > bv) {
        bv = diag[i];
        best = i;
      }
    if (best < 0 || bv <= 0) break;
    used[best] = true;
    piv.push_back(best);
    double s = std::sqrt(bv);
    for (int i = 0; i < cand; ++i) {
      double v = M(i, best);
      for (int q = 0; q < j; ++q) v -= Lf(i, q) * Lf(best, q);
      Lf(i, j) = v / s;
    }
    for (int i = 0; i < cand; ++i)
      if (!used[i]) diag[i] = M(i, i) - Lf.row(i).head(j + 1).squaredNorm();
  }
  const int rr = int(piv.size());
  if (rr == 0) throw std::runtime_error("extract_minimizers: numerical_failure (empty basis)");

  Eigen::MatrixXd MB(rr, rr);
  for (int a = 0; a < rr; ++a)
    for (int b = 0; b < rr; ++b) MB(a, b) = M(piv[a], piv[b]);
  Eigen::LDLT<Eigen::MatrixXd> fac(MB);
  if (fac.info() != Eigen::Success) throw std::runtime_error("extract_minimizers: numerical_failure (basis)");

  std::vector<Eigen::MatrixXd> Nm(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd Mx(rr, rr);
    for (int a = 0; a < rr; ++a)
      for (int b = 0; b < rr; ++b) {
        Exponent e = rows[piv[b]];
        e[i] += 1;
        Mx(a, b) = M(piv[a], rindex.at(e));
      }
    Nm[i] = fac.solve(Mx);
  }

  std::mt19937 rng(20240917u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = unif(rng);
  w /= w.sum();
  Eigen::MatrixXd Ncomb = Eigen::MatrixXd::Zero(rr, rr);
  for (int i = 0; i < n; ++i) Ncomb += w[i] * Nm[i];
  Eigen::RealSchur<Eigen::MatrixXd> schur(Ncomb);
  if (schur.info() != Eigen::Success) throw std::runtime_error("extract_minimizers: numerical_failure (schur)");
  Eigen::MatrixXd Q = schur.matrixU();

  std::vector<Eigen::VectorXd> pts(rr, Eigen::VectorXd(n));
  for (int j = 0; j < rr; ++j)
    for (int i = 0; i < n; ++i) pts[j][i] = Q.col(j).dot(Nm[i] * Q.col(j));
  return pts;
}

}  // namespace gsip
