// Homogeneous self-dual interior point method for block-diagonal SDPs.
//
// Internally the dual (y) side is written as the conic problem
//   min c'x  s.t.  Gx + s = h, Ex = e, s psd
// with x = y, G_i = A_i, h = C, c = -b and one row of E per free variable.
// Its conic dual variable z is the primal X of SdpProblem and the multipliers
// of E are the free variables w.

#include "gsip/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace gsip {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::PrimalInfeasible: return "primal_infeasible";
    case SdpStatus::DualInfeasible: return "dual_infeasible";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

int SdpProblem::add_block(int size) {
  blocks.push_back(size);
  cost.push_back(Eigen::MatrixXd::Zero(size, size));
  return int(blocks.size()) - 1;
}

void SdpProblem::validate() const {
  if (!cost.empty() && cost.size() != blocks.size()) throw std::invalid_argument("sdp: cost/blocks size mismatch");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b] <= 0) throw std::invalid_argument("sdp: block sizes must be positive");
    if (!cost.empty()) {
      const auto& C = cost[b];
      if (C.rows() != blocks[b] || C.cols() != blocks[b]) throw std::invalid_argument("sdp: cost block shape");
      if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + C.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("sdp: cost block not symmetric");
    }
  }
  for (const auto& con : constraints) {
    for (const auto& part : con.parts) {
      if (part.block < 0 || part.block >= int(blocks.size())) throw std::invalid_argument("sdp: bad block index");
      for (const auto& e : part.matrix) {
        if (e.row < 0 || e.col < e.row || e.col >= blocks[part.block])
          throw std::invalid_argument("sdp: entries must lie in the upper triangle of their block");
      }
    }
  }
  for (const auto& fv : free_vars)
    for (const auto& [i, a] : fv.coeffs)
      if (i < 0 || i >= num_constraints()) throw std::invalid_argument("sdp: free variable refers to bad constraint");
}

Eigen::MatrixXd dense(const SparseSym& s, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : s) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

double inner(const SparseSym& s, const Eigen::MatrixXd& m) {
  double r = 0.0;
  for (const auto& e : s) r += e.value * (e.row == e.col ? m(e.row, e.col) : m(e.row, e.col) + m(e.col, e.row));
  return r;
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Blocks = std::vector<Mat>;

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i].array() * b[i].array()).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

Blocks zeros_like(const std::vector<int>& sizes) {
  Blocks r;
  for (int n : sizes) r.push_back(Mat::Zero(n, n));
  return r;
}

void axpy(double a, const Blocks& x, Blocks& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

// Smallest eigenvalue of a symmetric matrix.
double min_eig(const Mat& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct BlockTerm {
  int var;
  // Both orientations of every off-diagonal entry, so the matrix is sum v e_r e_c'.
  std::vector<int> rows, cols;
  std::vector<double> vals;
  SparseSym upper;
};

struct Scaling {
  Mat R;    // W = R R'
  Mat Rti;  // R^{-T}; W^{-1} = Rti Rti'
  Vec lambda;
};

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& o) : prob_(p), opts_(o) {}
  SdpSolution run();

 private:
  struct Dir {
    Vec x, y;
    Blocks z, s;          // unscaled
    Blocks zt, st;        // scaled
    double tau = 0, kappa = 0;
  };

  void setup();
  Blocks G(const Vec& x) const;
  Vec GT(const Blocks& z) const;
  bool factor(const std::vector<Mat>& winv);
  void kkt_solve(const std::vector<Mat>& winv, const Vec& bx, const Vec& by, const Blocks& bz, Vec& dx, Vec& dy,
                 Blocks& dz) const;
  void kkt_solve_refined(const std::vector<Mat>& winv, const std::vector<Mat>& w, const Vec& bx, const Vec& by,
                         const Blocks& bz, Vec& dx, Vec& dy, Blocks& dz) const;
  double max_step(const Dir& d) const;
  SdpSolution finish_optimal(bool inaccurate);
  SdpSolution finish_conic_primal_infeasible();
  SdpSolution finish_conic_dual_infeasible();
  SdpSolution trivial_no_constraints();

  const SdpProblem& prob_;
  SdpOptions opts_;

  int m_ = 0;  // number of y variables
  std::vector<int> sizes_;
  std::vector<std::vector<BlockTerm>> terms_;  // per block
  Vec c_;
  Mat E_;  // reduced full-row-rank equality matrix
  Vec e_;
  std::vector<int> eq_rows_;  // which free variables survive reduction
  Mat eq_recover_;            // maps reduced multipliers back to all free variables
  Blocks h_;
  double resx0_ = 1, resy0_ = 1, resz0_ = 1;

  Eigen::LLT<Mat> kfac_;
  Eigen::LLT<Mat> sfac_;
  Mat kinv_et_;

  // iterate
  Vec x_, y_;
  Blocks s_, z_;
  double tau_ = 1, kappa_ = 1;
  std::vector<Scaling> sc_;
  int iters_ = 0;
  double pres_ = 0, dres_ = 0, gap_ = 0;
  bool inconsistent_eq_ = false;
  Vec inconsistent_ray_;
};

void Solver::setup() {
  prob_.validate();
  m_ = prob_.num_constraints();
  sizes_ = prob_.blocks;
  const int nb = int(sizes_.size());
  terms_.assign(nb, {});
  std::vector<std::vector<int>> pos(nb);
  for (int i = 0; i < m_; ++i) {
    for (const auto& part : prob_.constraints[i].parts) {
      auto& list = terms_[part.block];
      if (list.empty() || list.back().var != i) {
        list.push_back(BlockTerm{});
        list.back().var = i;
      }
      auto& t = list.back();
      for (const auto& en : part.matrix) {
        if (en.value == 0.0) continue;
        t.upper.push_back(en);
        t.rows.push_back(en.row);
        t.cols.push_back(en.col);
        t.vals.push_back(en.value);
        if (en.row != en.col) {
          t.rows.push_back(en.col);
          t.cols.push_back(en.row);
          t.vals.push_back(en.value);
        }
      }
    }
  }
  c_.resize(m_);
  for (int i = 0; i < m_; ++i) c_[i] = -prob_.constraints[i].rhs;
  h_ = zeros_like(sizes_);
  if (!prob_.cost.empty())
    for (int b = 0; b < nb; ++b) h_[b] = sym(prob_.cost[b]);

  // Equality rows, reduced to full row rank.
  const int p = int(prob_.free_vars.size());
  Mat Efull = Mat::Zero(p, m_);
  Vec efull(p);
  for (int j = 0; j < p; ++j) {
    for (const auto& [i, a] : prob_.free_vars[j].coeffs) Efull(j, i) += a;
    efull[j] = prob_.free_vars[j].cost;
  }
  if (p > 0) {
    Eigen::ColPivHouseholderQR<Mat> qr(Efull.transpose());
    qr.setThreshold(1e-11);
    int r = int(qr.rank());
    std::vector<int> perm(p);
    for (int j = 0; j < p; ++j) perm[j] = qr.colsPermutation().indices()[j];
    eq_rows_.assign(perm.begin(), perm.begin() + r);
    std::sort(eq_rows_.begin(), eq_rows_.end());
    E_.resize(r, m_);
    e_.resize(r);
    for (int k = 0; k < r; ++k) {
      E_.row(k) = Efull.row(eq_rows_[k]);
      e_[k] = efull[eq_rows_[k]];
    }
    // Every dropped row must be a combination of the kept ones with a matching rhs.
    eq_recover_ = Mat::Zero(p, r);
    for (int k = 0; k < r; ++k) eq_recover_(eq_rows_[k], k) = 1.0;
    if (r < p) {
      Mat Et = E_.transpose();
      Eigen::ColPivHouseholderQR<Mat> qk(Et);
      for (int j = 0; j < p; ++j) {
        if (std::find(eq_rows_.begin(), eq_rows_.end(), j) != eq_rows_.end()) continue;
        Vec coef = qk.solve(Vec(Efull.row(j).transpose()));
        double mismatch = efull[j] - coef.dot(e_);
        double scale = 1.0 + std::abs(efull[j]) + coef.cwiseAbs().dot(e_.cwiseAbs());
        if (std::abs(mismatch) > 1e-9 * scale && !inconsistent_eq_) {
          inconsistent_eq_ = true;
          // w = t (e_j - coef on kept rows): E'w = 0 and e'w = t * mismatch.
          inconsistent_ray_ = Vec::Zero(p);
          double t = mismatch > 0 ? -1.0 / mismatch : 1.0 / -mismatch;
          inconsistent_ray_[j] = t;
          for (int k = 0; k < r; ++k) inconsistent_ray_[eq_rows_[k]] -= t * coef[k];
        }
      }
    }
  } else {
    E_.resize(0, m_);
    e_.resize(0);
  }
  resx0_ = std::max(1.0, c_.norm());
  resy0_ = std::max(1.0, e_.norm());
  resz0_ = std::max(1.0, norm(h_));
}

Blocks Solver::G(const Vec& x) const {
  Blocks r = zeros_like(sizes_);
  for (std::size_t b = 0; b < sizes_.size(); ++b) {
    for (const auto& t : terms_[b]) {
      double xv = x[t.var];
      if (xv == 0.0) continue;
      for (std::size_t k = 0; k < t.vals.size(); ++k) r[b](t.rows[k], t.cols[k]) += xv * t.vals[k];
    }
  }
  return r;
}

Vec Solver::GT(const Blocks& z) const {
  Vec r = Vec::Zero(m_);
  for (std::size_t b = 0; b < sizes_.size(); ++b)
    for (const auto& t : terms_[b]) {
      double s = 0.0;
      for (std::size_t k = 0; k < t.vals.size(); ++k) s += t.vals[k] * z[b](t.rows[k], t.cols[k]);
      r[t.var] += s;
    }
  return r;
}

// Forms H = [<G_i, Winv G_j Winv>] and factors H + E'E and the equality Schur complement.
bool Solver::factor(const std::vector<Mat>& winv) {
  Mat H = Mat::Zero(m_, m_);
  for (std::size_t b = 0; b < sizes_.size(); ++b) {
    const auto& list = terms_[b];
    const Mat& Wi = winv[b];
    const int n = sizes_[b];
    if (n == 1) {
      double w2 = Wi(0, 0) * Wi(0, 0);
      for (std::size_t a = 0; a < list.size(); ++a) {
        double va = 0;
        for (double v : list[a].vals) va += v;
        for (std::size_t c = a; c < list.size(); ++c) {
          double vc = 0;
          for (double v : list[c].vals) vc += v;
          H(list[c].var, list[a].var) += w2 * va * vc;
        }
      }
      continue;
    }
    // Y = Wi A_a Wi from the upper entries only: U V' + V U', with diagonal entries halved.
    Mat U, V, Y;
    for (std::size_t a = 0; a < list.size(); ++a) {
      const auto& t = list[a];
      const int K = int(t.upper.size());
      U.resize(n, K);
      V.resize(n, K);
      for (int k = 0; k < K; ++k) {
        const auto& en = t.upper[k];
        U.col(k) = Wi.col(en.row) * (en.row == en.col ? 0.5 * en.value : en.value);
        V.col(k) = Wi.col(en.col);
      }
      Y.noalias() = U * V.transpose();
      Y += Y.transpose().eval();
      for (std::size_t c = a; c < list.size(); ++c) {
        const auto& tc = list[c];
        double s = 0.0;
        for (const auto& en : tc.upper) s += (en.row == en.col ? en.value : 2.0 * en.value) * Y(en.row, en.col);
        H(tc.var, t.var) += s;
      }
    }
  }
  // Only the lower triangle of H is filled (terms are listed by increasing variable); LLT reads no more.
  Mat& K = H;
  if (E_.rows() > 0) K.noalias() += E_.transpose() * E_;
  double diag_max = m_ > 0 ? K.diagonal().cwiseAbs().maxCoeff() : 1.0;
  double reg = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Mat Kr = K;
    if (reg > 0) Kr.diagonal().array() += reg;
    kfac_.compute(Kr);
    if (kfac_.info() == Eigen::Success) break;
    reg = reg == 0.0 ? 1e-13 * std::max(diag_max, 1e-300) : reg * 100.0;
    if (attempt == 11) return false;
  }
  if (E_.rows() > 0) {
    kinv_et_ = kfac_.solve(Mat(E_.transpose()));
    Mat S = E_ * kinv_et_;
    sfac_.compute(S);
    if (sfac_.info() != Eigen::Success) {
      S.diagonal().array() += 1e-13 * std::max(1.0, S.diagonal().cwiseAbs().maxCoeff());
      sfac_.compute(S);
      if (sfac_.info() != Eigen::Success) return false;
    }
  }
  return true;
}

// Solves  E'dy + G'dz = bx,  E dx = by,  G dx - W dz W = bz.
void Solver::kkt_solve(const std::vector<Mat>& winv, const Vec& bx, const Vec& by, const Blocks& bz, Vec& dx,
                       Vec& dy, Blocks& dz) const {
  Blocks t(bz.size());
  for (std::size_t b = 0; b < bz.size(); ++b) t[b] = winv[b] * bz[b] * winv[b];
  Vec rhs = bx + GT(t);
  if (E_.rows() > 0) {
    Vec r2 = rhs + E_.transpose() * by;
    Vec kr = kfac_.solve(r2);
    dy = sfac_.solve(E_ * kr - by);
    dx = kr - kinv_et_ * dy;
  } else {
    dy.resize(0);
    dx = kfac_.solve(rhs);
  }
  Blocks gdx = G(dx);
  dz.resize(bz.size());
  for (std::size_t b = 0; b < bz.size(); ++b) dz[b] = sym(winv[b] * (gdx[b] - bz[b]) * winv[b]);
}

void Solver::kkt_solve_refined(const std::vector<Mat>& winv, const std::vector<Mat>& w, const Vec& bx,
                               const Vec& by, const Blocks& bz, Vec& dx, Vec& dy, Blocks& dz) const {
  kkt_solve(winv, bx, by, bz, dx, dy, dz);
  // One step of iterative refinement on the full system.
  Vec rx = bx - GT(dz);
  if (E_.rows() > 0) rx -= E_.transpose() * dy;
  Vec ry = by - (E_.rows() > 0 ? Vec(E_ * dx) : Vec(0));
  Blocks gdx = G(dx);
  Blocks rz(bz.size());
  for (std::size_t b = 0; b < bz.size(); ++b) rz[b] = bz[b] - (gdx[b] - w[b] * dz[b] * w[b]);
  Vec ex, ey;
  Blocks ez;
  kkt_solve(winv, rx, ry, rz, ex, ey, ez);
  dx += ex;
  if (dy.size() > 0) dy += ey;
  axpy(1.0, ez, dz);
}

double Solver::max_step(const Dir& d) const {
  double amax = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < sizes_.size(); ++b) {
    Vec isq = sc_[b].lambda.cwiseSqrt().cwiseInverse();
    for (const Mat* D : {&d.st[b], &d.zt[b]}) {
      Mat M = isq.asDiagonal() * (*D) * isq.asDiagonal();
      double me = min_eig(sym(M));
      if (me < 0) amax = std::min(amax, -1.0 / me);
    }
  }
  if (d.tau < 0) amax = std::min(amax, -tau_ / d.tau);
  if (d.kappa < 0) amax = std::min(amax, -kappa_ / d.kappa);
  return amax;
}

SdpSolution Solver::trivial_no_constraints() {
  SdpSolution sol;
  sol.iterations = 0;
  sol.y = Vec(0);
  sol.w = Vec::Zero(prob_.free_vars.size());
  // With no constraints: min <C,X> + c_w'w over X psd, w free.
  bool unbounded = false;
  for (const auto& fv : prob_.free_vars)
    if (fv.cost != 0.0) unbounded = true;
  int bad_block = -1;
  Vec bad_vec;
  for (std::size_t b = 0; b < sizes_.size() && !unbounded; ++b) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h_[b]);
    if (es.eigenvalues()(0) < -opts_.feas_tol) {
      bad_block = int(b);
      bad_vec = es.eigenvectors().col(0);
      break;
    }
  }
  if (unbounded || bad_block >= 0) {
    sol.status = SdpStatus::DualInfeasible;
    sol.cert_X = zeros_like(sizes_);
    sol.cert_w = Vec::Zero(prob_.free_vars.size());
    if (bad_block >= 0) {
      Mat X = bad_vec * bad_vec.transpose();
      double v = (h_[bad_block].array() * X.array()).sum();
      sol.cert_X[bad_block] = X / -v;
    } else {
      for (std::size_t j = 0; j < prob_.free_vars.size(); ++j)
        if (prob_.free_vars[j].cost != 0.0) {
          sol.cert_w[j] = -1.0 / prob_.free_vars[j].cost;
          break;
        }
    }
    sol.certificate_verified = true;
    return sol;
  }
  sol.status = SdpStatus::Optimal;
  sol.X = zeros_like(sizes_);
  sol.S = h_;
  return sol;
}

SdpSolution Solver::finish_optimal(bool inaccurate) {
  SdpSolution sol;
  sol.status = SdpStatus::Optimal;
  sol.inaccurate = inaccurate;
  sol.iterations = iters_;
  sol.y = x_ / tau_;
  sol.X.resize(sizes_.size());
  sol.S.resize(sizes_.size());
  for (std::size_t b = 0; b < sizes_.size(); ++b) {
    sol.X[b] = sym(z_[b]) / tau_;
    sol.S[b] = sym(s_[b]) / tau_;
  }
  Vec wr = y_ / tau_;
  sol.w = eq_recover_.size() > 0 ? Vec(eq_recover_ * wr) : Vec::Zero(prob_.free_vars.size());
  sol.primal_value = dot(h_, sol.X) + (e_.size() > 0 ? e_.dot(wr) : 0.0);
  sol.dual_value = -c_.dot(sol.y);
  sol.gap = std::abs(sol.primal_value - sol.dual_value);
  sol.primal_residual = pres_;
  sol.dual_residual = dres_;
  return sol;
}

// Conic primal infeasible: the y-problem has no solution; the ray lives on the X side.
SdpSolution Solver::finish_conic_primal_infeasible() {
  SdpSolution sol;
  sol.status = SdpStatus::DualInfeasible;
  sol.iterations = iters_;
  double scale = -(dot(h_, z_) + (e_.size() > 0 ? e_.dot(y_) : 0.0));
  sol.cert_X.resize(sizes_.size());
  for (std::size_t b = 0; b < sizes_.size(); ++b) sol.cert_X[b] = sym(z_[b]) / scale;
  Vec wr = y_ / scale;
  sol.cert_w = eq_recover_.size() > 0 ? Vec(eq_recover_ * wr) : Vec::Zero(prob_.free_vars.size());
  // Verify: X psd, <A_i,X> + a_i'w = 0.
  Vec r = GT(sol.cert_X);
  if (E_.rows() > 0) r += E_.transpose() * wr;
  double psd = 0.0;
  for (const auto& X : sol.cert_X) psd = std::min(psd, min_eig(X));
  sol.certificate_error = std::max(r.cwiseAbs().maxCoeff() / resx0_, -psd);
  if (m_ == 0) sol.certificate_error = -psd;
  sol.certificate_verified = sol.certificate_error <= opts_.cert_tol;
  return sol;
}

// Conic dual infeasible: the X-problem is infeasible; the ray is a y with b'y > 0.
SdpSolution Solver::finish_conic_dual_infeasible() {
  SdpSolution sol;
  sol.status = SdpStatus::PrimalInfeasible;
  sol.iterations = iters_;
  double scale = -c_.dot(x_);
  sol.cert_y = x_ / scale;
  Blocks gx = G(sol.cert_y);
  double worst = 0.0;
  for (const auto& M : gx)
    if (M.size() > 0) worst = std::max(worst, -min_eig(-M));
  if (E_.rows() > 0) worst = std::max(worst, (E_ * sol.cert_y).cwiseAbs().maxCoeff());
  sol.certificate_error = worst;
  sol.certificate_verified = worst <= opts_.cert_tol;
  return sol;
}

SdpSolution Solver::run() {
  setup();
  if (inconsistent_eq_) {
    SdpSolution sol;
    sol.status = SdpStatus::DualInfeasible;
    sol.cert_X = zeros_like(sizes_);
    sol.cert_w = inconsistent_ray_;
    sol.certificate_verified = true;
    return sol;
  }
  if (m_ == 0) return trivial_no_constraints();

  const int nb = int(sizes_.size());
  int total_dim = 0;
  for (int n : sizes_) total_dim += n;

  // Starting point from two least-squares problems with W = I.
  std::vector<Mat> ident(nb);
  for (int b = 0; b < nb; ++b) ident[b] = Mat::Identity(sizes_[b], sizes_[b]);
  if (!factor(ident)) return SdpSolution{};
  {
    Vec dx, dy;
    Blocks dz;
    kkt_solve(ident, Vec::Zero(m_), e_, h_, dx, dy, dz);
    x_ = dx;
    s_.resize(nb);
    for (int b = 0; b < nb; ++b) s_[b] = -dz[b];
    kkt_solve(ident, -c_, Vec::Zero(e_.size()), zeros_like(sizes_), dx, dy, dz);
    y_ = dy;
    z_ = dz;
    auto shift = [&](Blocks& v) {
      double ts = -std::numeric_limits<double>::infinity();
      for (const auto& M : v) ts = std::max(ts, -min_eig(M));
      double nrm = norm(v);
      if (ts >= -1e-8 * std::max(nrm, 1.0))
        for (int b = 0; b < nb; ++b) v[b].diagonal().array() += 1.0 + ts;
    };
    shift(s_);
    shift(z_);
  }
  tau_ = 1.0;
  kappa_ = 1.0;

  // Initial scaling from the Cholesky factors.
  sc_.assign(nb, {});
  auto scaling_from = [&](const Mat& S, const Mat& Z, const Mat* Rprev, const Mat* Rtiprev, Scaling& out) -> bool {
    Eigen::LLT<Mat> ls(S), lz(Z);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    Mat Ls = ls.matrixL(), Lz = lz.matrixL();
    Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec lam = svd.singularValues();
    if (lam.minCoeff() <= 0) return false;
    Vec isq = lam.cwiseSqrt().cwiseInverse();
    Mat R = Ls * svd.matrixV() * isq.asDiagonal();
    Mat Rti = Lz * svd.matrixU() * isq.asDiagonal();
    if (Rprev) {
      R = (*Rprev) * R;
      Rti = (*Rtiprev) * Rti;
    }
    out.R = R;
    out.Rti = Rti;
    out.lambda = lam;
    return true;
  };
  for (int b = 0; b < nb; ++b)
    if (!scaling_from(sym(s_[b]), sym(z_[b]), nullptr, nullptr, sc_[b])) return SdpSolution{};

  const double feastol = opts_.feas_tol;
  double best_loose_metric = std::numeric_limits<double>::infinity();
  bool have_loose = false;
  Vec lx, ly;
  Blocks ls_, lz_;
  double ltau = 1, lkappa = 1, lpres = 0, ldres = 0;

  for (iters_ = 0; iters_ <= opts_.max_iter; ++iters_) {
    // Residuals.
    Blocks gx = G(x_);
    Vec rx = GT(z_) + c_ * tau_;
    if (E_.rows() > 0) rx += E_.transpose() * y_;
    Vec ry = e_ * tau_ - (E_.rows() > 0 ? Vec(E_ * x_) : Vec(0));
    Blocks rz(nb);
    for (int b = 0; b < nb; ++b) rz[b] = s_[b] + gx[b] - h_[b] * tau_;
    double cx = c_.dot(x_);
    double by = e_.size() > 0 ? e_.dot(y_) : 0.0;
    double hz = dot(h_, z_);
    double rt = kappa_ + cx + by + hz;

    double sz = 0.0;
    for (int b = 0; b < nb; ++b) sz += sc_[b].lambda.squaredNorm();
    double mu = (sz + tau_ * kappa_) / (total_dim + 1);

    double pcost = cx / tau_;
    double dcost = -(hz + by) / tau_;
    pres_ = std::max(ry.size() > 0 ? ry.norm() / resy0_ : 0.0, norm(rz) / resz0_) / tau_;
    dres_ = rx.norm() / resx0_ / tau_;
    gap_ = sz / (tau_ * tau_);
    double relgap = std::abs(pcost - dcost) / (1.0 + std::min(std::abs(pcost), std::abs(dcost)));
    double gaprel2 = gap_ / (1.0 + std::min(std::abs(pcost), std::abs(dcost)));

    if (opts_.verbose)
      std::cerr << std::scientific << std::setprecision(3) << "it " << iters_ << " pcost " << pcost << " dcost "
                << dcost << " gap " << gap_ << " pres " << pres_ << " dres " << dres_ << " tau " << tau_
                << " kappa " << kappa_ << "\n";

    if (pres_ <= feastol && dres_ <= feastol && (relgap <= opts_.gap_tol || gaprel2 <= opts_.gap_tol))
      return finish_optimal(false);

    // Remember the best point that meets the loose tolerances.
    double loose_metric = std::max({pres_, dres_, std::min(relgap, gaprel2)});
    if (loose_metric <= opts_.loose_tol && loose_metric < best_loose_metric) {
      best_loose_metric = loose_metric;
      have_loose = true;
      lx = x_;
      ly = y_;
      ls_ = s_;
      lz_ = z_;
      ltau = tau_;
      lkappa = kappa_;
      lpres = pres_;
      ldres = dres_;
    }

    // Infeasibility.
    if (hz + by < 0) {
      Vec r = GT(z_);
      if (E_.rows() > 0) r += E_.transpose() * y_;
      double pinfres = r.norm() / resx0_ / (-(hz + by));
      if (pinfres <= feastol) return finish_conic_primal_infeasible();
    }
    if (cx < 0) {
      double a = E_.rows() > 0 ? (E_ * x_).norm() / resy0_ : 0.0;
      Blocks t = gx;
      axpy(1.0, s_, t);
      double dinfres = std::max(a, norm(t) / resz0_) / (-cx);
      if (dinfres <= feastol) return finish_conic_dual_infeasible();
    }
    if (iters_ == opts_.max_iter) break;

    std::vector<Mat> winv(nb), w(nb);
    for (int b = 0; b < nb; ++b) {
      winv[b] = sc_[b].Rti * sc_[b].Rti.transpose();
      w[b] = sc_[b].R * sc_[b].R.transpose();
    }
    if (!factor(winv)) break;

    Vec x1, y1;
    Blocks z1;
    kkt_solve_refined(winv, w, -c_, e_, h_, x1, y1, z1);
    const double denom1 = c_.dot(x1) + (e_.size() > 0 ? e_.dot(y1) : 0.0) + dot(h_, z1) - kappa_ / tau_;

    auto direction = [&](double eta, const Blocks& Ds, double dk) {
      Dir d;
      Blocks T(nb), Q(nb);
      for (int b = 0; b < nb; ++b) {
        const Vec& lam = sc_[b].lambda;
        const int n = sizes_[b];
        Q[b].resize(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) Q[b](i, j) = 2.0 * Ds[b](i, j) / (lam[i] + lam[j]);
        T[b] = sc_[b].R * Q[b] * sc_[b].R.transpose();
      }
      Vec r1 = -(1.0 - eta) * rx;
      Vec r2 = -(1.0 - eta) * ry;
      Blocks r3(nb);
      for (int b = 0; b < nb; ++b) r3[b] = -(1.0 - eta) * rz[b] - T[b];
      double r4 = -(1.0 - eta) * rt;
      Vec x0, y0;
      Blocks z0;
      kkt_solve_refined(winv, w, r1, -r2, r3, x0, y0, z0);
      double num = r4 - dk / tau_ - (c_.dot(x0) + (e_.size() > 0 ? e_.dot(y0) : 0.0) + dot(h_, z0));
      d.tau = num / denom1;
      d.x = x0 + d.tau * x1;
      d.y = y0.size() > 0 ? Vec(y0 + d.tau * y1) : Vec(0);
      d.z = z0;
      axpy(d.tau, z1, d.z);
      d.kappa = (dk - kappa_ * d.tau) / tau_;
      d.zt.resize(nb);
      d.st.resize(nb);
      d.s.resize(nb);
      // ds from the primal linearization directly; going through W dz W loses
      // accuracy once W is badly conditioned.
      Blocks gdx = G(d.x);
      for (int b = 0; b < nb; ++b) {
        d.zt[b] = sym(sc_[b].R.transpose() * d.z[b] * sc_[b].R);
        d.s[b] = sym(Mat(-(1.0 - eta) * rz[b] - gdx[b] + d.tau * h_[b]));
        d.st[b] = sym(sc_[b].Rti.transpose() * d.s[b] * sc_[b].Rti);
      }
      return d;
    };

    // Predictor.
    Blocks Ds(nb);
    for (int b = 0; b < nb; ++b) Ds[b] = Mat(Vec(-sc_[b].lambda.array().square()).asDiagonal());
    Dir da = direction(0.0, Ds, -tau_ * kappa_);
    double aa = std::min(1.0, max_step(da));
    double sigma = std::pow(1.0 - aa, 3);

    // Corrector.
    for (int b = 0; b < nb; ++b) {
      Mat prod = da.st[b] * da.zt[b];
      Ds[b] = Mat(Vec(-sc_[b].lambda.array().square()).asDiagonal()) - 0.5 * (prod + prod.transpose());
      Ds[b].diagonal().array() += sigma * mu;
    }
    double dk = -tau_ * kappa_ - da.tau * da.kappa + sigma * mu;
    Dir d = direction(sigma, Ds, dk);
    double alpha = std::min(1.0, 0.99 * max_step(d));
    if (!(alpha > 1e-14)) break;

    // Update iterate and scaling; scaled iterates are lambda + alpha * d.
    bool ok = true;
    std::vector<Scaling> nsc(nb);
    for (int b = 0; b < nb; ++b) {
      Mat st = Mat(sc_[b].lambda.asDiagonal()) + alpha * d.st[b];
      Mat zt = Mat(sc_[b].lambda.asDiagonal()) + alpha * d.zt[b];
      if (!scaling_from(sym(st), sym(zt), &sc_[b].R, &sc_[b].Rti, nsc[b])) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    sc_ = std::move(nsc);
    x_ += alpha * d.x;
    if (y_.size() > 0) y_ += alpha * d.y;
    // s and z are rebuilt from the scaling so they stay inside the cone; additive
    // updates drift out of it over long runs.
    for (int b = 0; b < nb; ++b) {
      const Scaling& sc = sc_[b];
      s_[b] = sym(Mat(sc.R * sc.lambda.asDiagonal() * sc.R.transpose()));
      z_[b] = sym(Mat(sc.Rti * sc.lambda.asDiagonal() * sc.Rti.transpose()));
    }
    tau_ += alpha * d.tau;
    kappa_ += alpha * d.kappa;
  }

  if (have_loose) {
    x_ = lx;
    y_ = ly;
    s_ = ls_;
    z_ = lz_;
    tau_ = ltau;
    kappa_ = lkappa;
    pres_ = lpres;
    dres_ = ldres;
    return finish_optimal(true);
  }
  // Weak infeasibility evidence is still reported as failure.
  SdpSolution sol;
  sol.status = SdpStatus::NumericalFailure;
  sol.iterations = iters_;
  sol.primal_residual = pres_;
  sol.dual_residual = dres_;
  return sol;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts) {
  Solver s(prob, opts);
  return s.run();
}

FeasibilityResult feasibility_sdp(const SdpProblem& prob, FeasibilitySide side, const SdpOptions& opts) {
  SdpProblem p = prob;
  if (side == FeasibilitySide::Primal) {
    for (auto& C : p.cost) C.setZero();
    for (auto& fv : p.free_vars) fv.cost = 0.0;
  } else {
    for (auto& con : p.constraints) con.rhs = 0.0;
  }
  FeasibilityResult r;
  r.solution = solve_sdp(p, opts);
  const SdpStatus bad = side == FeasibilitySide::Primal ? SdpStatus::PrimalInfeasible : SdpStatus::DualInfeasible;
  if (r.solution.status == SdpStatus::Optimal) {
    r.feasible = true;
  } else if (r.solution.status == bad) {
    r.feasible = false;
    r.certified = r.solution.certificate_verified;
  } else {
    r.feasible = false;
  }
  return r;
}

void write_sdpa(const SdpProblem& prob, std::ostream& os) {
  prob.validate();
  const int m = prob.num_constraints();
  const int nfree = int(prob.free_vars.size());
  const int nblocks = int(prob.blocks.size()) + (nfree > 0 ? 1 : 0);
  os << std::setprecision(17);
  os << "* dual of the standard-form SDP: min -b'y s.t. sum y_i F_i - F_0 psd\n";
  os << m << "\n" << nblocks << "\n";
  for (int n : prob.blocks) os << n << " ";
  if (nfree > 0) os << -2 * nfree;
  os << "\n";
  for (int i = 0; i < m; ++i) os << (i ? " " : "") << -prob.constraints[i].rhs;
  os << "\n";
  // F_0 = -C
  for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
    if (prob.cost.empty()) break;
    const auto& C = prob.cost[b];
    for (int r = 0; r < C.rows(); ++r)
      for (int c = r; c < C.cols(); ++c)
        if (C(r, c) != 0.0) os << 0 << " " << b + 1 << " " << r + 1 << " " << c + 1 << " " << -C(r, c) << "\n";
  }
  const int lp_block = int(prob.blocks.size()) + 1;
  for (int j = 0; j < nfree; ++j) {
    double cw = prob.free_vars[j].cost;
    if (cw != 0.0) {
      os << 0 << " " << lp_block << " " << 2 * j + 1 << " " << 2 * j + 1 << " " << cw << "\n";
      os << 0 << " " << lp_block << " " << 2 * j + 2 << " " << 2 * j + 2 << " " << -cw << "\n";
    }
  }
  std::vector<std::vector<std::pair<int, double>>> lp(m);
  for (int j = 0; j < nfree; ++j)
    for (const auto& [i, a] : prob.free_vars[j].coeffs) lp[i].push_back({j, a});
  for (int i = 0; i < m; ++i) {
    for (const auto& part : prob.constraints[i].parts) {
      Eigen::MatrixXd M = dense(part.matrix, prob.blocks[part.block]);
      for (int r = 0; r < M.rows(); ++r)
        for (int c = r; c < M.cols(); ++c)
          if (M(r, c) != 0.0)
            os << i + 1 << " " << part.block + 1 << " " << r + 1 << " " << c + 1 << " " << -M(r, c) << "\n";
    }
    for (const auto& [j, a] : lp[i]) {
      os << i + 1 << " " << lp_block << " " << 2 * j + 1 << " " << 2 * j + 1 << " " << a << "\n";
      os << i + 1 << " " << lp_block << " " << 2 * j + 2 << " " << 2 * j + 2 << " " << -a << "\n";
    }
  }
}

}  // namespace gsip
