#include "gsip/polynomial.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gsip {

int total_degree(const Exponent& a) {
  int d = 0;
  for (int v : a) d += v;
  return d;
}

bool GradedLess::operator()(const Exponent& a, const Exponent& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

namespace {

// Exponents of exactly degree d over variables [pos, n), larger leading powers first.
void fill_degree(int n, int pos, int remaining, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[pos] = a;
    fill_degree(n, pos + 1, remaining - a, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<Exponent> monomial_basis(int nvars, int degree) {
  std::vector<Exponent> out;
  if (nvars == 0) {
    out.emplace_back();
    return out;
  }
  out.reserve(basis_size(nvars, degree));
  Exponent cur(nvars, 0);
  for (int d = 0; d <= degree; ++d) fill_degree(nvars, 0, d, cur, out);
  return out;
}

std::size_t basis_size(int nvars, int degree) {
  if (degree < 0) return 0;
  // C(nvars+degree, degree) computed incrementally; exact for the sizes used here.
  std::size_t r = 1;
  for (int i = 1; i <= degree; ++i) r = r * std::size_t(nvars + i) / std::size_t(i);
  return r;
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw std::out_of_range("variable index out of range");
  Polynomial p(nvars);
  Exponent e(nvars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::monomial(const Exponent& e, double c) {
  Polynomial p(int(e.size()));
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  // The map is graded, so the last key has maximal degree.
  return total_degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

double Polynomial::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (int(e.size()) != nvars_) throw std::invalid_argument("exponent length does not match nvars");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(const Eigen::VectorXd& point) const {
  if (point.size() != nvars_) throw std::invalid_argument("eval: point dimension mismatch");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    }
    s += t;
  }
  return s;
}

double Polynomial::eval(const std::vector<double>& point) const {
  return eval(Eigen::Map<const Eigen::VectorXd>(point.data(), Eigen::Index(point.size())));
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial d(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    d.add_term(f, c * e[var]);
  }
  return d;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  Polynomial result = constant(nvars_, 1.0);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) p.terms_.emplace_hint(p.terms_.end(), e, c);
  return p;
}

Polynomial Polynomial::embed(int new_nvars, const std::vector<int>& var_map) const {
  if (int(var_map.size()) != nvars_) throw std::invalid_argument("embed: map size mismatch");
  Polynomial p(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponent f(new_nvars, 0);
    for (int i = 0; i < nvars_; ++i) f[var_map[i]] += e[i];
    p.add_term(f, c);
  }
  return p;
}

Polynomial Polynomial::extend(int new_nvars) const {
  std::vector<int> m(nvars_);
  for (int i = 0; i < nvars_; ++i) m[i] = i;
  return embed(new_nvars, m);
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& repl) const {
  if (int(repl.size()) != nvars_) throw std::invalid_argument("compose: replacement count mismatch");
  int m = repl.empty() ? 0 : repl[0].nvars();
  for (const auto& r : repl)
    if (r.nvars() != m) throw std::invalid_argument("compose: replacements differ in nvars");
  // Cache powers of each replacement.
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    powers[i].push_back(constant(m, 1.0));
    for (int k = 1; k <= degree_in(i); ++k) powers[i].push_back(powers[i].back() * repl[i]);
  }
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(m, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) t = t * powers[i][e[i]];
    out += t;
  }
  return out.pruned(kDropTol);
}

bool Polynomial::is_affine_in(int first, int count) const {
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int i = first; i < first + count; ++i) d += e[i];
    if (d > 1) return false;
  }
  return true;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("nvars mismatch in addition");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("nvars mismatch in subtraction");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("nvars mismatch in product");
  Polynomial p(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = p.terms_.emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  for (auto it = p.terms_.begin(); it != p.terms_.end();) {
    if (std::abs(it->second) < Polynomial::kDropTol)
      it = p.terms_.erase(it);
    else
      ++it;
  }
  return p;
}

Polynomial operator+(Polynomial a, double c) {
  a.add_term(Exponent(a.nvars_, 0), c);
  return a;
}

bool Polynomial::operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os << std::setprecision(17);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    double v = c;
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    v = std::abs(v);
    bool is_const = total_degree(e) == 0;
    if (is_const || v != 1.0) {
      os << v;
      if (!is_const) os << "*";
    }
    bool first_factor = true;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!first_factor) os << "*";
      first_factor = false;
      if (i < int(names.size()))
        os << names[i];
      else
        os << "v" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
    first = false;
  }
  return os.str();
}

Eigen::MatrixXd PolyMatrix::eval(const Eigen::VectorXd& point) const {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).eval(point);
  return m;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("PolyMatrix shape mismatch");
  int nv = data.empty() ? 0 : data[0].nvars();
  PolyMatrix r(rows, o.cols, nv);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < o.cols; ++j)
      for (int k = 0; k < cols; ++k) r(i, j) += (*this)(i, k) * o(k, j);
  return r;
}

PolyVector gradient(const Polynomial& p, Block block, int nx) {
  int first = block == Block::X ? 0 : nx;
  int last = block == Block::X ? nx : p.nvars();
  if (nx < 0 || nx > p.nvars()) throw std::invalid_argument("gradient: bad block split");
  PolyVector g;
  for (int i = first; i < last; ++i) g.push_back(p.derivative(i));
  return g;
}

Polynomial substitute(const Polynomial& p, int nx, const PolyVector& q) {
  int nu = p.nvars() - nx;
  if (int(q.size()) != nu) throw std::invalid_argument("substitute: expected one polynomial per u-variable");
  std::vector<Polynomial> repl;
  for (int i = 0; i < nx; ++i) repl.push_back(Polynomial::variable(nx, i));
  for (const auto& qi : q) {
    if (qi.nvars() != nx) throw std::invalid_argument("substitute: q must be a polynomial in x");
    repl.push_back(qi);
  }
  return p.compose(repl);
}

Polynomial taylor_poly(TaylorKind kind, int degree) {
  if (degree < 0) throw std::invalid_argument("taylor degree must be nonnegative");
  Polynomial p(1);
  double fact = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) fact *= k;
    double c = 0.0;
    switch (kind) {
      case TaylorKind::Exp: c = 1.0; break;
      case TaylorKind::Sin: c = (k % 2 == 1) ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) : 0.0; break;
      case TaylorKind::Cos: c = (k % 2 == 0) ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) : 0.0; break;
    }
    if (c != 0.0) p.add_term(Exponent{k}, c / fact);
  }
  return p;
}

Eigen::VectorXd eval(const PolyVector& v, const Eigen::VectorXd& point) {
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[Eigen::Index(i)] = v[i].eval(point);
  return r;
}

}  // namespace gsip
