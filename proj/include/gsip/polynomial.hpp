#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace gsip {

// Exponent vector; one entry per variable.
using Exponent = std::vector<int>;

int total_degree(const Exponent& a);

// Graded order: total degree first, then lexicographic with x1 > x2 > ...
// (so within a degree, x1^2 precedes x1*x2 precedes x2^2).
struct GradedLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// All exponents with total degree <= degree, in graded order.
std::vector<Exponent> monomial_basis(int nvars, int degree);

// Number of exponents of total degree <= degree, i.e. C(nvars+degree, degree).
std::size_t basis_size(int nvars, int degree);

class Polynomial {
 public:
  using TermMap = std::map<Exponent, double, GradedLess>;

  // Coefficients smaller than this are dropped after products.
  static constexpr double kDropTol = 1e-14;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(const Exponent& e, double c = 1.0);

  int nvars() const { return nvars_; }
  // Maximum total degree of any term; -1 for the zero polynomial.
  int degree() const;
  // Maximum exponent of variable `var` in any term.
  int degree_in(int var) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }
  double coeff(const Exponent& e) const;
  double max_abs_coeff() const;

  void add_term(const Exponent& e, double c);

  double eval(const Eigen::VectorXd& point) const;
  double eval(const std::vector<double>& point) const;

  Polynomial derivative(int var) const;
  Polynomial pow(int k) const;
  // Drop terms with |c| <= tol.
  Polynomial pruned(double tol) const;

  // Variables of this polynomial become variables var_map[i] of a polynomial in new_nvars.
  Polynomial embed(int new_nvars, const std::vector<int>& var_map) const;
  // Embed into a larger space keeping positions 0..nvars-1.
  Polynomial extend(int new_nvars) const;

  // Replace variable i by repl[i] (all repl share nvars).
  Polynomial compose(const std::vector<Polynomial>& repl) const;

  // True when no term has degree > 1 in variables [first, first+count).
  bool is_affine_in(int first, int count) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator+(Polynomial a, double c);
  friend Polynomial operator-(Polynomial a, double c) { return a + (-c); }
  friend Polynomial operator+(double c, Polynomial a) { return a + c; }
  friend Polynomial operator-(double c, const Polynomial& a) { return -a + c; }

  bool operator==(const Polynomial& o) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  int nvars_ = 0;
  TermMap terms_;
};

using PolyVector = std::vector<Polynomial>;

struct PolyMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Polynomial> data;  // row-major

  PolyMatrix() = default;
  PolyMatrix(int r, int c, int nvars) : rows(r), cols(c), data(std::size_t(r) * c, Polynomial(nvars)) {}

  Polynomial& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  const Polynomial& operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }

  Eigen::MatrixXd eval(const Eigen::VectorXd& point) const;
  PolyMatrix operator*(const PolyMatrix& o) const;
};

enum class Block { X, U };

// Partial derivatives w.r.t. the x-block (variables 0..nx-1) or the u-block (nx..nvars-1).
PolyVector gradient(const Polynomial& p, Block block, int nx);

// p is over (x, u) with nx leading x-variables; each u_i is replaced by q[i] (polynomials in x).
Polynomial substitute(const Polynomial& p, int nx, const PolyVector& q);

enum class TaylorKind { Sin, Cos, Exp };

// Maclaurin polynomial in one variable truncated at the given degree.
Polynomial taylor_poly(TaylorKind kind, int degree);

Eigen::VectorXd eval(const PolyVector& v, const Eigen::VectorXd& point);

}  // namespace gsip
