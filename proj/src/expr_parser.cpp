#include "gsip/expr_parser.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace gsip {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

bool is_constant(const Polynomial& p) { return p.degree() <= 0; }

double constant_value(const Polynomial& p) { return p.is_zero() ? 0.0 : p.coeff(Exponent(p.nvars(), 0)); }

Rational make(const Polynomial& p) { return {p, Polynomial::constant(p.nvars(), 1.0)}; }

Rational add(const Rational& a, const Rational& b, double sign) {
  if (a.den == b.den) return {a.num + sign * b.num, a.den};
  return {a.num * b.den + sign * (b.num * a.den), a.den * b.den};
}

Rational mul(const Rational& a, const Rational& b) {
  Rational r{a.num * b.num, a.den * b.den};
  if (is_constant(r.den)) {
    r.num = r.num * (1.0 / constant_value(r.den));
    r.den = Polynomial::constant(r.num.nvars(), 1.0);
  }
  return r;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names, int line, int col0)
      : s_(text), names_(names), nv_(int(names.size())), line_(line), col0_(col0) {}

  Rational run() {
    Rational r = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + int(pos_)); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Rational expr() {
    Rational r = term();
    for (;;) {
      if (accept('+'))
        r = add(r, term(), 1.0);
      else if (accept('-'))
        r = add(r, term(), -1.0);
      else
        return r;
    }
  }

  Rational term() {
    Rational r = unary();
    for (;;) {
      if (accept('*')) {
        r = mul(r, unary());
      } else if (accept('/')) {
        Rational d = unary();
        if (d.num.is_zero()) fail("division by zero");
        r = mul(r, Rational{d.den, d.num});
      } else {
        return r;
      }
    }
  }

  Rational unary() {
    if (accept('-')) {
      Rational r = unary();
      r.num = -r.num;
      return r;
    }
    if (accept('+')) return unary();
    return power();
  }

  Rational power() {
    Rational base = atom();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    Rational e = unary();
    if (!e.is_polynomial() || !is_constant(e.num)) {
      pos_ = at;
      fail("exponent must be a constant");
    }
    double v = constant_value(e.num);
    if (v < 0 || v != std::floor(v) || v > 64) {
      pos_ = at;
      fail("exponent must be a nonnegative integer");
    }
    int k = int(v);
    return {base.num.pow(k), base.den.pow(k)};
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Rational number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += std::size_t(end - begin);
    return make(Polynomial::constant(nv_, v));
  }

  Rational atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Rational r = expr();
      expect(')');
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') fail(std::string("unexpected '") + c + "'");
    std::size_t at = pos_;
    std::string id = identifier();
    for (int i = 0; i < nv_; ++i)
      if (names_[i] == id) return make(Polynomial::variable(nv_, i));
    if (id == "pi") return make(Polynomial::constant(nv_, std::numbers::pi));
    if (id == "sqrt" || id == "sin" || id == "cos" || id == "exp") return function(id, at);
    pos_ = at;
    fail("unknown identifier '" + id + "'");
  }

  Rational function(const std::string& id, std::size_t at) {
    expect('(');
    Rational arg = expr();
    expect(')');
    if (!arg.is_polynomial()) {
      pos_ = at;
      fail(id + " of a rational expression");
    }
    Polynomial a = arg.polynomial();
    std::size_t save = pos_;
    skip();
    bool annotated = pos_ < s_.size() && s_[pos_] == ':';
    pos_ = save;
    if (is_constant(a) && !annotated) {
      double v = constant_value(a);
      double r = 0.0;
      if (id == "sqrt") {
        if (v < 0) {
          pos_ = at;
          fail("sqrt of a negative constant");
        }
        r = std::sqrt(v);
      } else if (id == "sin") {
        r = std::sin(v);
      } else if (id == "cos") {
        r = std::cos(v);
      } else {
        r = std::exp(v);
      }
      return make(Polynomial::constant(nv_, r));
    }
    if (id == "sqrt") {
      pos_ = at;
      fail("sqrt of a non-constant expression");
    }
    if (!annotated) {
      pos_ = at;
      fail(id + " of a non-constant expression needs a :taylor(d) annotation");
    }
    expect(':');
    skip();
    std::size_t kw = pos_;
    if (identifier() != "taylor") {
      pos_ = kw;
      fail("expected taylor");
    }
    expect('(');
    skip();
    std::size_t dpos = pos_;
    Rational d = number();
    double dv = constant_value(d.num);
    if (dv < 0 || dv != std::floor(dv)) {
      pos_ = dpos;
      fail("taylor degree must be a nonnegative integer");
    }
    expect(')');
    TaylorKind kind = id == "sin" ? TaylorKind::Sin : id == "cos" ? TaylorKind::Cos : TaylorKind::Exp;
    return make(taylor_poly(kind, int(dv)).compose({a}));
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  int nv_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
};

}  // namespace

bool Rational::is_polynomial() const { return is_constant(den) && constant_value(den) != 0.0; }

Polynomial Rational::polynomial() const {
  if (!is_polynomial()) throw std::invalid_argument("expression is not a polynomial");
  double d = constant_value(den);
  return d == 1.0 ? num : num * (1.0 / d);
}

Rational difference(const Rational& a, const Rational& b) { return add(a, b, -1.0); }

Rational parse_expression(const std::string& text, const std::vector<std::string>& names, int line, int col0) {
  return Parser(text, names, line, col0).run();
}

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& names, int line, int col0) {
  Rational r = parse_expression(text, names, line, col0);
  if (!r.is_polynomial()) throw ParseError("expression is not a polynomial (division by a non-constant)", line, col0);
  return r.polynomial();
}

}  // namespace gsip
