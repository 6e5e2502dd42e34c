#pragma once

#include "gsip/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace gsip {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// num / den; den is the constant 1 for plain polynomials.
struct Rational {
  Polynomial num;
  Polynomial den;

  bool is_polynomial() const;
  // num when den is constant (scaled); throws otherwise.
  Polynomial polynomial() const;
};

// a - b, kept as a single quotient.
Rational difference(const Rational& a, const Rational& b);

// Expression over the given variable names. Supports + - * / ^ (nonnegative integer powers),
// parentheses, numbers, pi, sqrt(c) and sin/cos/exp(c) of constants, and sin/cos/exp of
// polynomials when followed by :taylor(d). Positions in errors are reported from (line, col0).
Rational parse_expression(const std::string& text, const std::vector<std::string>& names, int line = 1,
                          int col0 = 1);

// Same, but the result must be a polynomial.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& names, int line = 1,
                            int col0 = 1);

}  // namespace gsip
