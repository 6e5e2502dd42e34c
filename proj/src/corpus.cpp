#include "gsip/corpus.hpp"

#include <sstream>
#include <stdexcept>

namespace gsip {

namespace {

struct Raw {
  const char* id;
  const char* text;
};

// Defaults where a source leaves X open: [-100, 100]^n.
const Raw kInstances[] = {
    {"ex3.1", R"(
name: ex3.1
x: x1 x2
u: u
objective: -x1
X:
  0 <= x1 <= 1
  0 <= x2 <= 1
U:
  -u >= 0
  u + 2 >= 0
  u^5 + 4*x1^2 + x2^2 - 1 >= 0
g:
  u^5 - 3*x2^2
meta:
  suite: demo
  source: GSIP where constant-u exchange cuts fail (original u-form; U(x) is not affine in u, so no extension rule applies)
  transform: none
  dims: 2 1 1
  x_ref: 0.5, 0
  f_ref: -0.5
)"},
    {"ex6.1", R"(
name: ex6.1
x: x1 x2
u: u1 u2
objective: minmax x3 = 5*x1^2 + 5*x2^2 - u1^2 - u2^2 + x1*(-u1 + u2 + 5) + x2*(u1 - u2 + 3)
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
U:
  -0.2 <= u1 <= 0.2
  -0.2 <= u2 <= 0.2
g:
  0.2 - x1^2 - u1^2
  0.1 - x2^2 - u2^2
extension: constant
meta:
  suite: sec6
  source: min-max SIP (Pang et al.)
  transform: min-max epigraph with x3
  dims: 3 2 3
  f_ref: -1.6228
  loops_ref: 3
  x_ref: -0.4, -0.2449, -1.6228
)"},
    {"ex6.2", R"(
name: ex6.2
x: x1 x2 x3 x4
u: u1 u2 u3
objective: (x1 - x2)*(x3 - x4) + (x1 - x3)*(x2 - x4) + x1*x2 - x2*x3 + x3*x4
X:
  10 - x1^2 - x2^2 - x3^2 - x4^2 >= 0
  3*x1*x2 - 2*x3^2 + 4*x4 >= 0
  x1*x2*x3 - 1 >= 0
  -3*x3*x4 + x2 + 2*x3 >= 0
U:
  u1*u2*u3 - 1 >= 0
  -2*u3^2 + u1 + u2 + 3 >= 0
  -u1^2 - u2^2 - u3^2 + u1 + u3 + 5 >= 0
g:
  -2*x1*x2*u2*u3 + u1^2*x4 + x1*u2 - x2*u3 + x3*u1 + x4 + 1
  2*u1*x2 - u3*x4 + 2*u2*u3 + 2*x1*x4 - x2*x3 + 1
extension: constant
meta:
  suite: sec6
  source: SIP with semialgebraic U
  transform: none
  dims: 4 3 2
  f_ref: -23.7793
  loops_ref: 2
)"},
    {"ex6.3-case1", R"(
name: ex6.3-case1
x: x1 x2
u: y
objective: -x1
X:
  0 <= x1 <= 1
  0 <= x2 <= 1
U:
  1 - 4*x1^2 - x2^2 <= y <= 0
g:
  y - 3*x2^2
extension: box
  l: 1 - 4*x1^2 - x2^2
  w: 0
cases:
  I: 4*x1^2 + x2^2 - 1 >= 0
meta:
  suite: sec6
  source: ex3.1 after substitution, case I
  transform: y = u^5 (U becomes a box; the bound -32 <= y is implied on X); case 1 - 4*x1^2 - x2^2 <= 0
  dims: 2 1 1
  f_ref: -0.5
  loops_ref: 2
  x_ref: 0.5, 0
)"},
    {"ex6.3-case2", R"(
name: ex6.3-case2
x: x1 x2
u: y
objective: -x1
X:
  0 <= x1 <= 1
  0 <= x2 <= 1
U:
  1 - 4*x1^2 - x2^2 <= y <= 0
g:
  y - 3*x2^2
extension: box
  l: 1 - 4*x1^2 - x2^2
  w: 0
cases:
  II: 1 - 4*x1^2 - x2^2 >= 0
meta:
  suite: sec6
  source: ex3.1 after substitution, case II
  transform: y = u^5; case 1 - 4*x1^2 - x2^2 >= 0 (strict inequality closed), where Y(x) is empty off the boundary
  dims: 2 1 1
  f_ref: -0.5
  x_ref: 0.5, 0
)"},
    {"ex6.4", R"(
name: ex6.4
x: x1 x2 x3
u: u1 u2
objective: x1^2*x2 - x2^2*x3 - x1*x2*x3 + (x1 + 1)^2
X:
  25 - x1^2 - x2^2 - x3^2 >= 0
  x1 - x2^2 >= 0
  x3 - x2 - 1 >= 0
U:
  0 <= u1 <= x1
  x2 <= u2 <= x3
g:
  x1^2*u1 + x2*u2^2 - x3*u1^2 - x1*x3*u2 + 1
  x1*x2*u1*u2 + x1*x3*(u1 + u2) - x3*u2 - 1
extension: box
  l: 0, x2
  w: x1, x3
meta:
  suite: sec6
  source: GSIP with box U(x) and empty feasible set
  transform: none
  dims: 3 2 2
  status_ref: infeasible
  loops_ref: 3
)"},
    {"ex6.5", R"(
name: ex6.5
x: x1 x2 x3 x4 x5
u: u1 u2 u3 u4 u5
objective: x1^2*x2 - x1*x2^2 - x1*x2*x3 + x3*x4*x5 + x3^3
X:
  25 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2 >= 0
  x1*x2 - 1 >= 0
  x3 >= 0
  -x2 + x3*x5 - 3 >= 0
  x3*x4 - 2 >= 0
U:
  3*x3^2 - (u1 - x1)^2 - (u2 - x2)^2 - u3^2 - u4^2 - u5^2 >= 0
g:
  x1*u1 + x2*x5*u5 - x3*u2*u3 - x4*u4 - 1
  x1*x2*u1*u2 - x3*x4*u1 - x5*u3*u4*u5 - 5
  u1*u2 + x5*u3 - (x1 - u1)^2 - (x3 - u4)^2 - u5^2 + 1
extension: ball
  center: x1, x2, 0, 0, 0
  inner: 0
  outer: sqrt(3)*x3
meta:
  suite: sec6
  source: GSIP with ball U(x)
  transform: none
  dims: 5 5 3
  f_ref: -18.0471
  loops_ref: 4
  sample_box: -5, 5
)"},
    {"ex6.6", R"(
name: ex6.6
x: x1 x2 x3
u: u1 u2
objective: (1 - x1)*(1 - x2)*(1 - x3) + (x1 - 1)*(x1 - x2)*(x1 - x3) + (x2 - 1)*(x2 - x1)*(x2 - x3) + (x3 - 1)*(x3 - x1)*(x3 - x2)
X:
  x1 + x2 - x3 >= 0
  x1 - x2 >= 0
  1 - x1 - x3 >= 0
  2 - 2*x1 + x2 >= 0
  3*x2 + x3 - 1 >= 0
U:
  x1 + x2 + x3 - u1 - u2 >= 0
  x1*u2 - u1 - x3 - x1*x2 >= 0
  x1 - u2 + x2*u1 >= 0
  -u1 >= 0
g:
  (x1*x2 - u1)*(x3 - u2) + x2*u1*u2 + x1*x3 + 2
  2*x1*u1 - x3*u1*u2 + x2 + 1
extension: numeric
  degree: 2
  max_degree: 4
meta:
  suite: sec6
  source: GSIP with u-affine U(x) (numeric extension)
  transform: objective sum over i of prod over j != i of (x_i - x_j) with x_0 = 1, written out
  dims: 3 2 2
  f_ref: -4.7306
  loops_ref: 4
  sample_box: -6, 6
)"},
    {"ex6.7", R"(
name: ex6.7
x: x1 x2 x3 x4 x5
u: u1 u2
objective: -pi*x3*x5
X:
  100 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2 >= 0
  x3 >= 0
  x5 >= 0
U:
  x3^2*x5^2 - ((x4^2 + x5^2)*(u1 - x1)^2 - 2*x3*x4*(u1 - x1)*(u2 - x2) + x3^2*(u2 - x2)^2) >= 0
g:
  4*u1 + u2^2 - 4
  -u1 + 2*u2 + 4
  8 - (u1 - 1)^2 - u2^2
  3 - u1*u2
extension: ellipsoid
  center: x1, x2
  D: x3, x4; 0, x5
meta:
  suite: sec6
  source: design centering, largest inscribed ellipse
  transform: (u - a)' (D'D)^-1 (u - a) <= 1 multiplied by det(D)^2
  dims: 5 2 4
  f_ref: -4.0332
  loops_ref: 9
  x_ref: 1.5084, 1.0587, 1.4203, -1.4097, 0.9039
)"},
    {"ex6.8", R"(
name: ex6.8
x: x1 x2
u: u1 u2
objective: x1^2 + x2^2
U:
  x1 - u1 >= 0
  x2 - u2 >= 0
g:
  (x2 - u2)^2 - (x1 - u1)^2
convex: kkt
meta:
  suite: sec6
  source: convex GSIP (Tezel et al.)
  transform: none
  dims: 2 2 1
  f_ref: 0
  x_ref: 0, 0
)"},
    {"ex6.9-lme", R"(
name: ex6.9-lme
x: x1 x2
u: u1 u2
objective: -x1*x2 + x1 + 2*x2
X:
  4 - x1^2 - x2^2 >= 0
  x1*x2 - 0.5 >= 0
  x1 >= 0
U:
  u1 >= 0
  u2 - x2*u1 >= 0
  2*x1 - x2*u1 - u2 >= 0
g:
  u1 + u2 + x2^2/(x1 + u1) + x1^2/(x2 + u2) - 2
  x1*u2 + (x2^2 + u2^2)/(1 + u1) - x2^2
convex: lme
  phi: 2*x1
  sign: positive
  T: 2*x1 - 2*x2*u1, 2*x1*x2 - 2*x2*u2, 2*x2, 2*x2, 2*x2; -u1, 2*x1 - u2, 1, 1, 1; -u1, -u2, 1, 1, 1
meta:
  suite: sec6
  source: convex GSIP with rational g, multiplier expression
  transform: none (denominators are positive on X x U)
  dims: 2 2 2
  f_ref: 1.516
  x_ref: 1.1348, 0.4406
)"},
    {"ex6.9-kkt", R"(
name: ex6.9-kkt
x: x1 x2
u: u1 u2
objective: -x1*x2 + x1 + 2*x2
X:
  4 - x1^2 - x2^2 >= 0
  x1*x2 - 0.5 >= 0
  x1 >= 0
U:
  u1 >= 0
  u2 - x2*u1 >= 0
  2*x1 - x2*u1 - u2 >= 0
g:
  u1 + u2 + x2^2/(x1 + u1) + x1^2/(x2 + u2) - 2
  x1*u2 + (x2^2 + u2^2)/(1 + u1) - x2^2
convex: kkt
meta:
  suite: sec6
  tags: slow
  source: convex GSIP with rational g, explicit multipliers
  transform: none
  dims: 2 2 2
  f_ref: 1.516
)"},
    {"appA-watson1", R"(
name: appA-watson1
x: x1 x2
u: u
objective: x1^2/3 + x1/2 + x2^2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
U:
  0 <= u <= 1
g:
  -(1 - x1^2*u^2)^2 + x1*u^2 + x2^2 - x2
extension: constant
meta:
  suite: appendixA
  source: Watson 1
  transform: none
  dims: 2 1 1
  f_ref: 0.1945
  loops_ref: 2
)"},
    {"appA-watson2", R"(
name: appA-watson2
x: x1 x2 x3
u: u1 u2
objective: x1^2 + x2^2 + x3^2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
U:
  0 <= u1 <= 1
  0 <= u2 <= 1
g:
  -x1*(u1 + u2^2 + 1) - x2*(u1*u2 - u2^2) - x3*(u1*u2 + u2^2 + u2) - 1
extension: constant
meta:
  suite: appendixA
  source: Watson 2
  transform: none
  dims: 3 2 1
  f_ref: 1.0
  loops_ref: 3
)"},
    {"appA-wang3", R"(
name: appA-wang3
x: x1 x2
u: u
objective: x2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
U:
  -1 <= u <= 1
g:
  -2*x1^2*u^2 + u^4 - x1^2 + x2
extension: constant
meta:
  suite: appendixA
  source: Wang 3
  transform: none
  dims: 2 1 1
  f_ref: 0
  loops_ref: 2
)"},
    {"appA-wang-pmi", R"(
name: appA-wang-pmi
x: x1 x2
u: u1 u2 u3
objective: x1 + x2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
U:
  u1^2 + u2^2 + u3^2 == 1
g:
  (4 - x1^2 - x2^2)*u1^2 + (x2^2 - x1)*u2^2 + (x1^2 - x2)*u3^2 + 2*x1*u1*u2 + 2*x2*u1*u3 + 2*x1*x2*u2*u3
extension: constant
meta:
  suite: appendixA
  source: Wang PMI
  transform: G(x) >= 0 written as u'G(x)u >= 0 over the unit sphere
  dims: 2 3 1
  f_ref: -2.5616
  loops_ref: 5
)"},
    {"appA-lemonidis3", R"(
name: appA-lemonidis3
x: x1 x2 x3 x4 x5 x6
u: u1 u2
objective: -4*x1 - 2/3*(x4 + x6)
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
  -100 <= x4 <= 100
  -100 <= x5 <= 100
  -100 <= x6 <= 100
U:
  -1 <= u1 <= 1
  -1 <= u2 <= 1
g:
  -x1 - x2*u1 - x3*u2 - x4*u1^2 - x5*u1*u2 - x6*u2^2 + (u1 - u2)^2*(u1 + u2)^2 + 3
extension: constant
meta:
  suite: appendixA
  source: Lemonidis 3
  transform: none
  dims: 6 2 1
  f_ref: -12.0
  loops_ref: 11
)"},
    {"appA-teo1", R"(
name: appA-teo1
x: x1 x2 x3
u: w1 w2
objective: (x1 + x2 - 2)^2 + (x1 - x2)^2 + 30*x3^2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
  x3^2 == (x1 - x2)^2
  x3 >= 0
U:
  w1^2 + w2^2 == 1
  w2 >= 0
g:
  x1*w1 - x2*w2 + 1
extension: constant
meta:
  suite: appendixA
  source: Teo 1
  transform: w = (cos u, sin u) on the upper half circle (w2 >= 0, from u in [0, pi]); auxiliary x3 with x3^2 = (x1 - x2)^2, x3 >= 0
  dims: 3 2 1
  f_ref: 0.3431
  loops_ref: 2
)"},
    {"appA-betro", R"(
name: appA-betro
x: x1 x2 x3 x4 x5 x6 x7 x8
u: u
objective: x1 + x2/2 + x3/3 + x4/4 + x5/5 + x6/6 + x7/7 + x8/8
X:
  -1 <= x1 <= 1
  -1 <= x2 <= 1
  -1 <= x3 <= 1
  -1 <= x4 <= 1
  -1 <= x5 <= 1
  -1 <= x6 <= 1
  -1 <= x7 <= 1
  -1 <= x8 <= 1
U:
  0 <= u <= 1
g:
  (2 - u)*(x1 + x2*u + x3*u^2 + x4*u^3 + x5*u^4 + x6*u^5 + x7*u^6 + x8*u^7) - 1
extension: constant
meta:
  suite: appendixA
  source: Betro
  transform: g multiplied by 2 - u > 0
  dims: 8 1 1
  f_ref: 0.6931
  loops_ref: 13
)"},
    {"appA-floudas1", R"(
name: appA-floudas1
x: x1 x2 x3 x4
u: u
objective: x4
X:
  -1 <= x1 <= 1
  3 <= x2 <= 5
  -5 <= x3 <= -3
  -1 <= x4 <= 3
U:
  0 <= u <= 1
g:
  x4 - (sin(pi*u):taylor(11) - x3*u^2 - x2*u - x1)
  x4 + (sin(pi*u):taylor(11) - x3*u^2 - x2*u - x1)
extension: constant
meta:
  suite: appendixA
  source: Floudas 1 (Chebyshev approximation)
  transform: |r| <= x4 split into two constraints; sin(pi*u) by its degree 11 Taylor polynomial
  dims: 4 1 2
  f_ref: 0.028
  loops_ref: 7
)"},
    {"appA-zakovic", R"(
name: appA-zakovic
x: x1 x2
u: u1 u2
objective: minmax x3 = 4*(x1 - 2)^2 - 2*u1^2 + x1^2*u1 - u2^2 + 2*x2^2*u2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
U:
  -5 <= u1 <= 5
  -5 <= u2 <= 5
extension: constant
g:
meta:
  suite: appendixA
  source: Zakovic min-max
  transform: min-max epigraph with x3 (bounded like the other coordinates)
  dims: 3 2 1
  f_ref: 1.4039
  loops_ref: 9
)"},
    {"appA-bhattacharjee", R"(
name: appA-bhattacharjee
x: x1 x2
u: u
objective: x1^2/3 + x1/2 + x2^2 - x2
X:
  -1000 <= x1 <= 1000
  -1000 <= x2 <= 1000
U:
  0 <= u <= 2
g:
  sin(u):taylor(7) - x1^2 - 2*x1*x2*u^2
extension: constant
meta:
  suite: appendixA
  source: Bhattacharjee et al.
  transform: sin(u) by its degree 7 Taylor polynomial
  dims: 2 1 1
  f_ref: -0.25
  loops_ref: 2
)"},
    {"appB-aboussoror1", R"(
name: appB-aboussoror1
x: x1 x2
u: u1 u2
objective: x1^2 + x2 + 1
X:
  -0.5 <= x1 <= 0.5
  -0.5 <= x2 <= 0.5
  x2^2 == x1^2
  x2 >= 0
U:
  x1^2 - 1 <= u1 <= -0.75
  x1 - 1 <= u2 <= -0.5
g:
  x1^2 + 2*x1 + u1 + u2
extension: box
  l: x1^2 - 1, x1 - 1
  w: -0.75, -0.5
meta:
  suite: appendixB
  source: Aboussoror 1
  transform: x2 = |x1| through x2^2 = x1^2, x2 >= 0
  dims: 2 2 1
  f_ref: 1.75
  loops_ref: 2
)"},
    {"appB-alexander1", R"(
name: appB-alexander1
x: x1 x2
u: y1 y2 y3
objective: -0.5*x1^4 + 2*x1*x2 - 2*x1^2
X:
  0 <= x1 <= 1
  0 <= x2 <= 1
U:
  y1 >= 0
  y2 >= 0
  y3 >= 0
  x1 - y1 - y2 - y3 >= 0
g:
  -x1^2 + x1 + x2 - y1 - y2
extension: simplex
  l: 0, 0, 0
  w: x1
meta:
  suite: appendixB
  source: Alexander 1
  transform: y_i = u_i^2 (the bounds y <= 1 are implied by e'y <= x1 <= 1)
  dims: 2 3 1
  f_ref: -0.5
  loops_ref: 2
)"},
    {"appB-diehl1", R"(
name: appB-diehl1
x: x1 x2
u: u
objective: (x1 + sqrt(2) + 1)^2 + (x2 - 1)^2
U:
  x1 <= u <= x2
g:
  u
extension: box
  l: x1
  w: x2
cases:
  I: x1 <= x2
  II: x1 >= x2
meta:
  suite: appendixB
  source: Diehl 1
  transform: cases on the emptiness of U(x); x1 > x2 closed to x1 >= x2
  dims: 2 1 1
  f_ref: 5.8284
  loops_ref: 1
)"},
    {"appB-jongen1", R"(
name: appB-jongen1
x: x1 x2 x3
u: u
objective: x2
X:
  -100 <= x1 <= 100
  -100 <= x2 <= 100
  -100 <= x3 <= 100
  x3^3 == -x1^2 + 2*x2
U:
  x3 <= u <= 0
g:
  u^3 - x2
extension: box
  l: x3
  w: 0
cases:
  I: x3 <= 0
  II: x3 >= 0
meta:
  suite: appendixB
  source: Jongen 1
  transform: auxiliary x3 with x3^3 = -x1^2 + 2*x2; cases on the sign of x3; box [-100, 100]^3 added
  dims: 3 1 1
  f_ref: 0
  loops_ref: 2
)"},
    {"appB-alexander4", R"(
name: appB-alexander4
x: x1 x2 x3
u: u1 u2
objective: x1^2 + x2^2 + x3^2
X:
  -1 <= x1 <= 0
  -1 <= x2 <= 0
  -1 <= x3 <= 0
U:
  -x1 <= u1 <= 1
  0 <= u2 <= 1
g:
  -x1*(u1 + u2^2 + 1) - x2*(u1*u2 - u2^2) - x3*(u1*u2 + u2^2 + u2) - 1
extension: box
  l: -x1, 0
  w: 1, 1
meta:
  suite: appendixB
  source: Alexander 4
  transform: x1^2 <= u1^2 with x1 <= 0 <= u1 written as -x1 <= u1
  dims: 3 2 1
  f_ref: 0.382
  loops_ref: 3
)"},
    {"appB-alexander5", R"(
name: appB-alexander5
x: x1 x2 x3
u: u
objective: x1^2 + x2^2 + x3^2
X:
  -5 <= x1 <= 5
  -5 <= x2 <= 5
  -5 <= x3 <= 5
U:
  0 <= u <= 1
  x2 + 1 - 2*u >= 0
g:
  2*sin(4*u):taylor(5) - x1 - x2*exp(x3*u):taylor(4) - exp(x2*u):taylor(4)
extension: numeric
cases:
  I: -1 <= x2 <= 1
  II: x2 >= 1
  III: x2 <= -1
meta:
  suite: appendixB
  source: Alexander 5
  transform: sin by degree 5 and exp by degree 4 Taylor polynomials; three cases on the emptiness of U(x)
  dims: 3 1 1
  f_ref: 0.5
  loops_ref: 2
)"},
    {"appB-alexander6", R"(
name: appB-alexander6
x: x1 x2 x3
u: u
objective: x1 + x2
X:
  -1 <= x1 <= 1
  -1 <= x2 <= 1
  -1 <= x3 <= 1
  x3^2 == (x1 - x2)^2
  x3 >= 0
U:
  (x1 + x2 + x3)/2 <= u <= 1
g:
  u
extension: box
  l: (x1 + x2 + x3)/2
  w: 1
meta:
  suite: appendixB
  source: Alexander 6
  transform: max(x1, x2) = (x1 + x2 + x3)/2 with x3 = |x1 - x2|
  dims: 3 1 1
  f_ref: -1.0
  loops_ref: 2
)"},
    {"appB-alexander7", R"(
name: appB-alexander7
x: x1 x2 x3
u: u
objective: exp(x1):taylor(4) + exp(x2):taylor(4) + exp(x3):taylor(4)
X:
  -1 <= x1 <= 1
  -1 <= x2 <= 1
  -1 <= x3 <= 1
U:
  0 <= u <= 1
  u >= 2*(x2 + x3)
g:
  (1 + u^2)*(x1 + x2*u + x3*u^2) - 1
extension: numeric
cases:
  I: 0 <= x2 + x3 <= 0.5
  II: x2 + x3 <= 0
  III: x2 + x3 >= 0.5
meta:
  suite: appendixB
  source: Alexander 7
  transform: exp by degree 4 Taylor polynomials; g multiplied by 1 + u^2; three cases on U(x)
  dims: 3 1 1
  f_ref: 3.568
  loops_ref: 3
)"},
    {"appB-harwood1", R"(
name: appB-harwood1
x: x1 x2 x3 x4
u: u1 u2
objective: -(x3 - x1)*(x4 - x2)
X:
  -1 <= x1 <= 1
  -1 <= x2 <= 1
  -1 <= x3 <= 1
  -1 <= x4 <= 1
  x1 <= x3
  x2 <= x4
U:
  x1 <= u1 <= x3
  x2 <= u2 <= x4
g:
  (u2^2 + 1)*(cos(u1):taylor(4)*sin(u2):taylor(4) - 1.841*u1*(1 - u1) - 6.841*u2*(1 - u2)) - u1
extension: box
  l: x1, x2
  w: x3, x4
meta:
  suite: appendixB
  tags: slow
  source: Harwood 1
  transform: cos and sin by degree 4 Taylor polynomials; g multiplied by u2^2 + 1
  dims: 4 2 1
  f_ref: -1.6985
  loops_ref: 4
)"},
    {"appB-stein1", R"(
name: appB-stein1
x: x1 x2 x3 x4
u: u1 u2
objective: -pi*x3*x4
X:
  100 - x1^2 - x2^2 - x3^2 - x4^2 >= 0
  x3 >= 0
  x4 >= 0
U:
  x3^2*x4^2 - x4^2*(u1 - x1)^2 - x3^2*(u2 - x2)^2 >= 0
g:
  u1 + u2^2
  3 - u1 - 4*u2
  u2 + 1
extension: ellipsoid
  center: x1, x2
  D: x3, 0; 0, x4
meta:
  suite: appendixB
  source: Stein 1
  transform: ellipse inequality multiplied by x3^2*x4^2
  dims: 4 2 3
  f_ref: -3.4838
  loops_ref: 10
)"},
};

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> out;
  for (const Raw& r : kInstances) {
    CorpusEntry e;
    e.id = r.id;
    e.text = r.text;
    try {
      e.file = parse_problem(e.text);
    } catch (const std::exception& ex) {
      throw std::logic_error("corpus instance " + e.id + ": " + ex.what());
    }
    e.suite = e.file.meta.count("suite") ? e.file.meta.at("suite") : "";
    e.slow = e.file.meta.count("tags") && e.file.meta.at("tags").find("slow") != std::string::npos;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

std::optional<double> CorpusEntry::f_ref() const {
  auto it = file.meta.find("f_ref");
  if (it == file.meta.end()) return std::nullopt;
  return std::stod(it->second);
}

std::optional<int> CorpusEntry::loops_ref() const {
  auto it = file.meta.find("loops_ref");
  if (it == file.meta.end()) return std::nullopt;
  return std::stoi(it->second);
}

std::string CorpusEntry::status_ref() const {
  auto it = file.meta.find("status_ref");
  return it == file.meta.end() ? "optimal" : it->second;
}

std::vector<double> CorpusEntry::x_ref() const {
  auto it = file.meta.find("x_ref");
  return it == file.meta.end() ? std::vector<double>{} : numbers(it->second);
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry* find_instance(const std::string& id) {
  for (const auto& e : corpus())
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<const CorpusEntry*> suite(const std::string& name, bool include_slow) {
  if (name != "sec6" && name != "appendixA" && name != "appendixB" && name != "all")
    throw std::invalid_argument("unknown suite '" + name + "' (sec6, appendixA, appendixB, all)");
  std::vector<const CorpusEntry*> out;
  for (const auto& e : corpus()) {
    if (e.suite == "demo") continue;
    if (name != "all" && e.suite != name) continue;
    if (e.slow && !include_slow) continue;
    out.push_back(&e);
  }
  return out;
}

}  // namespace gsip
