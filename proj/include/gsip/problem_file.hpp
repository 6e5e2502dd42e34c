#pragma once

#include "gsip/convex_kkt.hpp"
#include "gsip/expr_parser.hpp"
#include "gsip/gsip_loop.hpp"

#include <map>
#include <string>
#include <vector>

namespace gsip {

// Text format, one section per unindented "key:" line; indented lines continue the section.
//
//   name: ex6.3-case1
//   x: x1 x2
//   u: y
//   objective: -x1                    (or: minmax t = <expr over x and u>)
//   X:
//     0 <= x1 <= 1
//   U:
//     1 - 4*x1^2 - x2^2 <= y <= 0
//   g:
//     y - 3*x2^2                      (a bare expression means >= 0)
//   extension: box                    (auto, constant, box, simplex, ball, ellipsoid, numeric)
//     l: 1 - 4*x1^2 - x2^2
//     w: 0
//   convex: lme                       (kkt or lme; g may then be a quotient N/D with D > 0)
//     phi: 2*x1
//     sign: positive
//     T: a, b; c, d
//   cases:
//     I: x1 <= x2; x2 >= 0
//   meta:
//     f_ref: 5.8284
//
// '#' starts a comment.
struct CaseSpec {
  std::string name;
  PolyVector c_eq, c_in;  // appended to X
};

enum class SolveMode { Gsip, ConvexKkt, ConvexLme };

std::string to_string(SolveMode m);

struct ProblemFile {
  std::vector<std::string> x_names, u_names;
  GsipProblem problem;
  SolveMode mode = SolveMode::Gsip;
  // g_den, T, phi and the sign attestation; its base is filled by convex_problem().
  ConvexGsip convex;
  std::string epigraph;  // name of the variable added by a minmax objective, if any
  std::vector<CaseSpec> cases;
  std::map<std::string, std::string> meta;

  std::vector<std::string> names() const;
  // The problem with a case's constraints added to X (index -1 means none).
  GsipProblem with_case(int index) const;
  ConvexGsip convex_problem(int case_index = -1) const;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

// Canonical text: every polynomial expanded, every constraint as "expr >= 0" or "expr == 0".
std::string print_problem(const ProblemFile& pf);

}  // namespace gsip
