#include "gsip/problem_file.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace gsip {

std::string to_string(SolveMode m) {
  switch (m) {
    case SolveMode::Gsip: return "gsip";
    case SolveMode::ConvexKkt: return "kkt";
    case SolveMode::ConvexLme: return "lme";
  }
  return "gsip";
}

std::vector<std::string> ProblemFile::names() const {
  std::vector<std::string> all = x_names;
  all.insert(all.end(), u_names.begin(), u_names.end());
  return all;
}

GsipProblem ProblemFile::with_case(int index) const {
  GsipProblem p = problem;
  if (index < 0) return p;
  const CaseSpec& c = cases.at(std::size_t(index));
  p.name += "/" + c.name;
  p.c_eq.insert(p.c_eq.end(), c.c_eq.begin(), c.c_eq.end());
  p.c_in.insert(p.c_in.end(), c.c_in.begin(), c.c_in.end());
  return p;
}

ConvexGsip ProblemFile::convex_problem(int case_index) const {
  ConvexGsip c = convex;
  c.base = with_case(case_index);
  return c;
}

namespace {

// A piece of a source line with its position, for error messages.
struct Span {
  std::string text;
  int line = 0;
  int col = 1;
};

struct Section {
  std::string key;
  Span value;
  std::vector<Span> body;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Span trimmed(const std::string& s, int line, int col) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {"", line, col};
  return {trim(s), line, col + int(a)};
}

// Splits at top-level occurrences of sep.
std::vector<Span> split(const Span& s, char sep) {
  std::vector<Span> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.text.size(); ++i) {
    char c = i < s.text.size() ? s.text[i] : sep;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      Span piece = trimmed(s.text.substr(start, i - start), s.line, s.col + int(start));
      if (!piece.text.empty()) out.push_back(piece);
      start = i + 1;
    }
  }
  return out;
}

std::vector<Section> sectionize(const std::string& text) {
  static const std::regex header(R"(^([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$)");
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    if (trim(s).empty()) continue;
    bool indented = s[0] == ' ' || s[0] == '\t';
    std::smatch m;
    if (!indented && std::regex_match(s, m, header)) {
      Section sec;
      sec.key = m[1];
      sec.value = trimmed(m[2], line, int(m.position(2)) + 1);
      out.push_back(sec);
      continue;
    }
    if (!indented) throw ParseError("expected 'section:'", line, 1);
    if (out.empty()) throw ParseError("indented line outside a section", line, 1);
    out.back().body.push_back(trimmed(s, line, 1));
  }
  return out;
}

// "key: value" inside a section body.
std::pair<std::string, Span> key_value(const Span& s) {
  std::size_t c = s.text.find(':');
  if (c == std::string::npos) throw ParseError("expected 'key: value'", s.line, s.col);
  return {trim(s.text.substr(0, c)), trimmed(s.text.substr(c + 1), s.line, s.col + int(c) + 1)};
}

enum class Rel { Ge, Le, Eq };

struct Relation {
  std::vector<Span> sides;
  std::vector<Rel> ops;
};

Relation split_relation(const Span& s) {
  Relation r;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.text.size(); ++i) {
    char c = s.text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth != 0) continue;
    char nxt = i + 1 < s.text.size() ? s.text[i + 1] : '\0';
    Rel op;
    std::size_t len = 2;
    if (c == '>' && nxt == '=')
      op = Rel::Ge;
    else if (c == '<' && nxt == '=')
      op = Rel::Le;
    else if (c == '=' && nxt == '=')
      op = Rel::Eq;
    else if (c == '=') {
      op = Rel::Eq;
      len = 1;
    } else if (c == '>' || c == '<') {
      throw ParseError("strict inequalities are not supported; use >= or <=", s.line, s.col + int(i));
    } else {
      continue;
    }
    r.sides.push_back(trimmed(s.text.substr(start, i - start), s.line, s.col + int(start)));
    r.ops.push_back(op);
    start = i + len;
    i += len - 1;
  }
  r.sides.push_back(trimmed(s.text.substr(start), s.line, s.col + int(start)));
  for (const auto& side : r.sides)
    if (side.text.empty()) throw ParseError("empty side of a relation", s.line, s.col);
  if (r.ops.size() > 2) throw ParseError("at most two relations per constraint", s.line, s.col);
  return r;
}

Rational expr(const Span& s, const std::vector<std::string>& names) {
  return parse_expression(s.text, names, s.line, s.col);
}

Polynomial poly(const Span& s, const std::vector<std::string>& names) {
  return parse_polynomial(s.text, names, s.line, s.col);
}

struct Constraint {
  Rational value;  // value >= 0 or value == 0
  bool eq = false;
  Span where;
};

// A relation chain a op b [op c]; a bare expression means >= 0 when allowed.
std::vector<Constraint> constraints(const Span& s, const std::vector<std::string>& names, bool bare_ok) {
  std::vector<Constraint> out;
  for (const Span& piece : split(s, ';')) {
    Relation r = split_relation(piece);
    if (r.ops.empty()) {
      if (!bare_ok) throw ParseError("expected a relation (>=, <= or ==)", piece.line, piece.col);
      out.push_back({expr(piece, names), false, piece});
      continue;
    }
    std::vector<Rational> v;
    for (const auto& side : r.sides) v.push_back(expr(side, names));
    for (std::size_t i = 0; i < r.ops.size(); ++i) {
      switch (r.ops[i]) {
        case Rel::Ge: out.push_back({difference(v[i], v[i + 1]), false, piece}); break;
        case Rel::Le: out.push_back({difference(v[i + 1], v[i]), false, piece}); break;
        case Rel::Eq: out.push_back({difference(v[i], v[i + 1]), true, piece}); break;
      }
    }
  }
  return out;
}

Polynomial as_poly(const Constraint& c) {
  if (!c.value.is_polynomial())
    throw ParseError("constraint is not polynomial (division by a non-constant)", c.where.line, c.where.col);
  return c.value.polynomial();
}

void add_polys(const Span& s, const std::vector<std::string>& names, PolyVector& eq, PolyVector& in) {
  for (const auto& c : constraints(s, names, false)) (c.eq ? eq : in).push_back(as_poly(c));
}

PolyVector poly_list(const Span& s, const std::vector<std::string>& names) {
  PolyVector out;
  for (const auto& piece : split(s, ',')) out.push_back(poly(piece, names));
  return out;
}

PolyMatrix poly_matrix(const Span& s, const std::vector<std::string>& names) {
  std::vector<PolyVector> rows;
  for (const auto& r : split(s, ';')) rows.push_back(poly_list(r, names));
  if (rows.empty()) throw ParseError("empty matrix", s.line, s.col);
  PolyMatrix m(int(rows.size()), int(rows[0].size()), int(names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ParseError("matrix rows differ in length", s.line, s.col);
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(int(i), int(j)) = rows[i][j];
  }
  return m;
}

std::vector<std::string> words(const Span& s) {
  std::vector<std::string> out;
  std::istringstream in(s.text);
  std::string w;
  while (in >> w) {
    for (auto& part : split({w, s.line, s.col}, ',')) out.push_back(part.text);
  }
  return out;
}

void check_names(const std::vector<std::string>& names, const Span& where) {
  static const std::set<std::string> reserved = {"pi", "sqrt", "sin", "cos", "exp", "taylor"};
  static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_]*)");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!std::regex_match(n, ident)) throw ParseError("bad variable name '" + n + "'", where.line, where.col);
    if (reserved.count(n)) throw ParseError("'" + n + "' is reserved", where.line, where.col);
    if (!seen.insert(n).second) throw ParseError("duplicate variable '" + n + "'", where.line, where.col);
  }
}

void parse_extension(const Section& sec, ProblemFile& pf) {
  ExtensionRule& r = pf.problem.extension;
  const std::string kind = sec.value.text.empty() ? "auto" : sec.value.text;
  using K = ExtensionRule::Kind;
  static const std::map<std::string, K> kinds = {{"auto", K::Auto},       {"constant", K::Constant},
                                                 {"box", K::Box},         {"simplex", K::Simplex},
                                                 {"ball", K::Ball},       {"ellipsoid", K::Ellipsoid},
                                                 {"numeric", K::Numeric}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw ParseError("unknown extension kind '" + kind + "'", sec.value.line, sec.value.col);
  r.kind = it->second;
  const auto& xn = pf.x_names;
  for (const auto& line : sec.body) {
    auto [key, val] = key_value(line);
    if (key == "l")
      r.l = poly_list(val, xn);
    else if (key == "w" && r.kind == K::Simplex)
      r.budget = poly(val, xn);
    else if (key == "w")
      r.w = poly_list(val, xn);
    else if (key == "center")
      r.center = poly_list(val, xn);
    else if (key == "inner")
      r.inner = poly(val, xn);
    else if (key == "outer")
      r.outer = poly(val, xn);
    else if (key == "D")
      r.shape = poly_matrix(val, xn);
    else if (key == "degree")
      r.degree = std::stoi(val.text);
    else if (key == "max_degree")
      r.max_degree = std::stoi(val.text);
    else
      throw ParseError("unknown extension field '" + key + "'", line.line, line.col);
  }
  const std::size_t p = pf.u_names.size();
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ParseError("extension " + kind + ": " + what, sec.value.line, sec.value.col);
  };
  switch (r.kind) {
    case K::Box: need(r.l.size() == p && r.w.size() == p, "l and w need one entry per u"); break;
    case K::Simplex: need(r.l.size() == p, "l needs one entry per u"); break;
    case K::Ball:
      need(r.center.size() == p, "center needs one entry per u");
      if (r.inner.nvars() == 0) r.inner = Polynomial(int(xn.size()));
      if (r.outer.nvars() == 0) r.outer = Polynomial(int(xn.size()));
      break;
    case K::Ellipsoid:
      need(r.center.size() == p, "center needs one entry per u");
      need(r.shape.rows == int(p) && r.shape.cols == int(p), "D must be p x p");
      break;
    default: break;
  }
  if (r.kind == K::Simplex && r.budget.nvars() == 0) r.budget = Polynomial(int(xn.size()));
}

void parse_convex(const Section& sec, ProblemFile& pf) {
  const std::string mode = sec.value.text.empty() ? "kkt" : sec.value.text;
  if (mode == "kkt")
    pf.mode = SolveMode::ConvexKkt;
  else if (mode == "lme")
    pf.mode = SolveMode::ConvexLme;
  else
    throw ParseError("convex mode must be kkt or lme", sec.value.line, sec.value.col);
  const auto all = pf.names();
  for (const auto& line : sec.body) {
    auto [key, val] = key_value(line);
    if (key == "phi") {
      pf.convex.phi = poly(val, all);
      pf.convex.has_lme = true;
    } else if (key == "T") {
      pf.convex.T = poly_matrix(val, all);
      pf.convex.has_lme = true;
    } else if (key == "sign") {
      if (val.text == "positive")
        pf.convex.phi_sign = ConvexGsip::Sign::Positive;
      else if (val.text == "negative")
        pf.convex.phi_sign = ConvexGsip::Sign::Negative;
      else if (val.text == "unknown")
        pf.convex.phi_sign = ConvexGsip::Sign::Unknown;
      else
        throw ParseError("sign must be positive, negative or unknown", val.line, val.col);
    } else {
      throw ParseError("unknown convex field '" + key + "'", line.line, line.col);
    }
  }
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  ProblemFile pf;
  std::vector<Section> secs = sectionize(text);
  std::map<std::string, const Section*> by_key;
  for (const auto& s : secs) {
    if (by_key.count(s.key)) throw ParseError("duplicate section '" + s.key + "'", s.value.line, 1);
    by_key[s.key] = &s;
  }
  static const std::set<std::string> known = {"name", "x", "u", "objective", "X", "U", "g",
                                              "extension", "convex", "cases", "meta"};
  for (const auto& s : secs)
    if (!known.count(s.key)) throw ParseError("unknown section '" + s.key + "'", s.value.line, 1);
  for (const char* req : {"x", "u", "objective", "g"})
    if (!by_key.count(req)) throw ParseError(std::string("missing section '") + req + "'", 1, 1);

  if (by_key.count("name")) pf.problem.name = by_key["name"]->value.text;
  pf.x_names = words(by_key["x"]->value);
  pf.u_names = words(by_key["u"]->value);
  if (pf.x_names.empty() || pf.u_names.empty()) throw ParseError("need at least one x and one u variable", 1, 1);

  // A minmax objective adds its epigraph variable to x.
  static const std::regex minmax(R"(^minmax\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$)");
  const Span& obj = by_key["objective"]->value;
  std::smatch mm;
  Span inner;
  if (std::regex_match(obj.text, mm, minmax)) {
    pf.epigraph = mm[1];
    pf.x_names.push_back(pf.epigraph);
    inner = {mm[2], obj.line, obj.col + int(mm.position(2))};
  }
  check_names(pf.names(), by_key["x"]->value);

  GsipProblem& P = pf.problem;
  P.n = int(pf.x_names.size());
  P.p = int(pf.u_names.size());
  const auto all = pf.names();
  if (pf.epigraph.empty()) {
    P.f = poly(obj, pf.x_names);
  } else {
    P.f = Polynomial::variable(P.n, P.n - 1);
    P.g.push_back(Polynomial::variable(P.n + P.p, P.n - 1) - poly(inner, all));
  }

  if (by_key.count("X"))
    for (const auto& line : by_key["X"]->body) add_polys(line, pf.x_names, P.c_eq, P.c_in);
  if (by_key.count("U"))
    for (const auto& line : by_key["U"]->body) add_polys(line, all, P.h_eq, P.h_in);
  if (by_key.count("convex")) parse_convex(*by_key["convex"], pf);

  const bool convex = pf.mode != SolveMode::Gsip;
  const std::size_t g_before = P.g.size();
  for (const auto& line : by_key["g"]->body) {
    for (const auto& c : constraints(line, all, true)) {
      if (c.eq) throw ParseError("g rows are inequalities", c.where.line, c.where.col);
      if (c.value.is_polynomial()) {
        P.g.push_back(c.value.polynomial());
        pf.convex.g_den.push_back(Polynomial());
      } else if (convex) {
        P.g.push_back(c.value.num);
        pf.convex.g_den.push_back(c.value.den);
      } else {
        throw ParseError("quotients in g are only allowed in a convex section", c.where.line, c.where.col);
      }
    }
  }
  if (g_before > 0) pf.convex.g_den.insert(pf.convex.g_den.begin(), g_before, Polynomial());
  bool any_den = false;
  for (const auto& d : pf.convex.g_den) any_den = any_den || !d.is_zero();
  if (!any_den) pf.convex.g_den.clear();

  if (by_key.count("extension")) parse_extension(*by_key["extension"], pf);

  if (by_key.count("cases")) {
    for (const auto& line : by_key["cases"]->body) {
      auto [key, val] = key_value(line);
      CaseSpec c;
      c.name = key;
      add_polys(val, pf.x_names, c.c_eq, c.c_in);
      pf.cases.push_back(std::move(c));
    }
  }
  if (by_key.count("meta"))
    for (const auto& line : by_key["meta"]->body) {
      auto [key, val] = key_value(line);
      pf.meta[key] = val.text;
    }

  try {
    if (convex)
      pf.convex_problem().validate();
    else
      P.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1, 1);
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

namespace {

std::string join(const PolyVector& v, const std::vector<std::string>& names, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i].to_string(names);
  return out;
}

std::string matrix(const PolyMatrix& m, const std::vector<std::string>& names) {
  std::string out;
  for (int i = 0; i < m.rows; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < m.cols; ++j) out += (j ? ", " : "") + m(i, j).to_string(names);
  }
  return out;
}

void constraints_out(std::ostream& os, const PolyVector& eq, const PolyVector& in,
                     const std::vector<std::string>& names) {
  for (const auto& c : eq) os << "  " << c.to_string(names) << " == 0\n";
  for (const auto& c : in) os << "  " << c.to_string(names) << " >= 0\n";
}

}  // namespace

std::string print_problem(const ProblemFile& pf) {
  const GsipProblem& P = pf.problem;
  const auto& xn = pf.x_names;
  const auto all = pf.names();
  std::ostringstream os;
  if (!P.name.empty()) os << "name: " << P.name << "\n";
  os << "x:";
  for (const auto& n : xn) os << " " << n;
  os << "\nu:";
  for (const auto& n : pf.u_names) os << " " << n;
  os << "\nobjective: " << P.f.to_string(xn) << "\n";
  if (!P.c_eq.empty() || !P.c_in.empty()) {
    os << "X:\n";
    constraints_out(os, P.c_eq, P.c_in, xn);
  }
  if (!P.h_eq.empty() || !P.h_in.empty()) {
    os << "U:\n";
    constraints_out(os, P.h_eq, P.h_in, all);
  }
  os << "g:\n";
  for (int j = 0; j < P.s(); ++j) {
    os << "  ";
    const bool den = !pf.convex.g_den.empty() && !pf.convex.g_den[j].is_zero();
    if (den)
      os << "(" << P.g[j].to_string(all) << ") / (" << pf.convex.g_den[j].to_string(all) << ")\n";
    else
      os << P.g[j].to_string(all) << "\n";
  }
  const ExtensionRule& r = P.extension;
  using K = ExtensionRule::Kind;
  if (r.kind != K::Auto) {
    os << "extension: " << to_string(r.kind) << "\n";
    switch (r.kind) {
      case K::Box: os << "  l: " << join(r.l, xn) << "\n  w: " << join(r.w, xn) << "\n"; break;
      case K::Simplex: os << "  l: " << join(r.l, xn) << "\n  w: " << r.budget.to_string(xn) << "\n"; break;
      case K::Ball:
        os << "  center: " << join(r.center, xn) << "\n  inner: " << r.inner.to_string(xn)
           << "\n  outer: " << r.outer.to_string(xn) << "\n";
        break;
      case K::Ellipsoid: os << "  center: " << join(r.center, xn) << "\n  D: " << matrix(r.shape, xn) << "\n"; break;
      case K::Numeric: os << "  degree: " << r.degree << "\n  max_degree: " << r.max_degree << "\n"; break;
      default: break;
    }
  }
  if (pf.mode != SolveMode::Gsip) {
    os << "convex: " << to_string(pf.mode) << "\n";
    if (pf.convex.has_lme) {
      os << "  phi: " << pf.convex.phi.to_string(all) << "\n";
      os << "  sign: " << to_string(pf.convex.phi_sign) << "\n";
      os << "  T: " << matrix(pf.convex.T, all) << "\n";
    }
  }
  if (!pf.cases.empty()) {
    os << "cases:\n";
    for (const auto& c : pf.cases) {
      os << "  " << c.name << ": ";
      bool first = true;
      for (const auto& e : c.c_eq) {
        os << (first ? "" : "; ") << e.to_string(xn) << " == 0";
        first = false;
      }
      for (const auto& e : c.c_in) {
        os << (first ? "" : "; ") << e.to_string(xn) << " >= 0";
        first = false;
      }
      os << "\n";
    }
  }
  if (!pf.meta.empty()) {
    os << "meta:\n";
    for (const auto& [k, v] : pf.meta) os << "  " << k << ": " << v << "\n";
  }
  return os.str();
}

}  // namespace gsip
