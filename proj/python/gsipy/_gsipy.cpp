#include "gsip/corpus.hpp"
#include "gsip/expr_parser.hpp"
#include "gsip/popsolve.hpp"
#include "gsip/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gsip;

namespace {

RunOptions make_options(double eps, int max_loops, int order_cap, double rank_tol) {
  RunOptions o;
  o.gsip.eps = eps;
  o.gsip.max_loops = max_loops;
  for (PopOptions* p : {&o.gsip.upper, &o.gsip.lower, &o.convex}) {
    p->k_max = order_cap;
    p->rank_tol = rank_tol;
  }
  return o;
}

const CorpusEntry& entry(const std::string& id) {
  const CorpusEntry* e = find_instance(id);
  if (!e) throw py::key_error("unknown corpus instance: " + id);
  return *e;
}

py::dict minimize_py(const std::vector<std::string>& names, const std::string& objective,
                     const std::vector<std::string>& ineq, const std::vector<std::string>& eq, int order_cap) {
  Pop pop;
  pop.nvars = int(names.size());
  pop.objective = parse_polynomial(objective, names);
  for (const auto& s : ineq) pop.ineq.push_back(parse_polynomial(s, names));
  for (const auto& s : eq) pop.eq.push_back(parse_polynomial(s, names));
  PopOptions opts;
  opts.k_max = order_cap;
  PopResult r;
  {
    py::gil_scoped_release release;
    r = minimize(pop, opts);
  }
  py::dict out;
  out["status"] = to_string(r.status);
  out["value"] = r.value;
  out["minimizers"] = r.minimizers;
  out["order"] = r.order_used;
  out["bounds"] = r.bounds;
  return out;
}

}  // namespace

PYBIND11_MODULE(_gsipy, m) {
  m.doc() = "Polynomial GSIP solver bindings";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("canonical", [](const std::string& text) { return print_problem(parse_problem(text)); }, py::arg("text"),
        "Parse problem-file text and return its canonical form.");

  m.def(
      "solve_json",
      [](const std::string& text, double eps, int max_loops, int order_cap, double rank_tol) {
        ProblemFile pf = parse_problem(text);
        RunOptions o = make_options(eps, max_loops, order_cap, rank_tol);
        py::gil_scoped_release release;
        RunReport r = run_problem(pf, o);
        return to_json({r});
      },
      py::arg("text"), py::arg("eps") = 1e-6, py::arg("max_loops") = 30, py::arg("order_cap") = 0,
      py::arg("rank_tol") = 1e-6);

  m.def(
      "run_corpus_json",
      [](const std::string& id, double eps, int max_loops, int order_cap, double rank_tol, int loop_slack) {
        const CorpusEntry& e = entry(id);
        RunOptions o = make_options(eps, max_loops, order_cap, rank_tol);
        py::gil_scoped_release release;
        return to_json({run_instance(e, o, loop_slack)});
      },
      py::arg("id"), py::arg("eps") = 1e-6, py::arg("max_loops") = 30, py::arg("order_cap") = 0,
      py::arg("rank_tol") = 1e-6, py::arg("loop_slack") = 2);

  m.def(
      "corpus_ids",
      [](const std::string& name, bool slow) {
        std::vector<std::string> ids;
        for (const auto* e : suite(name, slow)) ids.push_back(e->id);
        return ids;
      },
      py::arg("suite") = "all", py::arg("slow") = false);

  m.def("corpus_text", [](const std::string& id) { return entry(id).text; }, py::arg("id"));

  m.def("minimize", &minimize_py, py::arg("names"), py::arg("objective"), py::arg("ineq") = std::vector<std::string>{},
        py::arg("eq") = std::vector<std::string>{}, py::arg("order_cap") = 0,
        "Minimize a polynomial over a basic semialgebraic set by moment relaxations.");
}
