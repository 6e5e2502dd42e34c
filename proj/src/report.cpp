#include "gsip/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gsip {

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

void sample_box(const ProblemFile& pf, GsipOptions& o) {
  auto it = pf.meta.find("sample_box");
  if (it == pf.meta.end() || o.validity_samples > 0) return;
  double lo = 0, hi = 0;
  if (std::sscanf(it->second.c_str(), "%lf , %lf", &lo, &hi) != 2) return;
  o.validity_samples = 500;
  o.sample_lo = Eigen::VectorXd::Constant(pf.problem.n, lo);
  o.sample_hi = Eigen::VectorXd::Constant(pf.problem.n, hi);
}

struct CaseRun {
  CaseReport summary;
  GsipResult gsip;
  ConvexResult convex;
};

CaseRun run_case(const ProblemFile& pf, int index, const RunOptions& opts) {
  CaseRun out;
  out.summary.name = index < 0 ? "" : pf.cases[std::size_t(index)].name;
  auto t0 = clock_type::now();
  if (pf.mode == SolveMode::Gsip) {
    GsipOptions o = opts.gsip;
    sample_box(pf, o);
    out.gsip = solve_gsip(pf.with_case(index), o);
    out.summary.status = to_string(out.gsip.status);
    out.summary.x = out.gsip.x;
    out.summary.f = out.gsip.f;
    out.summary.loops = out.gsip.loops;
    out.summary.message = out.gsip.message;
  } else {
    out.convex = solve_convex(pf.convex_problem(index), pf.mode == SolveMode::ConvexLme, opts.convex);
    switch (out.convex.status) {
      case PopStatus::Optimal: out.summary.status = "optimal"; break;
      case PopStatus::Infeasible: out.summary.status = "infeasible"; break;
      default: out.summary.status = "numerical_failure"; break;
    }
    out.summary.x = out.convex.x;
    out.summary.f = out.convex.f;
    out.summary.loops = 1;
    if (out.convex.status != PopStatus::Optimal) out.summary.message = "kkt problem: " + to_string(out.convex.status);
  }
  out.summary.seconds = since(t0);
  return out;
}

}  // namespace

bool value_matches(double f, double f_ref, double tol) {
  if (!std::isfinite(f)) return false;
  double scale = std::abs(f_ref) > 10 ? std::abs(f_ref) : 1.0;
  return std::abs(f - f_ref) <= tol * scale;
}

RunReport run_problem(const ProblemFile& pf, const RunOptions& opts) {
  RunReport rep;
  rep.instance = pf.problem.name;
  rep.mode = to_string(pf.mode);
  rep.x_names = pf.x_names;
  rep.u_names = pf.u_names;
  std::vector<int> indices;
  if (pf.cases.empty())
    indices.push_back(-1);
  else
    for (int i = 0; i < int(pf.cases.size()); ++i) indices.push_back(i);

  std::vector<CaseRun> runs;
  for (int i : indices) {
    runs.push_back(run_case(pf, i, opts));
    rep.seconds += runs.back().summary.seconds;
    if (i >= 0) rep.cases.push_back(runs.back().summary);
  }

  // Best optimal case; otherwise infeasible when every case is, else the first failure.
  int best = -1;
  for (int i = 0; i < int(runs.size()); ++i)
    if (runs[i].summary.status == "optimal" && (best < 0 || runs[i].summary.f < runs[best].summary.f)) best = i;
  if (best < 0) {
    bool all_infeasible = true;
    for (const auto& r : runs) all_infeasible = all_infeasible && r.summary.status == "infeasible";
    best = 0;
    if (!all_infeasible)
      for (int i = 0; i < int(runs.size()); ++i)
        if (runs[i].summary.status != "infeasible") {
          best = i;
          break;
        }
  }
  const CaseRun& c = runs[best];
  rep.status = c.summary.status;
  rep.x = c.summary.x;
  rep.f = c.summary.f;
  rep.loops = c.summary.loops;
  rep.message = c.summary.message;
  rep.chosen_case = c.summary.name;
  if (pf.mode == SolveMode::Gsip) {
    rep.trace = c.gsip.trace;
    rep.g_final = c.gsip.g_min;
    rep.certified = c.gsip.certified;
  } else {
    rep.z = c.convex.z;
    rep.lambda = c.convex.lambda;
    if (!c.convex.g.empty()) {
      rep.g_final = c.convex.g[0];
      for (double v : c.convex.g) rep.g_final = std::min(rep.g_final, v);
    }
  }
  return rep;
}

RunReport run_instance(const CorpusEntry& e, const RunOptions& opts, int loop_slack) {
  RunReport rep;
  try {
    rep = run_problem(e.file, opts);
  } catch (const std::exception& ex) {
    rep.instance = e.file.problem.name;
    rep.status = "error";
    rep.message = ex.what();
  }
  rep.instance = e.id;
  rep.f_ref = e.f_ref();
  rep.loops_ref = e.loops_ref();
  rep.status_ref = e.status_ref();
  rep.compared = true;
  std::vector<std::string> why;
  if (rep.status != rep.status_ref) why.push_back("status " + rep.status + " (expected " + rep.status_ref + ")");
  if (rep.status_ref == "optimal" && rep.f_ref && !value_matches(rep.f, *rep.f_ref)) {
    std::ostringstream os;
    os << "f " << rep.f << " vs " << *rep.f_ref;
    why.push_back(os.str());
  }
  if (rep.loops_ref && std::abs(rep.loops - *rep.loops_ref) > loop_slack)
    why.push_back("loops " + std::to_string(rep.loops) + " vs " + std::to_string(*rep.loops_ref));
  rep.pass = why.empty();
  if (rep.pass) {
    rep.verdict = "pass";
  } else {
    rep.verdict = "fail:";
    for (const auto& w : why) rep.verdict += " " + w + ";";
    rep.verdict.pop_back();
  }
  return rep;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "-";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  double a = std::abs(v);
  if (a != 0.0 && (a < 1e-4 || a >= 1e6))
    std::snprintf(buf, sizeof buf, "%.1e", v);
  else
    std::snprintf(buf, sizeof buf, "%.4f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string vec(const Eigen::VectorXd& v) {
  if (v.size() == 0) return "-";
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    double x = v[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", std::abs(x) < 5e-5 ? 0.0 : x);
    s += buf;
  }
  return s + ")";
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string format_table(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << pad("instance", 20) << pad("status", 19) << pad("loops", 7) << pad("f*", 12) << pad("f_ref", 12)
     << pad("time[s]", 9) << "x* / verdict\n";
  for (const auto& r : reports) {
    os << pad(r.instance, 20) << pad(r.status, 19) << pad(std::to_string(r.loops), 7) << pad(fmt(r.f), 12)
       << pad(r.f_ref ? fmt(*r.f_ref) : "-", 12);
    char t[32];
    std::snprintf(t, sizeof t, "%.2f", r.seconds);
    os << pad(t, 9) << vec(r.x);
    if (r.compared) os << "  " << r.verdict;
    os << "\n";
  }
  return os.str();
}

std::string format_trace(const RunReport& r) {
  std::ostringstream os;
  os << r.instance;
  if (!r.chosen_case.empty()) os << " [case " << r.chosen_case << "]";
  os << "\n";
  if (r.trace.empty()) {
    os << "  x* = " << vec(r.x) << "  f* = " << fmt(r.f) << "\n";
    for (std::size_t j = 0; j < r.z.size(); ++j)
      os << "  z" << j + 1 << " = " << vec(r.z[j]) << "  lambda" << j + 1 << " = " << vec(r.lambda[j]) << "\n";
    return os.str();
  }
  os << "  k  x_k / u_k                                         f_k / g_k\n";
  for (const auto& t : r.trace) {
    os << "  " << pad(std::to_string(t.k), 3) << pad("x = " + vec(t.x_hat), 50) << "f = " << fmt(t.f_k) << "\n";
    for (std::size_t j = 0; j < t.lower.g_hat.size(); ++j) {
      std::string u = t.lower.u_hat[j].size() ? vec(t.lower.u_hat[j]) : "(U empty)";
      os << "     " << pad("u" + std::to_string(j + 1) + " = " + u, 50) << "g" << j + 1 << " = "
         << fmt(t.lower.g_hat[j]) << "\n";
    }
  }
  os << "  output: " << r.status << ", x* = " << vec(r.x) << ", f* = " << fmt(r.f) << ", g* = " << fmt(r.g_final)
     << "\n";
  return os.str();
}

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

json arr(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

}  // namespace

std::string to_json(const std::vector<RunReport>& reports, bool with_trace) {
  json all = json::array();
  for (const auto& r : reports) {
    json j;
    j["instance"] = r.instance;
    j["mode"] = r.mode;
    j["status"] = r.status;
    j["x"] = arr(r.x);
    j["f"] = num(r.f);
    j["g_final"] = num(r.g_final);
    j["loops"] = r.loops;
    j["seconds"] = r.seconds;
    j["certified"] = r.certified;
    j["message"] = r.message;
    j["x_names"] = r.x_names;
    j["u_names"] = r.u_names;
    if (!r.chosen_case.empty()) {
      j["case"] = r.chosen_case;
      json cs = json::array();
      for (const auto& c : r.cases)
        cs.push_back({{"name", c.name}, {"status", c.status}, {"x", arr(c.x)}, {"f", num(c.f)},
                      {"loops", c.loops}, {"seconds", c.seconds}, {"message", c.message}});
      j["cases"] = cs;
    }
    if (!r.z.empty()) {
      json z = json::array(), l = json::array();
      for (const auto& v : r.z) z.push_back(arr(v));
      for (const auto& v : r.lambda) l.push_back(arr(v));
      j["z"] = z;
      j["lambda"] = l;
    }
    if (r.compared) {
      j["f_ref"] = r.f_ref ? num(*r.f_ref) : json(nullptr);
      j["loops_ref"] = r.loops_ref ? json(*r.loops_ref) : json(nullptr);
      j["status_ref"] = r.status_ref;
      j["pass"] = r.pass;
      j["verdict"] = r.verdict;
    }
    if (with_trace) {
      json tr = json::array();
      for (const auto& t : r.trace) {
        json it;
        it["k"] = t.k;
        it["x"] = arr(t.x_hat);
        it["f"] = num(t.f_k);
        it["bound"] = num(t.bound);
        it["upper_certified"] = t.upper_certified;
        json u = json::array(), g = json::array();
        for (std::size_t q = 0; q < t.lower.g_hat.size(); ++q) {
          u.push_back(arr(t.lower.u_hat[q]));
          g.push_back(num(t.lower.g_hat[q]));
        }
        it["u"] = u;
        it["g"] = g;
        it["g_min"] = num(t.lower.g_min);
        it["labels"] = t.labels;
        json ex = json::array();
        for (const auto& e : t.extensions) {
          json q = json::array();
          for (const auto& p : e.q) q.push_back(p.to_string(r.x_names));
          ex.push_back({{"rule", e.rule}, {"degree", e.degree}, {"validity", num(e.validity)}, {"q", q}});
        }
        it["extensions"] = ex;
        it["seconds"] = t.seconds;
        tr.push_back(it);
      }
      j["trace"] = tr;
    }
    all.push_back(j);
  }
  return all.dump(2);
}

}  // namespace gsip
