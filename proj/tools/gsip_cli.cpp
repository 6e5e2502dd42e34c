#include "gsip/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

using namespace gsip;

namespace {

struct Flags {
  double eps = 1e-6;
  int max_loops = 30;
  int order_cap = 0;
  double rank_tol = 1e-6;
  bool slow = false;
  bool trace = false;
  std::string emit;
  int jobs = 1;
  int loop_slack = 2;
};

RunOptions options_from(const Flags& f) {
  RunOptions o;
  o.gsip.eps = f.eps;
  o.gsip.max_loops = f.max_loops;
  for (PopOptions* p : {&o.gsip.upper, &o.gsip.lower, &o.convex}) {
    p->k_max = f.order_cap;
    p->rank_tol = f.rank_tol;
  }
  return o;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--eps", f.eps, "Feasibility tolerance on min g");
  cmd->add_option("--max-loops", f.max_loops, "Loop cap of the extension method");
  cmd->add_option("--order-cap", f.order_cap, "Largest relaxation order (0: d0 + 3)");
  cmd->add_option("--rank-tol", f.rank_tol, "Singular value cutoff in flat truncation");
  cmd->add_option("--emit", f.emit, "Write the JSON report to this path");
  cmd->add_flag("--trace", f.trace, "Print the per-loop table");
}

void emit(const Flags& f, const std::vector<RunReport>& reports) {
  if (f.trace)
    for (const auto& r : reports) std::cout << format_trace(r) << "\n";
  std::cout << format_table(reports);
  if (!f.emit.empty()) {
    std::ofstream out(f.emit);
    if (!out) throw std::runtime_error("cannot write " + f.emit);
    out << to_json(reports, true) << "\n";
  }
}

// Corpus runs pass by comparison; files pass when the solver reaches a definite answer.
bool passed(const RunReport& r) {
  return r.compared ? r.pass : (r.status == "optimal" || r.status == "infeasible");
}

std::vector<RunReport> run_entries(const std::vector<const CorpusEntry*>& entries, const Flags& f) {
  std::vector<RunReport> reports(entries.size());
  RunOptions opts = options_from(f);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < entries.size();) {
      reports[i] = run_instance(*entries[i], opts, f.loop_slack);
      std::cerr << "  " << entries[i]->id << ": " << reports[i].verdict << " (" << reports[i].seconds << " s)\n";
    }
  };
  int jobs = std::max(1, std::min<int>(f.jobs, int(entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return reports;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial GSIP solver"};
  app.require_subcommand(1);
  Flags f;

  std::string target;
  auto* run = app.add_subcommand("run", "Solve a corpus instance (corpus:<id>) or a problem file");
  run->add_option("target", target, "corpus:<id> or path")->required();
  add_common(run, f);

  std::string suite_name;
  auto* bench = app.add_subcommand("bench", "Run a suite and compare with the stored values");
  bench->add_option("suite", suite_name, "sec6 | appendixA | appendixB | all")->required();
  bench->add_flag("--slow", f.slow, "Include instances tagged slow");
  bench->add_option("-j,--jobs", f.jobs, "Instances solved in parallel");
  bench->add_option("--loop-slack", f.loop_slack, "Allowed loop count difference");
  add_common(bench, f);

  auto* list = app.add_subcommand("list", "List corpus instances");
  std::string print_target;
  auto* print = app.add_subcommand("print", "Print a problem in canonical form");
  print->add_option("target", print_target, "corpus:<id> or path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& e : corpus())
        std::cout << e.id << "  [" << e.suite << (e.slow ? ", slow" : "") << "]  "
                  << (e.file.meta.count("source") ? e.file.meta.at("source") : "") << "\n";
      return 0;
    }
    auto load = [](const std::string& t, const CorpusEntry*& entry) -> ProblemFile {
      if (t.rfind("corpus:", 0) == 0) {
        entry = find_instance(t.substr(7));
        if (!entry) throw CLI::ValidationError("unknown instance " + t.substr(7));
        return entry->file;
      }
      return load_problem(t);
    };
    if (*print) {
      const CorpusEntry* e = nullptr;
      std::cout << print_problem(load(print_target, e));
      return 0;
    }
    if (*run) {
      const CorpusEntry* e = nullptr;
      ProblemFile pf = load(target, e);
      std::vector<RunReport> reports;
      if (e)
        reports = run_entries({e}, f);
      else
        reports.push_back(run_problem(pf, options_from(f)));
      emit(f, reports);
      if (!reports[0].message.empty()) std::cerr << reports[0].message << "\n";
      return passed(reports[0]) ? 0 : 1;
    }
    std::vector<const CorpusEntry*> entries;
    try {
      entries = suite(suite_name, f.slow);
    } catch (const std::exception& ex) {
      std::cerr << ex.what() << "\n" << bench->help();
      return 2;
    }
    auto reports = run_entries(entries, f);
    emit(f, reports);
    int ok = int(std::count_if(reports.begin(), reports.end(), passed));
    std::cout << ok << "/" << reports.size() << " passed\n";
    return ok == int(reports.size()) ? 0 : 1;
  } catch (const CLI::ValidationError& ex) {
    std::cerr << ex.what() << "\n";
    return 2;
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
