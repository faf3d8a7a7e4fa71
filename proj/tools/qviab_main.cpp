// qviab command-line front end. Talks to the library only through qviab.h.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qviab/qviab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;

struct Failure {
  std::string what;
};

void check(qv_status s, const char* context) {
  if (s != QV_OK) {
    throw Failure{std::string(context) + ": " + qv_status_name(s) + ": " + qv_last_error()};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{"cannot write " + path};
  out << text;
  if (!out.flush()) throw Failure{"write failed: " + path};
}

// Text sink: the global --out path if set, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_file(out_path, text);
  }
}

std::string take(char* s) {
  std::string out(s ? s : "");
  qv_string_free(s);
  return out;
}

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dist = std::unique_ptr<qv_distribution, Deleter<qv_distribution, qv_distribution_free>>;
using Problem = std::unique_ptr<qv_problem, Deleter<qv_problem, qv_problem_free>>;
using Result = std::unique_ptr<qv_match_result, Deleter<qv_match_result, qv_match_result_free>>;
using Report = std::unique_ptr<qv_report, Deleter<qv_report, qv_report_free>>;
using Sweep = std::unique_ptr<qv_sweep, Deleter<qv_sweep, qv_sweep_free>>;

struct Globals {
  double tol = 1e-9;
  unsigned long long seed = 0;  // nothing in the CLI draws random numbers yet
  std::string out;
};

struct SweepArgs {
  double theta_min = 0.0;
  double theta_max = 6.283185307179586;
  std::size_t steps = 1000;
};

int run_sweep(const Globals& g, const SweepArgs& a) {
  qv_sweep* raw = nullptr;
  check(qv_eprb_sweep(a.theta_min, a.theta_max, a.steps, g.tol, &raw), "eprb-sweep");
  Sweep sweep(raw);
  char* csv = nullptr;
  check(qv_sweep_to_csv(sweep.get(), &csv), "eprb-sweep");
  emit(g.out, take(csv));
  return kExitOk;
}

struct ViabilityArgs {
  std::string input;
  std::string subsets;
  std::string mode;
  std::string report;
};

int run_viability(const Globals& g, const ViabilityArgs& a) {
  qv_distribution* qraw = nullptr;
  check(qv_distribution_from_json(read_file(a.input).c_str(), &qraw), "reading distribution");
  Dist q(qraw);

  std::string subsets_json;
  if (!a.subsets.empty()) subsets_json = read_file(a.subsets);
  qv_mode mode = subsets_json.empty() ? QV_MODE_ALL_POSITIVE : QV_MODE_SPECIFIED;
  if (a.mode == "all-positive") mode = QV_MODE_ALL_POSITIVE;
  if (a.mode == "specified") mode = QV_MODE_SPECIFIED;
  if (mode == QV_MODE_SPECIFIED && subsets_json.empty()) throw Failure{"--mode specified needs --subsets"};

  qv_report* rraw = nullptr;
  check(qv_viability_test(q.get(), mode, subsets_json.empty() ? nullptr : subsets_json.c_str(), g.tol, &rraw),
        "viability");
  Report report(rraw);
  char* text = nullptr;
  check(qv_report_to_json(report.get(), &text), "viability");
  std::string doc = take(text) + "\n";
  if (!a.report.empty()) {
    write_file(a.report, doc);
  } else {
    emit(g.out, doc);
  }
  if (!a.report.empty() || !g.out.empty()) {
    std::printf("%s\n", qv_report_status(report.get()) == QV_VIABLE       ? "Viable"
                        : qv_report_status(report.get()) == QV_NON_VIABLE ? "NonViable"
                                                                          : "Unknown");
  }
  return qv_report_status(report.get()) == QV_NON_VIABLE ? kExitVerdict : kExitOk;
}

struct MatchArgs {
  std::string input;
  std::string witness_out;
};

int run_match(const Globals& g, const MatchArgs& a) {
  qv_problem* praw = nullptr;
  check(qv_problem_from_json(read_file(a.input).c_str(), &praw), "reading problem");
  Problem prob(praw);
  qv_match_result* rraw = nullptr;
  check(qv_match_solve(prob.get(), g.tol, &rraw), "match");
  Result result(rraw);

  char* text = nullptr;
  check(qv_match_result_to_json(result.get(), &text), "match");
  emit(g.out, take(text) + "\n");
  if (!qv_match_result_feasible(result.get())) return kExitVerdict;
  if (!a.witness_out.empty()) {
    qv_distribution* wraw = nullptr;
    check(qv_match_result_witness(result.get(), &wraw), "match");
    Dist w(wraw);
    char* wtext = nullptr;
    check(qv_distribution_to_json(w.get(), &wtext), "match");
    write_file(a.witness_out, take(wtext) + "\n");
  }
  return kExitOk;
}

struct FineArgs {
  bool bell = false;
  std::optional<double> c12, c13, c14, c23, c24;
};

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw CLI::RequiredError(flag);
  return *v;
}

int run_fine(const Globals& g, const FineArgs& a) {
  double s[4];
  int ok = 0;
  if (a.bell) {
    const double c12 = need(a.c12, "--c12"), c13 = need(a.c13, "--c13"), c23 = need(a.c23, "--c23");
    check(qv_bell_values(c12, c13, c23, s), "fine");
    check(qv_bell_satisfied(c12, c13, c23, g.tol, &ok), "fine");
  } else {
    const double c13 = need(a.c13, "--c13"), c14 = need(a.c14, "--c14");
    const double c23 = need(a.c23, "--c23"), c24 = need(a.c24, "--c24");
    check(qv_chsh_values(c13, c14, c23, c24, s), "fine");
    check(qv_chsh_satisfied(c13, c14, c23, c24, g.tol, &ok), "fine");
  }
  std::string text;
  for (int k = 0; k < 4; ++k) text += "S" + std::to_string(k + 1) + " " + g12(s[k]) + "\n";
  text += ok ? "PASS\n" : "FAIL\n";
  emit(g.out, text);
  return ok ? kExitOk : kExitVerdict;
}

std::string vec3(const double v[3]) { return "(" + g12(v[0]) + ", " + g12(v[1]) + ", " + g12(v[2]) + ")"; }

int run_diosi(const Globals& g, std::size_t grid) {
  if (grid < 2) throw Failure{"--grid must be at least 2"};
  qv_diosi_counterexample cx{};
  int found = 0;
  check(qv_diosi_demo(grid, grid / 2, 1e-3, &cx, &found), "diosi-demo");
  if (!found) {
    emit(g.out, "no counterexample on this grid\n");
    return kExitVerdict;
  }
  std::string text;
  text += "Re z_A " + g12(cx.re_a) + "\n";
  text += "Re z_B " + g12(cx.re_b) + "\n";
  text += "Re z_A z_B " + g12(cx.re_ab) + "\n";
  text += "z_A " + g12(cx.re_a) + " " + g12(cx.im_a) + "i\n";
  text += "z_B " + g12(cx.re_b) + " " + g12(cx.im_b) + "i\n";
  text += "A first " + vec3(cx.dir_a_first) + " second " + vec3(cx.dir_a_second) + "\n";
  text += "B first " + vec3(cx.dir_b_first) + " second " + vec3(cx.dir_b_second) + "\n";
  emit(g.out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-probability viability tools"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--tol", g.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output file (stdout if omitted)");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("eprb-sweep", "singlet quasi-probability sweep as CSV");
  sw->fallthrough();
  sw->add_option("--theta-min", sweep.theta_min);
  sw->add_option("--theta-max", sweep.theta_max);
  sw->add_option("--steps", sweep.steps)->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));

  ViabilityArgs via;
  auto* vi = app.add_subcommand("viability", "viability test of a quasi-distribution");
  vi->fallthrough();
  vi->add_option("--input", via.input, "distribution JSON")->required();
  vi->add_option("--subsets", via.subsets, "JSON list of 1-based subsets");
  vi->add_option("--mode", via.mode)->check(CLI::IsMember({"all-positive", "specified"}));
  vi->add_option("--report", via.report, "report JSON path");

  MatchArgs match;
  auto* ma = app.add_subcommand("match", "find a probability matching given marginals");
  ma->fallthrough();
  ma->add_option("--input", match.input, "problem JSON")->required();
  ma->add_option("--witness-out", match.witness_out);

  FineArgs fine;
  auto* fi = app.add_subcommand("fine", "CHSH or Bell inequality check");
  fi->fallthrough();
  fi->add_flag("--bell", fine.bell);
  fi->add_option("--c12", fine.c12);
  fi->add_option("--c13", fine.c13);
  fi->add_option("--c14", fine.c14);
  fi->add_option("--c23", fine.c23);
  fi->add_option("--c24", fine.c24);

  std::size_t grid = 24;
  auto* di = app.add_subcommand("diosi-demo", "subsystem independence counterexample");
  di->fallthrough();
  di->add_option("--grid", grid, "azimuthal steps; polar steps are half");

  try {
    app.parse(argc, argv);
    if (*sw) return run_sweep(g, sweep);
    if (*vi) return run_viability(g, via);
    if (*ma) return run_match(g, match);
    if (*fi) return run_fine(g, fine);
    if (*di) return run_diosi(g, grid);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.what.c_str());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
