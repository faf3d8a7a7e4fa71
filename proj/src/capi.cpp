#include "qviab/qviab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qviab/composite.hpp"
#include "qviab/correl.hpp"
#include "qviab/eprb.hpp"
#include "qviab/error.hpp"
#include "qviab/fine.hpp"
#include "qviab/json_io.hpp"
#include "qviab/lpmatch.hpp"
#include "qviab/viability.hpp"

struct qv_distribution {
  qviab::QuasiDistribution q;
};

struct qv_problem {
  qviab::lpmatch::MatchingProblem p;
};

struct qv_match_result {
  qviab::lpmatch::MatchingResult r;
};

struct qv_report {
  qviab::viability::ViabilityReport r;
};

struct qv_sweep {
  std::vector<qviab::eprb::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

qv_status fail(qv_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Wraps a call so that no exception crosses the C boundary.
template <class Fn>
qv_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return QV_OK;
  } catch (const qviab::Error& e) {
    return fail(static_cast<qv_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QV_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define QV_REQUIRE(ptr) \
  if ((ptr) == nullptr) return fail(QV_ERR_NULL_ARGUMENT, #ptr " is null")

}  // namespace

extern "C" {

const char* qv_version(void) { return "1.0.0"; }

const char* qv_status_name(qv_status status) {
  switch (status) {
    case QV_OK: return "OK";
    case QV_ERR_NULL_ARGUMENT: return "NullArgument";
    case QV_ERR_INTERNAL: return "Internal";
    default:
      if (status >= QV_ERR_INVALID_ARGUMENT && status <= QV_ERR_PARSE) {
        return qviab::error_code_name(static_cast<qviab::ErrorCode>(status)).data();
      }
      return "Unknown";
  }
}

const char* qv_last_error(void) { return g_last_error.c_str(); }

void qv_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------------------
// distributions

qv_status qv_distribution_create(size_t num_vars, const char* const* labels, const size_t* arities,
                                 const double* values, size_t num_values, qv_distribution** out) {
  QV_REQUIRE(arities);
  QV_REQUIRE(values);
  QV_REQUIRE(out);
  return guarded([&] {
    std::vector<qviab::Variable> vars;
    for (size_t i = 0; i < num_vars; ++i) {
      vars.push_back({labels && labels[i] ? labels[i] : "s" + std::to_string(i + 1), arities[i]});
    }
    qviab::OutcomeSpace space(std::move(vars));
    *out = new qv_distribution{qviab::make_distribution(std::move(space), std::vector<double>(values, values + num_values))};
  });
}

qv_status qv_distribution_from_json(const char* json, qv_distribution** out) {
  QV_REQUIRE(json);
  QV_REQUIRE(out);
  return guarded([&] { *out = new qv_distribution{qviab::io::distribution_from_json(json)}; });
}

qv_status qv_distribution_to_json(const qv_distribution* q, char** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::io::distribution_to_json(q->q)); });
}

void qv_distribution_free(qv_distribution* q) { delete q; }

size_t qv_distribution_num_vars(const qv_distribution* q) { return q ? q->q.space().num_variables() : 0; }

size_t qv_distribution_num_cells(const qv_distribution* q) { return q ? q->q.space().cell_count() : 0; }

size_t qv_distribution_values(const qv_distribution* q, double* out, size_t capacity) {
  if (!q) return 0;
  const auto v = q->q.values();
  if (out) std::memcpy(out, v.data(), std::min(capacity, v.size()) * sizeof(double));
  return v.size();
}

qv_status qv_marginalize(const qv_distribution* q, const size_t* subset, size_t subset_len, qv_distribution** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(subset);
  QV_REQUIRE(out);
  return guarded([&] {
    auto m = qviab::marginalize(q->q, std::span<const size_t>(subset, subset_len));
    *out = new qv_distribution{std::move(m.dist)};
  });
}

qv_status qv_is_probability(const qv_distribution* q, double tol, int* out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  return guarded([&] { *out = qviab::is_probability(q->q, tol) ? 1 : 0; });
}

qv_status qv_product_of_singles(const qv_distribution* q, double tol, qv_distribution** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  return guarded([&] { *out = new qv_distribution{qviab::product_of_singles(q->q, tol)}; });
}

qv_status qv_positive_marginals_json(const qv_distribution* q, double tol, char** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::io::subsets_to_json(qviab::positive_marginals(q->q, tol))); });
}

qv_status qv_expand_json(const qv_distribution* q, char** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::io::coefficients_to_json(qviab::correl::expand(q->q))); });
}

qv_status qv_reconstruct_json(const char* coefficients_json, qv_distribution** out) {
  QV_REQUIRE(coefficients_json);
  QV_REQUIRE(out);
  return guarded([&] {
    *out = new qv_distribution{qviab::correl::reconstruct(qviab::io::coefficients_from_json(coefficients_json))};
  });
}

// ---------------------------------------------------------------------------
// closed-form criteria

qv_status qv_chsh_values(double c13, double c14, double c23, double c24, double out[4]) {
  QV_REQUIRE(out);
  return guarded([&] {
    const auto s = qviab::fine::chsh_values({c13, c14, c23, c24});
    std::copy(s.begin(), s.end(), out);
  });
}

qv_status qv_chsh_satisfied(double c13, double c14, double c23, double c24, double tol, int* out) {
  QV_REQUIRE(out);
  return guarded([&] { *out = qviab::fine::chsh_satisfied({c13, c14, c23, c24}, tol) ? 1 : 0; });
}

qv_status qv_bell_values(double c12, double c13, double c23, double out[4]) {
  QV_REQUIRE(out);
  return guarded([&] {
    const auto s = qviab::fine::bell_values({c12, c13, c23});
    std::copy(s.begin(), s.end(), out);
  });
}

qv_status qv_bell_satisfied(double c12, double c13, double c23, double tol, int* out) {
  QV_REQUIRE(out);
  return guarded([&] { *out = qviab::fine::bell_satisfied({c12, c13, c23}, tol) ? 1 : 0; });
}

// ---------------------------------------------------------------------------
// marginal matching

qv_status qv_problem_from_json(const char* json, qv_problem** out) {
  QV_REQUIRE(json);
  QV_REQUIRE(out);
  return guarded([&] { *out = new qv_problem{qviab::io::problem_from_json(json)}; });
}

void qv_problem_free(qv_problem* p) { delete p; }

qv_status qv_match_solve(const qv_problem* p, double tol, qv_match_result** out) {
  QV_REQUIRE(p);
  QV_REQUIRE(out);
  return guarded([&] { *out = new qv_match_result{qviab::lpmatch::solve(p->p, tol)}; });
}

void qv_match_result_free(qv_match_result* r) { delete r; }

int qv_match_result_feasible(const qv_match_result* r) { return r && r->r.feasible() ? 1 : 0; }

double qv_match_result_residual(const qv_match_result* r) { return r ? r->r.residual : NAN; }

double qv_match_result_objective(const qv_match_result* r) { return r ? r->r.phase1_objective : NAN; }

qv_status qv_match_result_witness(const qv_match_result* r, qv_distribution** out) {
  QV_REQUIRE(r);
  QV_REQUIRE(out);
  if (!r->r.witness) return fail(QV_ERR_INVALID_ARGUMENT, "result is infeasible; no witness");
  return guarded([&] { *out = new qv_distribution{*r->r.witness}; });
}

qv_status qv_match_result_to_json(const qv_match_result* r, char** out) {
  QV_REQUIRE(r);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::io::match_result_to_json(r->r)); });
}

qv_status qv_match_verify(const qv_distribution* witness, const qv_problem* p, double tol, double* max_residual,
                          int* passed) {
  QV_REQUIRE(witness);
  QV_REQUIRE(p);
  return guarded([&] {
    const auto rep = qviab::lpmatch::verify(witness->q, p->p, tol);
    if (max_residual) *max_residual = rep.max_residual;
    if (passed) *passed = rep.passed ? 1 : 0;
  });
}

// ---------------------------------------------------------------------------
// viability

qv_status qv_viability_test(const qv_distribution* q, qv_mode mode, const char* subsets_json, double tol,
                            qv_report** out) {
  QV_REQUIRE(q);
  QV_REQUIRE(out);
  if (mode == QV_MODE_SPECIFIED && subsets_json == nullptr) {
    return fail(QV_ERR_NULL_ARGUMENT, "specified mode needs a subset list");
  }
  return guarded([&] {
    qviab::viability::ViabilityOptions opts;
    opts.tol = tol;
    opts.mode = mode == QV_MODE_SPECIFIED ? qviab::viability::Mode::kSpecified : qviab::viability::Mode::kAllPositive;
    if (opts.mode == qviab::viability::Mode::kSpecified) opts.subsets = qviab::io::subsets_from_json(subsets_json);
    *out = new qv_report{qviab::viability::viability_test(q->q, opts)};
  });
}

void qv_report_free(qv_report* r) { delete r; }

qv_viability qv_report_status(const qv_report* r) {
  if (!r) return QV_UNKNOWN;
  switch (r->r.status) {
    case qviab::viability::Status::kViable: return QV_VIABLE;
    case qviab::viability::Status::kNonViable: return QV_NON_VIABLE;
    case qviab::viability::Status::kUnknown: return QV_UNKNOWN;
  }
  return QV_UNKNOWN;
}

qv_status qv_report_to_json(const qv_report* r, char** out) {
  QV_REQUIRE(r);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::io::report_to_json(r->r)); });
}

qv_status qv_report_recheck(const char* report_json, const qv_distribution* q, int* ok) {
  QV_REQUIRE(report_json);
  QV_REQUIRE(q);
  QV_REQUIRE(ok);
  return guarded([&] {
    const auto rep = qviab::io::report_from_json(report_json);
    bool good = true;
    if (rep.inequality) {
      good = std::abs(qviab::viability::recheck(q->q, *rep.inequality) - rep.inequality->value) <= 1e-9;
    }
    *ok = good ? 1 : 0;
  });
}

// ---------------------------------------------------------------------------
// singlet example

double qv_eprb_q_pppp(double theta) { return qviab::eprb::q_pppp(theta); }

void qv_eprb_chsh_reduced(double theta, double* g1, double* g2) {
  const auto g = qviab::eprb::chsh_reduced(theta);
  if (g1) *g1 = g.g1;
  if (g2) *g2 = g.g2;
}

qv_status qv_eprb_distribution(double theta, qv_distribution** out) {
  QV_REQUIRE(out);
  return guarded([&] {
    *out = new qv_distribution{qviab::eprb::trace_distribution(qviab::eprb::make_config(theta))};
  });
}

qv_status qv_eprb_sweep(double theta_min, double theta_max, size_t steps, double tol, qv_sweep** out) {
  QV_REQUIRE(out);
  return guarded([&] { *out = new qv_sweep{qviab::eprb::sweep(theta_min, theta_max, steps, tol)}; });
}

void qv_sweep_free(qv_sweep* s) { delete s; }

size_t qv_sweep_num_rows(const qv_sweep* s) { return s ? s->rows.size() : 0; }

qv_status qv_sweep_row_at(const qv_sweep* s, size_t i, qv_sweep_row* out) {
  QV_REQUIRE(s);
  QV_REQUIRE(out);
  if (i >= s->rows.size()) return fail(QV_ERR_BAD_INDEX, "row index out of range");
  const auto& r = s->rows[i];
  *out = {r.theta, r.q_pppp, r.q_pppp_x4, r.g1, r.g2, r.chsh_ok, r.lin_pos_ok, r.lp_feasible};
  return QV_OK;
}

qv_status qv_sweep_to_csv(const qv_sweep* s, char** out) {
  QV_REQUIRE(s);
  QV_REQUIRE(out);
  return guarded([&] { *out = dup_string(qviab::eprb::sweep_csv(s->rows)); });
}

// ---------------------------------------------------------------------------
// composite systems

qv_status qv_diosi_demo(size_t azimuthal, size_t polar, double margin, qv_diosi_counterexample* out, int* found) {
  QV_REQUIRE(out);
  QV_REQUIRE(found);
  return guarded([&] {
    const auto demo = qviab::composite::default_diosi_demo({azimuthal, polar}, margin);
    *found = demo ? 1 : 0;
    if (!demo) return;
    const auto& cx = demo->counterexample;
    *out = {};
    out->re_a = cx.z_a.real();
    out->im_a = cx.z_a.imag();
    out->re_b = cx.z_b.real();
    out->im_b = cx.z_b.imag();
    out->re_ab = cx.re_ab;
    for (int k = 0; k < 3; ++k) {
      out->dir_a_first[k] = demo->directions_a.first[k];
      out->dir_a_second[k] = demo->directions_a.second[k];
      out->dir_b_first[k] = demo->directions_b.first[k];
      out->dir_b_second[k] = demo->directions_b.second[k];
    }
  });
}

qv_status qv_diosi_check(const qv_problem* a, const qv_problem* b, double tol, double* residual, int* passed) {
  QV_REQUIRE(a);
  QV_REQUIRE(b);
  return guarded([&] {
    const auto rep = qviab::composite::diosi_check(a->p, b->p, tol);
    if (residual) *residual = rep.residual;
    if (passed) *passed = rep.passed ? 1 : 0;
  });
}

}  // extern "C"
