/*
 * qviab C interface.
 *
 * Objects are opaque handles created by qv_*_create / *_from_json / solver
 * calls and released with the matching qv_*_free. Every fallible call returns
 * a qv_status; on failure a human-readable message is available from
 * qv_last_error() on the calling thread until its next API call. Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with qv_string_free.
 *
 * Variable indices are 0-based in this interface; JSON documents use 1-based
 * subsets.
 */
#ifndef QVIAB_QVIAB_H
#define QVIAB_QVIAB_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QVIAB_BUILDING)
#    define QV_API __declspec(dllexport)
#  else
#    define QV_API __declspec(dllimport)
#  endif
#else
#  define QV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qv_status {
  QV_OK = 0,
  QV_ERR_INVALID_ARGUMENT = 1,
  QV_ERR_LENGTH_MISMATCH,
  QV_ERR_NOT_NORMALIZED,
  QV_ERR_BAD_SUBSET,
  QV_ERR_CAP_EXCEEDED,
  QV_ERR_NEGATIVE_SINGLE,
  QV_ERR_BAD_PARTITION,
  QV_ERR_SPACE_MISMATCH,
  QV_ERR_NOT_BINARY,
  QV_ERR_BAD_INDEX,
  QV_ERR_MISSING_COEFFICIENT,
  QV_ERR_OUT_OF_RANGE,
  QV_ERR_INCONSISTENT_TARGETS,
  QV_ERR_NOT_UNIT,
  QV_ERR_BAD_SIGN,
  QV_ERR_DIM_MISMATCH,
  QV_ERR_NOT_HERMITIAN,
  QV_ERR_NOT_PROJECTOR,
  QV_ERR_NOT_DENSITY,
  QV_ERR_NON_POSITIVE_SPECIFIED_MARGINAL,
  QV_ERR_COMPONENT_INFEASIBLE,
  QV_ERR_PARSE,
  QV_ERR_NULL_ARGUMENT = 100,
  QV_ERR_INTERNAL = 101
} qv_status;

typedef struct qv_distribution qv_distribution;
typedef struct qv_problem qv_problem;
typedef struct qv_match_result qv_match_result;
typedef struct qv_report qv_report;
typedef struct qv_sweep qv_sweep;

QV_API const char* qv_version(void);
QV_API const char* qv_status_name(qv_status status);
QV_API const char* qv_last_error(void);
QV_API void qv_string_free(char* s);

/* ---- distributions ---------------------------------------------------- */

/* labels may be NULL (variables are then named s1..sn). */
QV_API qv_status qv_distribution_create(size_t num_vars, const char* const* labels, const size_t* arities,
                                        const double* values, size_t num_values, qv_distribution** out);
QV_API qv_status qv_distribution_from_json(const char* json, qv_distribution** out);
QV_API qv_status qv_distribution_to_json(const qv_distribution* q, char** out);
QV_API void qv_distribution_free(qv_distribution* q);

QV_API size_t qv_distribution_num_vars(const qv_distribution* q);
QV_API size_t qv_distribution_num_cells(const qv_distribution* q);
/* Copies min(capacity, num_cells) values; returns num_cells. */
QV_API size_t qv_distribution_values(const qv_distribution* q, double* out, size_t capacity);

QV_API qv_status qv_marginalize(const qv_distribution* q, const size_t* subset, size_t subset_len,
                                qv_distribution** out);
QV_API qv_status qv_is_probability(const qv_distribution* q, double tol, int* out);
QV_API qv_status qv_product_of_singles(const qv_distribution* q, double tol, qv_distribution** out);
/* JSON list of maximal positive subsets (1-based). */
QV_API qv_status qv_positive_marginals_json(const qv_distribution* q, double tol, char** out);
/* Parity coefficients of a binary distribution as coefficient JSON. */
QV_API qv_status qv_expand_json(const qv_distribution* q, char** out);
QV_API qv_status qv_reconstruct_json(const char* coefficients_json, qv_distribution** out);

/* ---- closed-form criteria --------------------------------------------- */

QV_API qv_status qv_chsh_values(double c13, double c14, double c23, double c24, double out[4]);
QV_API qv_status qv_chsh_satisfied(double c13, double c14, double c23, double c24, double tol, int* out);
QV_API qv_status qv_bell_values(double c12, double c13, double c23, double out[4]);
QV_API qv_status qv_bell_satisfied(double c12, double c13, double c23, double tol, int* out);

/* ---- marginal matching ------------------------------------------------ */

QV_API qv_status qv_problem_from_json(const char* json, qv_problem** out);
QV_API void qv_problem_free(qv_problem* p);
QV_API qv_status qv_match_solve(const qv_problem* p, double tol, qv_match_result** out);
QV_API void qv_match_result_free(qv_match_result* r);
QV_API int qv_match_result_feasible(const qv_match_result* r);
QV_API double qv_match_result_residual(const qv_match_result* r);
QV_API double qv_match_result_objective(const qv_match_result* r);
/* QV_ERR_INVALID_ARGUMENT when the result is infeasible. */
QV_API qv_status qv_match_result_witness(const qv_match_result* r, qv_distribution** out);
QV_API qv_status qv_match_result_to_json(const qv_match_result* r, char** out);
/* Max residual of `witness` against the problem's constraints. */
QV_API qv_status qv_match_verify(const qv_distribution* witness, const qv_problem* p, double tol,
                                 double* max_residual, int* passed);

/* ---- viability -------------------------------------------------------- */

typedef enum qv_mode { QV_MODE_ALL_POSITIVE = 0, QV_MODE_SPECIFIED = 1 } qv_mode;
typedef enum qv_viability { QV_VIABLE = 0, QV_NON_VIABLE = 1, QV_UNKNOWN = 2 } qv_viability;

/* subsets_json (1-based subset lists) is required in specified mode and
 * ignored otherwise. */
QV_API qv_status qv_viability_test(const qv_distribution* q, qv_mode mode, const char* subsets_json, double tol,
                                   qv_report** out);
QV_API void qv_report_free(qv_report* r);
QV_API qv_viability qv_report_status(const qv_report* r);
QV_API qv_status qv_report_to_json(const qv_report* r, char** out);
/* Validates a report document and re-evaluates its inequality certificate
 * (if any) against q. *ok is 1 when the document is well formed and every
 * certificate reproduces within 1e-9. */
QV_API qv_status qv_report_recheck(const char* report_json, const qv_distribution* q, int* ok);

/* ---- singlet example -------------------------------------------------- */

typedef struct qv_sweep_row {
  double theta;
  double q_pppp;
  double q_pppp_x4;
  double g1;
  double g2;
  int chsh_ok;
  int lin_pos_ok;
  int lp_feasible;
} qv_sweep_row;

QV_API double qv_eprb_q_pppp(double theta);
QV_API void qv_eprb_chsh_reduced(double theta, double* g1, double* g2);
/* Trace-based 16-cell quasi-probability for the coplanar configuration. */
QV_API qv_status qv_eprb_distribution(double theta, qv_distribution** out);
QV_API qv_status qv_eprb_sweep(double theta_min, double theta_max, size_t steps, double tol, qv_sweep** out);
QV_API void qv_sweep_free(qv_sweep* s);
QV_API size_t qv_sweep_num_rows(const qv_sweep* s);
QV_API qv_status qv_sweep_row_at(const qv_sweep* s, size_t i, qv_sweep_row* out);
QV_API qv_status qv_sweep_to_csv(const qv_sweep* s, char** out);

/* ---- composite systems ------------------------------------------------ */

typedef struct qv_diosi_counterexample {
  double re_a, im_a;
  double re_b, im_b;
  double re_ab;
  double dir_a_first[3], dir_a_second[3];
  double dir_b_first[3], dir_b_second[3];
} qv_diosi_counterexample;

/* Grid scan over two-projector strings on the +z spin state. *found is 0
 * when no pair beats `margin`. */
QV_API qv_status qv_diosi_demo(size_t azimuthal, size_t polar, double margin, qv_diosi_counterexample* out,
                               int* found);
QV_API qv_status qv_diosi_check(const qv_problem* a, const qv_problem* b, double tol, double* residual,
                                int* passed);

#ifdef __cplusplus
}
#endif

#endif /* QVIAB_QVIAB_H */
