/* C interface to the qphase library. All functions return a qp_status; on
 * failure qp_last_error() holds a message for the calling thread. Strings
 * returned through char** are heap-allocated and released with
 * qp_string_free. Handles are released with their matching _free call;
 * passing NULL to a _free function is a no-op. */
#ifndef QPHASE_QPHASE_H
#define QPHASE_QPHASE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QPHASE_BUILDING)
#define QP_API __declspec(dllexport)
#else
#define QP_API __declspec(dllimport)
#endif
#else
#define QP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qp_status {
  QP_OK = 0,
  QP_INVALID_ARGUMENT = 1,
  QP_RESOLUTION_EXCEEDED = 2,
  QP_CONVERGENCE_FAILURE = 3,
  QP_BRACKET_ERROR = 4,
  QP_DEGENERATE_INPUT = 5,
  QP_NUMERICAL_CONSISTENCY = 6,
  QP_INSUFFICIENT_DATA = 7,
  QP_UNREACHABLE_ACCURACY = 8,
  QP_OUT_OF_RANGE = 9,
  QP_SINGULAR_POINT = 10,
  QP_SOLUTION_REJECTED = 11,
  QP_INTERNAL_ERROR = 12
} qp_status;

typedef struct qp_wavefn qp_wavefn;
typedef struct qp_state qp_state;
typedef struct qp_design qp_design;

QP_API const char* qp_last_error(void);
QP_API const char* qp_status_string(qp_status status);
QP_API const char* qp_version(void);
QP_API void qp_string_free(char* s);

/* Wave functions. grid_points = 0 selects the 512-node Gauss-Legendre grid.
 * name is one of constant, dirichlet (uses m), bump_g3, prolate (uses R). */
QP_API qp_status qp_wavefn_builtin(const char* name, int m, double R, int grid_points, qp_wavefn** out);
QP_API qp_status qp_wavefn_from_json(const char* json, qp_wavefn** out);
QP_API qp_status qp_wavefn_modulated(const qp_wavefn* base, double c, qp_wavefn** out);
QP_API void qp_wavefn_free(qp_wavefn* f);
QP_API qp_status qp_wavefn_to_json(const qp_wavefn* f, char** out);
QP_API qp_status qp_wavefn_label(const qp_wavefn* f, char** out);
QP_API qp_status qp_wavefn_bandwidth(const qp_wavefn* f, double* out);
QP_API qp_status qp_wavefn_vanishes_at_endpoints(const qp_wavefn* f, int* out);

/* Limiting distribution |F(f)|^2 and derived functionals. Infinite variance
 * is reported as +inf. */
QP_API qp_status qp_density(const qp_wavefn* f, const double* ys, size_t count, double* out);
QP_API qp_status qp_window_probability(const qp_wavefn* f, double r1, double r2, double* out);
QP_API qp_status qp_tail_probability(const qp_wavefn* f, double R, double* out);
QP_API qp_status qp_variance(const qp_wavefn* f, double* out);
QP_API qp_status qp_variance_by_moment(const qp_wavefn* f, double* out);
QP_API qp_status qp_q_variance(const qp_wavefn* f, double* out);
QP_API qp_status qp_cramer_rao_json(const qp_wavefn* f, char** out);
QP_API qp_status qp_required_applications(const qp_wavefn* f, double B, double eps, double* A,
                                          int64_t* count);

/* Spectral problems on the default grid unless grid_points is given. */
QP_API qp_status qp_lambda(double R, double* lambda, double* complement);
QP_API qp_status qp_lambda_asymptotic_complement(double R, double* out);
QP_API qp_status qp_prolate_json(double R, int grid_points, char** out);
QP_API qp_status qp_dirichlet_minimum(int grid_points, double* value);
QP_API qp_status qp_dirichlet_eigenvalues(size_t count, double* out);
QP_API qp_status qp_min_tail_rate(const double* R, size_t count, int use_asymptotic, double* slope,
                                  double* r_squared);

/* Tail curves; flagged[i] is 1 when tails[i] is below the 1e-13 floor. */
QP_API qp_status qp_tail_curve(const qp_wavefn* f, const double* ys, size_t count, double* tails,
                               int* flagged);
QP_API qp_status qp_min_tail_curve(const double* ys, size_t count, double* tails, int* flagged);
QP_API qp_status qp_convolution_bound_json(const double* ys, size_t count, double T, int N, char** out);

/* Finite-n protocol. */
QP_API qp_status qp_state_from_wavefn(const qp_wavefn* f, int n, qp_state** out);
QP_API qp_status qp_state_from_coeffs(const double* re, const double* im, size_t length, qp_state** out);
QP_API void qp_state_free(qp_state* s);
QP_API qp_status qp_state_to_json(const qp_state* s, char** out);
QP_API qp_status qp_state_n(const qp_state* s, int* out);
QP_API qp_status qp_outcome_density(const qp_state* s, double theta, double theta_hat, double* out);
QP_API qp_status qp_sample_outcomes(const qp_state* s, double theta, size_t count, uint64_t seed,
                                    double* out);
QP_API qp_status qp_sld_fisher(const qp_state* s, double* out);
QP_API qp_status qp_ks_distance(const qp_wavefn* f, const double* estimates, size_t count, int n,
                                double theta, double* out);

/* Interval estimation. */
QP_API qp_status qp_r_of_beta(double beta, double* out);
QP_API qp_status qp_design_create(double beta, int n, qp_design** out);
QP_API void qp_design_free(qp_design* d);
QP_API qp_status qp_design_to_json(const qp_design* d, char** out);
QP_API qp_status qp_design_info(const qp_design* d, double* R_beta, double* half_width);
QP_API qp_status qp_coverage(const qp_design* d, double theta, size_t trials, uint64_t seed,
                             double* coverage, double* standard_error);
QP_API qp_status qp_confidence_interval(double theta_hat, double half_width, double* L, double* U,
                                        int* whole);

/* Invariant suites: variance, tails, prolate, fisher, appendix_a1,
 * convergence, all. *passed is 1 when every check passed. */
QP_API qp_status qp_verify_json(const char* suite, char** out, int* passed);

#ifdef __cplusplus
}
#endif

#endif
